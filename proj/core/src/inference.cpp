#include "gcpc/inference.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gcpc/density.hpp"
#include "gcpc/diagnostics.hpp"
#include "gcpc/optimize.hpp"
#include "gcpc/specfun.hpp"

namespace gcpc {

double loglik_gcpc(std::span<const double> data, const GcpcParams& params) {
    if (data.empty()) throw std::invalid_argument("loglik_gcpc: empty data");
    double ll = 0.0;
    for (double theta : data) ll += log_pdf_polar(theta, params);
    return ll;
}

double loglik_cipc(std::span<const double> data, const GcpcParams& params) {
    GcpcParams p(params.omega, params.gamma, 1.0);
    return loglik_gcpc(data, p);
}

namespace {

constexpr double kLogBound = 25.0;  // |log gamma|, |log lambda| cap inside fits

double clamped_exp(double x) { return std::exp(std::clamp(x, -kLogBound, kLogBound)); }

// Moment start for gamma: match the wrapped Cauchy resultant length.
double gamma_start(std::span<const double> data) {
    std::vector<double> v(data.begin(), data.end());
    const double rbar = std::clamp(circular_moments(v).resultant, 0.01, 0.95);
    return delta_to_gamma(rbar);
}

std::vector<GcpcParams> start_grid(std::span<const double> data, int n_starts) {
    std::vector<double> v(data.begin(), data.end());
    const double omega0 = circular_moments(v).mean;
    const double g0 = gamma_start(data);
    std::vector<GcpcParams> grid;
    const double lambda_starts[3] = {1.0, 0.2, 5.0};
    for (int k = 0; k < 4; ++k)
        for (double l0 : lambda_starts)
            grid.emplace_back(omega0 + k * pi / 2.0, g0, l0);
    // Extended tier for callers that ask for more than the canonical 12.
    for (int k = 0; k < 4; ++k)
        for (double l0 : lambda_starts)
            grid.emplace_back(omega0 + pi / 4.0 + k * pi / 2.0, g0, l0);
    const int want = std::clamp(n_starts, 1, static_cast<int>(grid.size()));
    grid.resize(want);
    return grid;
}

struct SingleFit {
    GcpcParams params;
    double loglik;
    bool converged;
};

SingleFit fit_from_start(std::span<const double> data, const GcpcParams& start,
                         Family family, const FitOptions& options) {
    const bool gcpc = family == Family::Gcpc;
    auto objective = [&](const Eigen::VectorXd& x) {
        const GcpcParams p(Angle(x[0]), clamped_exp(x[1]),
                           gcpc ? clamped_exp(x[2]) : 1.0);
        return -loglik_gcpc(data, p);
    };
    Eigen::VectorXd x0(gcpc ? 3 : 2);
    x0[0] = start.omega.radians();
    x0[1] = std::log(std::max(start.gamma, 1e-8));
    if (gcpc) x0[2] = std::log(start.lambda);

    optim::Options opts;
    opts.tol = options.tol;
    opts.max_iterations = options.max_iterations;
    const optim::Result r = optim::minimize(objective, x0, opts);

    SingleFit out{GcpcParams(Angle(r.x[0]), clamped_exp(r.x[1]),
                             gcpc ? clamped_exp(r.x[2]) : 1.0),
                  -r.fx, r.converged};
    return out;
}

FitResult fit_family(std::span<const double> data, Family family,
                     const FitOptions& options) {
    const std::size_t min_n = family == Family::Gcpc ? 4 : 3;
    if (data.size() < min_n)
        throw std::invalid_argument("fit: need at least " + std::to_string(min_n) +
                                    " observations");
    std::vector<GcpcParams> starts = options.explicit_starts;
    if (starts.empty()) starts = start_grid(data, options.n_starts);

    FitResult fit;
    fit.family = family;
    fit.n_starts = static_cast<int>(starts.size());
    fit.loglik = -std::numeric_limits<double>::infinity();
    for (const GcpcParams& s : starts) {
        const SingleFit single = fit_from_start(data, s, family, options);
        fit.starts_tried.push_back({s, single.loglik, single.converged});
        if (single.loglik > fit.loglik) {
            fit.loglik = single.loglik;
            fit.params = single.params;
            fit.converged = single.converged;
        }
    }
    if (!fit.converged) {
        log_diagnostic("fit: optimizer failed to converge on the selected start");
    }
    fit.near_uniform = fit.params.gamma < 1e-6;
    if (fit.converged) {
        try {
            if (auto se = std_errors(fit, data)) {
                fit.std_errors = *se;
                fit.se_available = true;
            }
        } catch (const std::exception& e) {
            log_diagnostic(std::string("fit: standard errors unavailable: ") + e.what());
        }
    }
    return fit;
}

}  // namespace

FitResult fit_gcpc(std::span<const double> data, const FitOptions& options) {
    return fit_family(data, Family::Gcpc, options);
}

FitResult fit_cipc(std::span<const double> data, const FitOptions& options) {
    return fit_family(data, Family::Cipc, options);
}

std::optional<std::vector<double>> std_errors(const FitResult& fit,
                                              std::span<const double> data) {
    const bool gcpc = fit.family == Family::Gcpc;
    const int dim = gcpc ? 3 : 2;
    auto negll = [&](const Eigen::VectorXd& x) {
        if (x[1] < 0.0 || (gcpc && x[2] <= 0.0))
            return std::numeric_limits<double>::max();
        const GcpcParams p(Angle(x[0]), x[1], gcpc ? x[2] : 1.0);
        return -loglik_gcpc(data, p);
    };
    Eigen::VectorXd x(dim);
    x[0] = fit.params.omega.radians();
    x[1] = fit.params.gamma;
    if (gcpc) x[2] = fit.params.lambda;

    // Only meaningful at a stationary point of the likelihood.
    const Eigen::VectorXd grad = optim::numeric_gradient(negll, x);
    const double gtol = 0.05 * std::sqrt(static_cast<double>(data.size()));
    if (grad.lpNorm<Eigen::Infinity>() > gtol)
        throw std::invalid_argument("std_errors: gradient is not ~0; not an optimum");

    if (x[1] < 1e-5) return std::nullopt;  // information ill-defined at the boundary

    const Eigen::MatrixXd hess = optim::numeric_hessian(negll, x);
    Eigen::LLT<Eigen::MatrixXd> llt(hess);
    if (llt.info() != Eigen::Success) {
        log_diagnostic("std_errors: observed information is not positive definite");
        return std::nullopt;
    }
    const Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(dim, dim));
    std::vector<double> se(dim);
    for (int i = 0; i < dim; ++i) {
        if (cov(i, i) <= 0.0) {
            log_diagnostic("std_errors: non-positive variance on the diagonal");
            return std::nullopt;
        }
        se[i] = std::sqrt(cov(i, i));
    }
    return se;
}

LrtResult lrt_nested(double loglik_full, double loglik_restricted, int df) {
    LrtResult r;
    double stat = 2.0 * (loglik_full - loglik_restricted);
    if (stat < -1e-6)
        log_diagnostic("lrt: restricted log-likelihood exceeds the full one by " +
                       std::to_string(-stat / 2.0));
    r.statistic = std::max(0.0, stat);
    r.df = df;
    r.p_value = specfun::chi2_sf(r.statistic, df);
    return r;
}

LrtResult lrt_one_location(std::span<const double> data, Angle omega0,
                           const FitOptions& options) {
    FitResult full = fit_gcpc(data, options);

    // Restricted fit over (gamma, lambda) with omega pinned.
    const double g0 = gamma_start(data);
    std::vector<std::pair<double, double>> starts = {
        {g0, 0.2}, {g0, 1.0}, {g0, 5.0}, {full.params.gamma, full.params.lambda}};
    FitResult restricted;
    restricted.family = Family::Gcpc;
    restricted.loglik = -std::numeric_limits<double>::infinity();
    restricted.n_starts = static_cast<int>(starts.size());
    for (auto [gs, ls] : starts) {
        auto objective = [&](const Eigen::VectorXd& x) {
            const GcpcParams p(omega0, clamped_exp(x[0]), clamped_exp(x[1]));
            return -loglik_gcpc(data, p);
        };
        Eigen::VectorXd x0(2);
        x0[0] = std::log(std::max(gs, 1e-8));
        x0[1] = std::log(ls);
        optim::Options opts;
        opts.tol = options.tol;
        opts.max_iterations = options.max_iterations;
        const optim::Result r = optim::minimize(objective, x0, opts);
        const GcpcParams p(omega0, clamped_exp(r.x[0]), clamped_exp(r.x[1]));
        restricted.starts_tried.push_back({GcpcParams(omega0, gs, ls), -r.fx, r.converged});
        if (-r.fx > restricted.loglik) {
            restricted.loglik = -r.fx;
            restricted.params = p;
            restricted.converged = r.converged;
        }
    }

    LrtResult out = lrt_nested(full.loglik, restricted.loglik, 1);
    out.fit_h0 = {std::move(restricted)};
    out.fit_h1 = {std::move(full)};
    return out;
}

namespace {

FitResult joint_component(Angle omega, double gamma, double lambda, double loglik,
                          bool converged, Family family) {
    FitResult f;
    f.family = family;
    f.params = GcpcParams(omega, gamma, lambda);
    f.loglik = loglik;
    f.converged = converged;
    f.near_uniform = gamma < 1e-6;
    return f;
}

}  // namespace

LrtResult lrt_two_locations(std::span<const double> data1,
                            std::span<const double> data2, Family family,
                            const FitOptions& options) {
    if (data1.size() < 4 || data2.size() < 4)
        throw std::invalid_argument("lrt_two_locations: need >= 4 observations per sample");
    const bool gcpc = family == Family::Gcpc;

    FitResult f1 = gcpc ? fit_gcpc(data1, options) : fit_cipc(data1, options);
    FitResult f2 = gcpc ? fit_gcpc(data2, options) : fit_cipc(data2, options);
    const double ll1 = f1.loglik + f2.loglik;

    // Shared-location surface inherits the multimodality of both samples, so
    // seed omega from the pooled mean (plus pi/2 shifts) and both sample MLEs.
    std::vector<double> pooled(data1.begin(), data1.end());
    pooled.insert(pooled.end(), data2.begin(), data2.end());
    const double pooled_mean = circular_moments(pooled).mean;
    std::vector<double> omega_starts = {pooled_mean, f1.params.omega.radians(),
                                        f2.params.omega.radians()};
    for (int k = 1; k < 4; ++k) omega_starts.push_back(pooled_mean + k * pi / 2.0);

    const int dim = gcpc ? 5 : 3;
    auto unpack = [&](const Eigen::VectorXd& x) {
        const GcpcParams p1(Angle(x[0]), clamped_exp(x[1]),
                            gcpc ? clamped_exp(x[2]) : 1.0);
        const GcpcParams p2(Angle(x[0]), clamped_exp(x[gcpc ? 3 : 2]),
                            gcpc ? clamped_exp(x[4]) : 1.0);
        return std::make_pair(p1, p2);
    };
    auto objective = [&](const Eigen::VectorXd& x) {
        const auto [p1, p2] = unpack(x);
        return -loglik_gcpc(data1, p1) - loglik_gcpc(data2, p2);
    };

    double best = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_x;
    bool best_conv = false;
    for (double w0 : omega_starts) {
        Eigen::VectorXd x0(dim);
        x0[0] = w0;
        x0[1] = std::log(std::max(f1.params.gamma, 1e-8));
        if (gcpc) {
            x0[2] = std::log(f1.params.lambda);
            x0[3] = std::log(std::max(f2.params.gamma, 1e-8));
            x0[4] = std::log(f2.params.lambda);
        } else {
            x0[2] = std::log(std::max(f2.params.gamma, 1e-8));
        }
        optim::Options opts;
        opts.tol = options.tol;
        opts.max_iterations = options.max_iterations;
        const optim::Result r = optim::minimize(objective, x0, opts);
        if (-r.fx > best) {
            best = -r.fx;
            best_x = r.x;
            best_conv = r.converged;
        }
    }

    const auto [p1, p2] = unpack(best_x);
    LrtResult out = lrt_nested(ll1, best, 1);
    out.fit_h0 = {joint_component(p1.omega, p1.gamma, p1.lambda,
                                  loglik_gcpc(data1, p1), best_conv, family),
                  joint_component(p2.omega, p2.gamma, p2.lambda,
                                  loglik_gcpc(data2, p2), best_conv, family)};
    out.fit_h1 = {std::move(f1), std::move(f2)};
    return out;
}

LocationCI location_ci(std::span<const double> data, double level,
                       const LocationCiOptions& options) {
    if (!(level > 0.5 && level < 1.0))
        throw std::invalid_argument("location_ci: level must lie in (0.5, 1)");
    const FitResult fit = fit_gcpc(data, options.fit);
    const double omega_hat = fit.params.omega.radians();
    const double threshold =
        fit.loglik - 0.5 * specfun::chi2_quantile(level, 1.0);

    auto profile_ll = [&](double omega) {
        if (!options.profile) {
            const GcpcParams p(Angle(omega), fit.params.gamma, fit.params.lambda);
            return loglik_gcpc(data, p);
        }
        auto objective = [&](const Eigen::VectorXd& x) {
            const GcpcParams p(Angle(omega), clamped_exp(x[0]), clamped_exp(x[1]));
            return -loglik_gcpc(data, p);
        };
        Eigen::VectorXd x0(2);
        x0[0] = std::log(std::max(fit.params.gamma, 1e-8));
        x0[1] = std::log(fit.params.lambda);
        return -optim::minimize(objective, x0).fx;
    };

    if (profile_ll(omega_hat) < threshold)
        throw std::runtime_error("location_ci: omega-hat outside its own region");

    // March away from omega-hat on each side, then bisect the crossing.
    auto boundary_offset = [&](double sign) {
        const int grid = 512;
        double inside = 0.0;
        double outside = sign * pi;
        bool crossed = false;
        for (int i = 1; i <= grid; ++i) {
            const double off = sign * pi * i / grid;
            if (profile_ll(omega_hat + off) < threshold) {
                outside = off;
                crossed = true;
                break;
            }
            inside = off;
        }
        if (!crossed) return sign * pi;  // region covers the half-circle
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (inside + outside);
            if (profile_ll(omega_hat + mid) >= threshold)
                inside = mid;
            else
                outside = mid;
            if (std::abs(outside - inside) < 1e-6) break;
        }
        return 0.5 * (inside + outside);
    };

    LocationCI ci;
    ci.level = level;
    ci.omega_hat = fit.params.omega;
    ci.upper_offset = boundary_offset(+1.0);
    ci.lower_offset = boundary_offset(-1.0);
    ci.lower = Angle(omega_hat + ci.lower_offset);
    ci.upper = Angle(omega_hat + ci.upper_offset);
    return ci;
}

}  // namespace gcpc
