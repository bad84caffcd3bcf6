#include "gcpc/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gcpc/density.hpp"
#include "gcpc/diagnostics.hpp"
#include "gcpc/optimize.hpp"

namespace gcpc {

Design build_design(const std::vector<Predictor>& predictors) {
    if (predictors.empty()) throw std::invalid_argument("build_design: no predictors");
    const Eigen::Index n = predictors.front().values.rows();
    Eigen::Index p = 1;
    for (const Predictor& pr : predictors) {
        if (pr.values.rows() != n)
            throw std::invalid_argument("build_design: predictor '" + pr.name +
                                        "' has a mismatched number of rows");
        switch (pr.kind) {
            case PredictorKind::Continuous: p += 1; break;
            case PredictorKind::Circular: p += 2; break;
            case PredictorKind::SimplexAlr:
                if (pr.values.cols() < 2)
                    throw std::invalid_argument(
                        "build_design: simplex predictor needs >= 2 parts");
                p += pr.values.cols() - 1;
                break;
        }
    }

    Design d;
    d.matrix.resize(n, p);
    d.matrix.col(0).setOnes();
    d.column_names.push_back("(intercept)");
    Eigen::Index col = 1;
    for (const Predictor& pr : predictors) {
        switch (pr.kind) {
            case PredictorKind::Continuous: {
                if (pr.values.cols() != 1)
                    throw std::invalid_argument("build_design: continuous predictor '" +
                                                pr.name + "' must have one column");
                if (!pr.values.allFinite())
                    throw std::invalid_argument("build_design: non-finite values in '" +
                                                pr.name + "'");
                d.matrix.col(col) = pr.values.col(0);
                d.column_names.push_back(pr.name);
                ++col;
                break;
            }
            case PredictorKind::Circular: {
                if (pr.values.cols() != 1)
                    throw std::invalid_argument("build_design: circular predictor '" +
                                                pr.name + "' must have one column");
                d.matrix.col(col) = pr.values.col(0).array().cos();
                d.matrix.col(col + 1) = pr.values.col(0).array().sin();
                d.column_names.push_back("cos(" + pr.name + ")");
                d.column_names.push_back("sin(" + pr.name + ")");
                col += 2;
                break;
            }
            case PredictorKind::SimplexAlr: {
                const Eigen::Index parts = pr.values.cols();
                for (Eigen::Index i = 0; i < n; ++i) {
                    const double sum = pr.values.row(i).sum();
                    if (std::abs(sum - 1.0) > 1e-9)
                        throw std::invalid_argument(
                            "build_design: composition rows of '" + pr.name +
                            "' must sum to 1 within 1e-9");
                    for (Eigen::Index j = 0; j < parts; ++j)
                        if (!(pr.values(i, j) > 0.0))
                            throw std::invalid_argument(
                                "build_design: composition '" + pr.name +
                                "' has a zero or negative part; the additive "
                                "log-ratio transform requires strictly positive "
                                "parts (the alpha-transformation, which handles "
                                "zeros, is not implemented here)");
                }
                for (Eigen::Index j = 0; j + 1 < parts; ++j) {
                    // Renormalization cancels inside the ratio.
                    d.matrix.col(col + j) =
                        (pr.values.col(j).array() / pr.values.col(parts - 1).array())
                            .log();
                    d.column_names.push_back("alr" + std::to_string(j + 1) + "(" +
                                             pr.name + ")");
                }
                col += parts - 1;
                break;
            }
        }
    }
    return d;
}

namespace {

// -inf instead of throwing, for use inside optimization loops.
double loglik_regression_impl(const Design& design, std::span<const double> y,
                              const Eigen::MatrixXd& coef, double lambda,
                              bool throw_on_degenerate) {
    const Eigen::Index n = design.matrix.rows();
    if (static_cast<Eigen::Index>(y.size()) != n)
        throw std::invalid_argument("regression loglik: response length mismatch");
    if (coef.rows() != design.matrix.cols() || coef.cols() != 2)
        throw std::invalid_argument("regression loglik: coefficient shape mismatch");
    if (!(lambda > 0.0)) throw std::invalid_argument("regression loglik: lambda <= 0");

    const Eigen::MatrixXd mu = design.matrix * coef;  // n x 2
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double m1 = mu(i, 0), m2 = mu(i, 1);
        const double gi = std::hypot(m1, m2);
        if (gi <= 0.0) {
            if (throw_on_degenerate)
                throw std::domain_error(
                    "regression loglik: degenerate linear predictor (|mu_i| = 0) in row " +
                    std::to_string(i));
            return -std::numeric_limits<double>::infinity();
        }
        const double y1 = std::cos(y[i]), y2 = std::sin(y[i]);
        const double q2 = (y1 * m1 + y2 * m2) / gi;
        const double q1 = (y1 * m2 - y2 * m1) / gi;
        sum += log_projected_term(gi, q1, q2, lambda);
    }
    return -sum - 0.5 * n * std::log(lambda) - n * std::log(two_pi);
}

Eigen::MatrixXd unflatten(const Eigen::VectorXd& x, Eigen::Index p) {
    Eigen::MatrixXd coef(p, 2);
    for (Eigen::Index j = 0; j < p; ++j) {
        coef(j, 0) = x[j];
        coef(j, 1) = x[p + j];
    }
    return coef;
}

}  // namespace

double loglik_gcpc_regression(const Design& design, std::span<const double> y,
                              const Eigen::MatrixXd& coef, double lambda) {
    return loglik_regression_impl(design, y, coef, lambda, true);
}

RegressionFit fit_regression(const Design& design, std::span<const double> y,
                             Family family, const RegressionOptions& options) {
    const Eigen::Index n = design.matrix.rows();
    const Eigen::Index p = design.matrix.cols();
    if (static_cast<Eigen::Index>(y.size()) != n)
        throw std::invalid_argument("fit_regression: response length mismatch");
    if (n <= 2 * p + 1)
        throw std::invalid_argument("fit_regression: need n > 2p + 1 observations");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.matrix);
    if (qr.rank() < p)
        throw std::invalid_argument("fit_regression: design matrix is rank deficient");

    const bool gcpc = family == Family::Gcpc;
    RegressionFit fit;
    fit.family = family;
    fit.column_names = design.column_names;

    // Stage 1: least squares of the Euclidean response on the design.
    Eigen::MatrixXd resp(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        resp(i, 0) = std::cos(y[i]);
        resp(i, 1) = std::sin(y[i]);
    }
    Eigen::MatrixXd coef = qr.solve(resp);
    fit.loglik_stage1 = loglik_regression_impl(design, y, coef, 1.0, false);

    // Stage 2: Brent over log lambda with B fixed.
    double log_lambda = 0.0;
    if (gcpc) {
        double lo = -3.0 * std::log(10.0), hi = 3.0 * std::log(10.0);
        auto neg_profile = [&](double l) {
            return -loglik_regression_impl(design, y, coef, std::exp(l), false);
        };
        optim::Result br = optim::brent(neg_profile, lo, hi, 1e-8);
        if (std::min(br.x[0] - lo, hi - br.x[0]) < 1e-3) {
            log_diagnostic(
                "fit_regression: lambda line search hit the bracket edge; widening");
            lo = 2.0 * lo;
            hi = 2.0 * hi;
            br = optim::brent(neg_profile, lo, hi, 1e-8);
        }
        log_lambda = br.x[0];
        fit.loglik_stage2 = -br.fx;
    } else {
        fit.loglik_stage2 = fit.loglik_stage1;
    }

    // Stage 3: joint refinement over (vec B, log lambda).
    const Eigen::Index dim = 2 * p + (gcpc ? 1 : 0);
    auto objective = [&](const Eigen::VectorXd& x) {
        const Eigen::MatrixXd b = unflatten(x, p);
        const double l = gcpc ? std::exp(std::clamp(x[2 * p], -25.0, 25.0)) : 1.0;
        return -loglik_regression_impl(design, y, b, l, false);
    };
    Eigen::VectorXd x0(dim);
    for (Eigen::Index j = 0; j < p; ++j) {
        x0[j] = coef(j, 0);
        x0[p + j] = coef(j, 1);
    }
    if (gcpc) x0[2 * p] = log_lambda;

    optim::Options opts;
    opts.tol = options.tol;
    opts.max_iterations = options.max_iterations;
    opts.initial_step = 0.1;
    const optim::Result r = optim::minimize(objective, x0, opts);
    if (-r.fx >= fit.loglik_stage2) {
        coef = unflatten(r.x, p);
        if (gcpc) log_lambda = std::clamp(r.x[2 * p], -25.0, 25.0);
        fit.loglik = -r.fx;
    } else {
        fit.loglik = fit.loglik_stage2;  // keep the stage-2 point
    }
    fit.converged = r.converged;
    fit.coef = coef;
    fit.lambda = gcpc ? std::exp(log_lambda) : 1.0;

    // Observed-information standard errors in natural parameters (vec B, lambda).
    {
        auto negll_nat = [&](const Eigen::VectorXd& x) {
            const Eigen::MatrixXd b = unflatten(x, p);
            const double l = gcpc ? x[2 * p] : 1.0;
            if (gcpc && l <= 0.0) return std::numeric_limits<double>::max();
            return -loglik_regression_impl(design, y, b, l, false);
        };
        Eigen::VectorXd xn(dim);
        for (Eigen::Index j = 0; j < p; ++j) {
            xn[j] = coef(j, 0);
            xn[p + j] = coef(j, 1);
        }
        if (gcpc) xn[2 * p] = fit.lambda;
        const Eigen::MatrixXd hess = optim::numeric_hessian(negll_nat, xn);
        Eigen::LLT<Eigen::MatrixXd> llt(hess);
        if (llt.info() == Eigen::Success) {
            const Eigen::MatrixXd cov =
                llt.solve(Eigen::MatrixXd::Identity(dim, dim));
            if ((cov.diagonal().array() > 0.0).all()) {
                fit.coef_se.resize(p, 2);
                for (Eigen::Index j = 0; j < p; ++j) {
                    fit.coef_se(j, 0) = std::sqrt(cov(j, j));
                    fit.coef_se(j, 1) = std::sqrt(cov(p + j, p + j));
                }
                fit.lambda_se = gcpc ? std::sqrt(cov(2 * p, 2 * p)) : 0.0;
                fit.se_available = true;
            }
        }
        if (!fit.se_available)
            log_diagnostic("fit_regression: observed information not positive definite");
    }

    // Fit quality: resultant length of the residual angles, delta-method SE.
    {
        const Eigen::MatrixXd mu = design.matrix * coef;
        double cbar = 0.0, sbar = 0.0;
        std::vector<double> ce(n), se(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double resid = y[i] - std::atan2(mu(i, 1), mu(i, 0));
            ce[i] = std::cos(resid);
            se[i] = std::sin(resid);
            cbar += ce[i];
            sbar += se[i];
        }
        cbar /= n;
        sbar /= n;
        fit.rho_hat = std::hypot(cbar, sbar);
        double vcc = 0.0, vss = 0.0, vcs = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            vcc += (ce[i] - cbar) * (ce[i] - cbar);
            vss += (se[i] - sbar) * (se[i] - sbar);
            vcs += (ce[i] - cbar) * (se[i] - sbar);
        }
        vcc /= n - 1;
        vss /= n - 1;
        vcs /= n - 1;
        if (fit.rho_hat > 0.0) {
            const double gc = cbar / fit.rho_hat, gs = sbar / fit.rho_hat;
            fit.rho_hat_se =
                std::sqrt((gc * gc * vcc + 2.0 * gc * gs * vcs + gs * gs * vss) / n);
        }
    }
    return fit;
}

std::vector<Angle> predict(const RegressionFit& fit, const Design& newdesign) {
    if (newdesign.column_names != fit.column_names)
        throw std::invalid_argument("predict: design columns do not match the fit");
    const Eigen::MatrixXd mu = newdesign.matrix * fit.coef;
    std::vector<Angle> out;
    out.reserve(mu.rows());
    for (Eigen::Index i = 0; i < mu.rows(); ++i) {
        if (std::hypot(mu(i, 0), mu(i, 1)) <= 0.0)
            throw std::domain_error("predict: degenerate linear predictor in row " +
                                    std::to_string(i));
        out.emplace_back(std::atan2(mu(i, 1), mu(i, 0)));
    }
    return out;
}

LrtResult compare_regressions(const RegressionFit& fit_gcpc,
                              const RegressionFit& fit_cipc) {
    if (fit_gcpc.family != Family::Gcpc || fit_cipc.family != Family::Cipc)
        throw std::invalid_argument("compare_regressions: pass (gcpc, cipc) fits");
    if (fit_gcpc.column_names != fit_cipc.column_names)
        throw std::invalid_argument("compare_regressions: designs do not match");
    return lrt_nested(fit_gcpc.loglik, fit_cipc.loglik, 1);
}

}  // namespace gcpc
