#include "gcpc/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include "gcpc/inference.hpp"
#include "gcpc/regression.hpp"

namespace gcpc::sim {

const char* to_string(Study s) {
    switch (s) {
        case Study::Type1OneSample: return "type1-one-sample";
        case Study::Type1TwoSample: return "type1-two-sample";
        case Study::ConvergenceRate: return "convergence-rate";
    }
    return "?";
}

const char* to_string(RateScenario s) {
    switch (s) {
        case RateScenario::Circular: return "circular";
        case RateScenario::Continuous: return "continuous";
        case RateScenario::Both: return "both";
    }
    return "?";
}

double sample_von_mises(double location, double concentration, Rng& rng) {
    if (concentration < 1e-8)
        return canonicalize_radians(location + two_pi * (rng.uniform_open() - 0.5));
    const double a = 1.0 + std::sqrt(1.0 + 4.0 * concentration * concentration);
    const double b = (a - std::sqrt(2.0 * a)) / (2.0 * concentration);
    const double r = (1.0 + b * b) / (2.0 * b);
    for (;;) {
        const double z = std::cos(pi * rng.uniform_open());
        const double f = (1.0 + r * z) / (r + z);
        const double c = concentration * (r - f);
        const double u2 = rng.uniform_open();
        if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) {
            const double u3 = rng.uniform_open();
            return canonicalize_radians(location +
                                        std::copysign(std::acos(f), u3 - 0.5));
        }
    }
}

double sample_exponential(double mean, Rng& rng) {
    if (!(mean > 0.0)) throw std::invalid_argument("sample_exponential: mean <= 0");
    return -mean * std::log(rng.uniform_open());
}

Eigen::MatrixXd default_rate_coefficients(RateScenario scenario) {
    switch (scenario) {
        case RateScenario::Circular: {
            Eigen::MatrixXd b(3, 2);
            b << 1.874, 2.550, -1.473, -2.023, -1.157, -1.554;
            return b;
        }
        case RateScenario::Continuous: {
            Eigen::MatrixXd b(2, 2);
            b << 1.641, 1.949, -0.101, -0.119;
            return b;
        }
        case RateScenario::Both: {
            Eigen::MatrixXd b(4, 2);
            b << 1.859, 3.508, -1.500, -2.914, -0.960, -1.855, -0.246, -0.181;
            return b;
        }
    }
    throw std::logic_error("unknown scenario");
}

namespace {

void validate(const SimCampaign& c) {
    if (c.replicates < 1) throw std::invalid_argument("campaign: replicates must be >= 1");
    if (!(c.alpha > 0.0 && c.alpha <= 1.0))
        throw std::invalid_argument("campaign: alpha must lie in (0, 1]");
    if (c.parallelism < 1) throw std::invalid_argument("campaign: parallelism must be >= 1");
}

void parallel_for(int jobs, int parallelism, const std::function<void(int)>& work) {
    if (parallelism <= 1 || jobs <= 1) {
        for (int i = 0; i < jobs; ++i) work(i);
        return;
    }
    std::atomic<int> next{0};
    const int workers = std::min(parallelism, jobs);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < jobs; i = next.fetch_add(1)) work(i);
        });
    for (auto& t : pool) t.join();
}

double mc_se(double p, int n) { return n > 0 ? std::sqrt(p * (1.0 - p) / n) : 0.0; }

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

void note_failures(SimReport& report, const std::string& label, int failures,
                   int replicates) {
    if (failures == 0) return;
    std::string msg = label + ": " + std::to_string(failures) + "/" +
                      std::to_string(replicates) + " replicates failed";
    if (failures * 100 >= replicates)
        msg += " (>= 1%; rates for this cell are unreliable)";
    report.warnings.push_back(msg);
}

bool params_match(const GcpcParams& a, const GcpcParams& b) {
    return a.omega.radians() == b.omega.radians() && a.gamma == b.gamma &&
           a.lambda == b.lambda;
}

// Reference type-I error estimates (1000 replicates) for the canonical designs;
// soft consistency check, only logged.
void soft_check_reference(SimReport& report, const RateCell& cell, double reference,
                          double reference_cipc) {
    if (report.config.replicates < 1000 || reference <= 0.0) return;
    auto band_note = [&](const char* which, double rate, double se, double ref) {
        if (std::abs(rate - ref) <= 2.0 * se) return;
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "cell (%d, %d) %s rate %.3f +- 2*%.3f does not cover the "
                      "reference %.3f",
                      cell.n1, cell.n2, which, rate, se, ref);
        report.warnings.push_back(buf);
    };
    band_note("gcpc", cell.rate, cell.mc_se, reference);
    if (reference_cipc > 0.0) band_note("cipc", cell.rate_cipc, cell.mc_se_cipc, reference_cipc);
}

double one_sample_reference(const SimCampaign& c, int n) {
    if (!params_match(c.true_params, GcpcParams(2.0, 3.0, 2.0)) || c.omega0 != 2.0 ||
        c.alpha != 0.05)
        return 0.0;
    switch (n) {
        case 30: return 0.065;
        case 50: return 0.059;
        case 70: return 0.066;
        case 100: return 0.062;
        case 150: return 0.067;
        case 200: return 0.063;
    }
    return 0.0;
}

std::pair<double, double> two_sample_reference(const SimCampaign& c, int n1, int n2) {
    if (!params_match(c.smaller_params, GcpcParams(2.0, 4.0, 1.0)) ||
        !params_match(c.larger_params, GcpcParams(2.0, 2.0, 3.0)) || c.alpha != 0.05)
        return {0.0, 0.0};
    if (n1 == 30 && n2 == 50) return {0.054, 0.098};
    if (n1 == 30 && n2 == 70) return {0.056, 0.094};
    if (n1 == 30 && n2 == 100) return {0.060, 0.102};
    if (n1 == 50 && n2 == 70) return {0.048, 0.100};
    if (n1 == 50 && n2 == 100) return {0.059, 0.101};
    if (n1 == 70 && n2 == 100) return {0.061, 0.092};
    return {0.0, 0.0};
}

}  // namespace

SimReport run_type1_one_sample(const SimCampaign& campaign) {
    validate(campaign);
    if (campaign.sample_sizes.empty())
        throw std::invalid_argument("campaign: sample_sizes must be non-empty");
    Timer timer;
    SimReport report;
    report.config = campaign;

    FitOptions fopts;
    fopts.n_starts = campaign.fit_starts;
    for (std::size_t cell = 0; cell < campaign.sample_sizes.size(); ++cell) {
        const int n = campaign.sample_sizes[cell];
        std::vector<int> outcome(campaign.replicates, -1);  // 1 reject, 0 keep, -1 fail
        parallel_for(campaign.replicates, campaign.parallelism, [&](int rep) {
            Rng rng(sub_seed(campaign.seed, cell, static_cast<std::uint64_t>(rep)));
            try {
                const std::vector<double> data = [&] {
                    std::vector<double> v(n);
                    for (int i = 0; i < n; ++i)
                        v[i] = sample_one(campaign.true_params, rng).radians();
                    return v;
                }();
                const LrtResult lrt =
                    lrt_one_location(data, Angle(campaign.omega0), fopts);
                outcome[rep] = lrt.p_value <= campaign.alpha ? 1 : 0;
            } catch (const std::exception&) {
                outcome[rep] = -1;
            }
        });
        RateCell rc;
        rc.n1 = n;
        int rejections = 0, valid = 0;
        for (int o : outcome) {
            if (o < 0)
                ++rc.failures;
            else {
                ++valid;
                rejections += o;
            }
        }
        rc.rate = valid > 0 ? static_cast<double>(rejections) / valid : 0.0;
        rc.mc_se = mc_se(rc.rate, valid);
        note_failures(report, "n=" + std::to_string(n), rc.failures,
                      campaign.replicates);
        soft_check_reference(report, rc, one_sample_reference(campaign, n), 0.0);
        report.cells.push_back(rc);
    }
    report.runtime_seconds = timer.seconds();
    return report;
}

SimReport run_type1_two_sample(const SimCampaign& campaign) {
    validate(campaign);
    if (campaign.sample_size_pairs.empty())
        throw std::invalid_argument("campaign: sample_size_pairs must be non-empty");
    Timer timer;
    SimReport report;
    report.config = campaign;

    FitOptions fopts;
    fopts.n_starts = campaign.fit_starts;
    for (std::size_t cell = 0; cell < campaign.sample_size_pairs.size(); ++cell) {
        const auto [a, b] = campaign.sample_size_pairs[cell];
        const int n_small = std::min(a, b);
        const int n_large = std::max(a, b);
        std::vector<int> out_gcpc(campaign.replicates, -1);
        std::vector<int> out_cipc(campaign.replicates, -1);
        parallel_for(campaign.replicates, campaign.parallelism, [&](int rep) {
            Rng rng(sub_seed(campaign.seed, 1000 + cell, static_cast<std::uint64_t>(rep)));
            try {
                std::vector<double> d1(n_small), d2(n_large);
                for (int i = 0; i < n_small; ++i)
                    d1[i] = sample_one(campaign.smaller_params, rng).radians();
                for (int i = 0; i < n_large; ++i)
                    d2[i] = sample_one(campaign.larger_params, rng).radians();
                const LrtResult g = lrt_two_locations(d1, d2, Family::Gcpc, fopts);
                const LrtResult c = lrt_two_locations(d1, d2, Family::Cipc, fopts);
                out_gcpc[rep] = g.p_value <= campaign.alpha ? 1 : 0;
                out_cipc[rep] = c.p_value <= campaign.alpha ? 1 : 0;
            } catch (const std::exception&) {
                out_gcpc[rep] = -1;
                out_cipc[rep] = -1;
            }
        });
        RateCell rc;
        rc.n1 = n_small;
        rc.n2 = n_large;
        int rej_g = 0, rej_c = 0, valid = 0;
        for (int rep = 0; rep < campaign.replicates; ++rep) {
            if (out_gcpc[rep] < 0) {
                ++rc.failures;
                continue;
            }
            ++valid;
            rej_g += out_gcpc[rep];
            rej_c += out_cipc[rep];
        }
        rc.rate = valid > 0 ? static_cast<double>(rej_g) / valid : 0.0;
        rc.rate_cipc = valid > 0 ? static_cast<double>(rej_c) / valid : 0.0;
        rc.mc_se = mc_se(rc.rate, valid);
        rc.mc_se_cipc = mc_se(rc.rate_cipc, valid);
        note_failures(report,
                      "pair (" + std::to_string(n_small) + ", " + std::to_string(n_large) +
                          ")",
                      rc.failures, campaign.replicates);
        const auto [ref_g, ref_c] = two_sample_reference(campaign, n_small, n_large);
        soft_check_reference(report, rc, ref_g, ref_c);
        report.cells.push_back(rc);
    }
    report.runtime_seconds = timer.seconds();
    return report;
}

SimReport run_convergence_rate(const SimCampaign& campaign) {
    validate(campaign);
    if (campaign.sample_sizes.empty())
        throw std::invalid_argument("campaign: sample_sizes must be non-empty");
    Timer timer;
    SimReport report;
    report.config = campaign;

    const Eigen::MatrixXd true_b = campaign.true_coef.size() > 0
                                       ? campaign.true_coef
                                       : default_rate_coefficients(campaign.scenario);
    const Eigen::Index p = true_b.rows();
    const Eigen::Index expected_p =
        campaign.scenario == RateScenario::Circular
            ? 3
            : (campaign.scenario == RateScenario::Continuous ? 2 : 4);
    if (p != expected_p || true_b.cols() != 2)
        throw std::invalid_argument("campaign: coefficient matrix shape mismatch");

    for (std::size_t cell = 0; cell < campaign.sample_sizes.size(); ++cell) {
        const int n = campaign.sample_sizes[cell];
        std::vector<double> frob(campaign.replicates,
                                 std::numeric_limits<double>::quiet_NaN());
        parallel_for(campaign.replicates, campaign.parallelism, [&](int rep) {
            Rng rng(sub_seed(campaign.seed, 2000 + cell, static_cast<std::uint64_t>(rep)));
            try {
                std::vector<Predictor> preds;
                if (campaign.scenario != RateScenario::Continuous) {
                    Eigen::MatrixXd u(n, 1);
                    for (int i = 0; i < n; ++i)
                        u(i, 0) = sample_von_mises(campaign.vm_location,
                                                   campaign.vm_concentration, rng);
                    preds.push_back({PredictorKind::Circular, "u", u});
                }
                if (campaign.scenario != RateScenario::Circular) {
                    Eigen::MatrixXd x(n, 1);
                    for (int i = 0; i < n; ++i)
                        x(i, 0) = sample_exponential(campaign.exp_mean, rng);
                    preds.push_back({PredictorKind::Continuous, "x", x});
                }
                const Design design = build_design(preds);
                const Eigen::MatrixXd mu = design.matrix * true_b;
                std::vector<double> y(n);
                for (int i = 0; i < n; ++i) {
                    const double gi = std::hypot(mu(i, 0), mu(i, 1));
                    const GcpcParams row_params(std::atan2(mu(i, 1), mu(i, 0)), gi,
                                                campaign.rate_lambda);
                    y[i] = sample_one(row_params, rng).radians();
                }
                RegressionOptions ropts;
                const RegressionFit fit =
                    fit_regression(design, y, Family::Gcpc, ropts);
                frob[rep] = (fit.coef - true_b).squaredNorm();
            } catch (const std::exception&) {
                // leave NaN
            }
        });
        FrobCell fc;
        fc.n = n;
        double sum = 0.0, sum2 = 0.0;
        int valid = 0;
        for (double f : frob) {
            if (std::isnan(f)) {
                ++fc.failures;
                continue;
            }
            sum += f;
            sum2 += f * f;
            ++valid;
        }
        fc.mean_sq_frobenius = valid > 0 ? sum / valid : 0.0;
        if (valid > 1) {
            const double var = (sum2 - sum * sum / valid) / (valid - 1);
            fc.mc_se = std::sqrt(std::max(0.0, var) / valid);
        }
        note_failures(report, "n=" + std::to_string(n), fc.failures,
                      campaign.replicates);
        report.frob_cells.push_back(fc);
    }

    // log F2-bar ~ a + b log n by least squares over the cells.
    std::vector<double> lx, ly;
    for (const FrobCell& fc : report.frob_cells)
        if (fc.mean_sq_frobenius > 0.0) {
            lx.push_back(std::log(static_cast<double>(fc.n)));
            ly.push_back(std::log(fc.mean_sq_frobenius));
        }
    const std::size_t m = lx.size();
    if (m >= 2) {
        double xbar = 0.0, ybar = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            xbar += lx[i];
            ybar += ly[i];
        }
        xbar /= m;
        ybar /= m;
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            sxx += (lx[i] - xbar) * (lx[i] - xbar);
            sxy += (lx[i] - xbar) * (ly[i] - ybar);
        }
        report.slope = sxy / sxx;
        report.intercept = ybar - report.slope * xbar;
        if (m > 2) {
            double rss = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                const double r = ly[i] - report.intercept - report.slope * lx[i];
                rss += r * r;
            }
            report.slope_se = std::sqrt(rss / (m - 2) / sxx);
        }
    } else {
        report.warnings.push_back("rate study: fewer than two usable cells; no slope");
    }
    report.runtime_seconds = timer.seconds();
    return report;
}

SimReport run_campaign(const SimCampaign& campaign) {
    switch (campaign.study) {
        case Study::Type1OneSample: return run_type1_one_sample(campaign);
        case Study::Type1TwoSample: return run_type1_two_sample(campaign);
        case Study::ConvergenceRate: return run_convergence_rate(campaign);
    }
    throw std::logic_error("unknown study");
}

}  // namespace gcpc::sim
