// Acceptance suite: one line per criterion, nonzero exit if any fail.
// Run from the repository root so the dataset gate can find data/.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "cli/csv.hpp"
#include "cli/digest.hpp"
#include "gcpc/density.hpp"
#include "gcpc/inference.hpp"
#include "gcpc/regression.hpp"
#include "gcpc/sampling.hpp"
#include "gcpc/simulation.hpp"
#include "gcpc/summaries.hpp"
#include "gcpc/unimodality.hpp"
#include "support/oracles.hpp"

using namespace gcpc;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

struct Criterion {
    int id;
    const char* label;
};

void report(const Criterion& c, bool pass, double seconds, const std::string& detail) {
    std::printf("%s %2d  %s (%.1f s)%s%s\n", pass ? "PASS" : "FAIL", c.id, c.label,
                seconds, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

void skip(const Criterion& c, const std::string& why) {
    std::printf("SKIP %2d  %s -- %s\n", c.id, c.label, why.c_str());
    std::fflush(stdout);
}

double run_timed(const std::function<bool(std::string&)>& body, const Criterion& c) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool pass = false;
    try {
        pass = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(c, pass, sec, detail);
    return sec;
}

const double kGammaGrid[] = {0.0, 0.5, 2.0, 10.0};
const double kLambdaGrid[] = {0.1, 0.5, 1.0, 2.0, 10.0};

int sim_jobs() {
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::min(8u, hw == 0 ? 1u : hw));
}

}  // namespace

int main() {
    // 1. normalization
    run_timed(
        [&](std::string& detail) {
            const auto t0 = std::chrono::steady_clock::now();
            double worst = 0.0;
            for (double g : kGammaGrid)
                for (double l : kLambdaGrid) {
                    const GcpcParams p(0.7, g, l);
                    worst = std::max(worst,
                                     std::abs(oracles::density_mass(p, 0.7 - pi, 0.7 + pi,
                                                                    1e-10) -
                                              1.0));
                }
            const double sec = std::chrono::duration<double>(
                                   std::chrono::steady_clock::now() - t0)
                                   .count();
            char buf[128];
            std::snprintf(buf, sizeof buf, "max |mass-1| = %.2e", worst);
            detail = buf;
            return worst < 1e-8 && sec < 5.0;
        },
        {1, "normalization: integral of the density is 1 on the 4x5 grid"});

    // 2. reduction to the wrapped Cauchy at lambda = 1
    run_timed(
        [&](std::string& detail) {
            double worst = 0.0;
            for (double delta : {0.0, 0.1, 0.3, 0.6, 0.9}) {
                const GcpcParams p(0.8, delta_to_gamma(delta), 1.0);
                const WcParams wc(0.8, delta);
                for (int i = 0; i < 10000; ++i) {
                    const double t = -pi + two_pi * i / 10000.0;
                    worst = std::max(worst, std::abs(pdf_polar(t, p) - wc_pdf(t, wc)));
                }
            }
            char buf[128];
            std::snprintf(buf, sizeof buf, "max pointwise diff = %.2e", worst);
            detail = buf;
            return worst < 1e-12;
        },
        {2, "reduction: lambda = 1 density equals the wrapped Cauchy pointwise"});

    // 3. angle transforms: round trip and measure preservation
    run_timed(
        [&](std::string& detail) {
            std::mt19937_64 gen(8001);
            std::uniform_real_distribution<double> ang(-pi, pi);
            std::uniform_real_distribution<double> loglam(std::log(0.05), std::log(20.0));
            double worst_rt = 0.0;
            for (int i = 0; i < 10000; ++i) {
                const double phi = ang(gen);
                const double l = std::exp(loglam(gen));
                worst_rt = std::max(
                    worst_rt,
                    std::abs(from_wc_angle(to_wc_angle(Angle(phi), l), l).radians() - phi));
            }
            double worst_p = 0.0;
            const GcpcParams cases[] = {{0.5, 2.0, 3.0}, {2.8, 1.5, 0.6},
                                        {0.873, 0.238, 0.155}};
            for (const auto& p : cases)
                for (int i = 0; i < 34; ++i) {
                    double a = ang(gen), b = ang(gen);
                    if (a > b) std::swap(a, b);
                    worst_p = std::max(
                        worst_p, std::abs(interval_probability(Angle(a), Angle(b), p) -
                                          oracles::density_mass(p, a, b, 1e-11)));
                }
            char buf[160];
            std::snprintf(buf, sizeof buf, "round trip %.2e, interval-vs-quadrature %.2e",
                          worst_rt, worst_p);
            detail = buf;
            return worst_rt < 1e-12 && worst_p < 1e-8;
        },
        {3, "transforms: round trip and interval probabilities match quadrature"});

    // 4. entropy
    run_timed(
        [&](std::string& detail) {
            double worst = 0.0;
            for (double g : kGammaGrid)
                for (double l : kLambdaGrid) {
                    const GcpcParams p(0.4, g, l);
                    worst = std::max(worst,
                                     std::abs(entropy(p) - oracles::entropy_by_quadrature(p)));
                }
            double worst_special = 0.0;
            for (double delta : {0.0, 0.3, 0.8}) {
                const GcpcParams p(0.0, delta_to_gamma(delta), 1.0);
                worst_special = std::max(
                    worst_special,
                    std::abs(entropy(p) - std::log(two_pi * (1.0 - delta * delta))));
            }
            for (double l : {0.3, 1.0, 5.0}) {
                const double sl = std::sqrt(l);
                worst_special = std::max(
                    worst_special,
                    std::abs(entropy(GcpcParams(0.0, 0.0, l)) -
                             std::log(8.0 * pi * sl / ((sl + 1.0) * (sl + 1.0)))));
            }
            char buf[160];
            std::snprintf(buf, sizeof buf, "grid diff %.2e, special cases %.2e", worst,
                          worst_special);
            detail = buf;
            return worst < 1e-8 && worst_special < 1e-12;
        },
        {4, "entropy: closed form equals -int f log f; special cases exact"});

    // 5. mean resultant length
    run_timed(
        [&](std::string& detail) {
            double worst = 0.0;
            for (double g : kGammaGrid)
                for (double l : kLambdaGrid) {
                    const GcpcParams p(0.0, g, l);
                    worst = std::max(worst, std::abs(mean_resultant_length(p) -
                                                     oracles::rho_by_quadrature(p)));
                }
            double worst_wc = 0.0;
            for (double delta : {0.0, 0.25, 0.5, 0.9})
                worst_wc = std::max(
                    worst_wc,
                    std::abs(mean_resultant_length(GcpcParams(0.0, delta_to_gamma(delta), 1.0)) -
                             delta));
            char buf[160];
            std::snprintf(buf, sizeof buf, "grid diff %.2e, lambda=1 diff %.2e", worst,
                          worst_wc);
            detail = buf;
            return worst < 1e-8 && worst_wc < 1e-10;
        },
        {5, "mean resultant length: elliptic route equals quadrature; rho = delta at lambda = 1"});

    // 6. KL divergence
    run_timed(
        [&](std::string& detail) {
            double worst = 0.0, most_negative = 0.0;
            for (double g : kGammaGrid)
                for (double l : kLambdaGrid) {
                    const GcpcParams p(0.0, g, l);
                    const double kl = kl_gcpc_from_cipc(p);
                    worst = std::max(worst, std::abs(kl - oracles::kl_by_quadrature(p)));
                    most_negative = std::min(most_negative, kl);
                }
            const double at_one = std::abs(kl_gcpc_from_cipc(GcpcParams(0.3, 2.0, 1.0)));
            char buf[160];
            std::snprintf(buf, sizeof buf, "vs definition %.2e, KL(lambda=1) %.2e", worst,
                          at_one);
            detail = buf;
            return worst < 1e-8 && at_one < 1e-10 && most_negative > -1e-10;
        },
        {6, "KL(GCPC || CIPC): formula matches definition, zero at lambda = 1, nonnegative"});

    // 7. unimodality classifier vs the grid oracle
    run_timed(
        [&](std::string& detail) {
            int checked = 0, agreed = 0;
            for (int i = 0; i < 20; ++i) {
                for (int j = 0; j < 20; ++j) {
                    const double g = 4.0 * i / 19.0;
                    double l = std::exp(std::log(0.05) +
                                        (std::log(12.0) - std::log(0.05)) * j / 19.0);
                    if (std::abs(l - 1.0) < 0.05) l = 1.0;  // pin one column to exactly 1
                    const double m = l - g * g - 1.0;
                    const double g2p1 = g * g + 1.0;
                    // skip 1e-6 bands around the case boundaries
                    if ((l != 1.0 && std::abs(l - 1.0) < 1e-6) ||
                        std::abs(l - 0.5) < 1e-6 || (l != 1.0 && std::abs(m) < 1e-6))
                        continue;
                    if (l == 1.0 && g == 0.0) continue;  // flat density, no strict mode
                    if (l > g2p1 &&
                        std::abs(g2p1 * (l - 1.0) -
                                 (l - g2p1) * (2.0 * l - 1.0) * (2.0 * l - 1.0)) < 1e-6)
                        continue;
                    if (l > 0.5 && l < 1.0 &&
                        std::abs((g2p1 - l) * (1.0 - 2.0 * l) * (1.0 - 2.0 * l) -
                                 g2p1 * (1.0 - l)) < 1e-6)
                        continue;
                    const GcpcParams p(0.0, g, l);
                    ++checked;
                    const bool oracle_unimodal =
                        oracles::grid_mode_count(p, 100000) == 1;
                    agreed += classify_unimodality(p).unimodal == oracle_unimodal;
                }
            }
            const auto wind = classify_unimodality(GcpcParams(0.873, 0.238, 0.155));
            char buf[160];
            std::snprintf(buf, sizeof buf, "%d/%d cells agree; lambda=0.155 bimodal=%s",
                          agreed, checked, wind.unimodal ? "no" : "yes");
            detail = buf;
            return agreed == checked && checked > 300 && !wind.unimodal;
        },
        {7, "unimodality classifier agrees with the 1e5-point mode-count oracle"});

    // 8. MLE recovery and the multi-start guarantee
    run_timed(
        [&](std::string& detail) {
            std::vector<double> err_om, err_g, err_l;
            bool global_pick = true;
            for (int seed = 1; seed <= 20; ++seed) {
                const auto data = sample_radians(GcpcParams(2.0, 3.0, 2.0), 2000,
                                                 sub_seed(42, 7, seed));
                const FitResult multi = fit_gcpc(data);
                FitOptions single;
                single.n_starts = 1;
                const FitResult one = fit_gcpc(data, single);
                global_pick = global_pick && multi.loglik >= one.loglik - 1e-9;
                err_om.push_back(
                    std::abs(canonicalize_radians(multi.params.omega.radians() - 2.0)));
                err_g.push_back(std::abs(multi.params.gamma - 3.0) / 3.0);
                err_l.push_back(std::abs(multi.params.lambda - 2.0) / 2.0);
            }
            auto median = [](std::vector<double> v) {
                std::sort(v.begin(), v.end());
                return v[v.size() / 2];
            };

            // distinct local maxima on bimodal data for at least one fixed seed
            bool trap_seen = false;
            for (std::uint64_t seed = 1; seed <= 5 && !trap_seen; ++seed) {
                const auto data =
                    sample_radians(GcpcParams(0.873, 0.238, 0.155), 199, seed);
                std::vector<double> v(data.begin(), data.end());
                const double om0 = circular_moments(v).mean;
                FitOptions a, b;
                a.explicit_starts = {GcpcParams(om0, 0.5, 1.0)};
                b.explicit_starts = {GcpcParams(om0 + pi / 2, 0.5, 1.0)};
                trap_seen = std::abs(fit_gcpc(data, a).loglik - fit_gcpc(data, b).loglik) >
                            1e-3;
            }
            char buf[200];
            std::snprintf(buf, sizeof buf,
                          "median |omega err| %.3f, rel gamma %.1f%%, rel lambda %.1f%%, "
                          "trap %s",
                          median(err_om), 100 * median(err_g), 100 * median(err_l),
                          trap_seen ? "demonstrated" : "not seen");
            detail = buf;
            return median(err_om) < 0.05 && median(err_g) < 0.15 && median(err_l) < 0.15 &&
                   global_pick && trap_seen;
        },
        {8, "MLE recovery at n = 2000 over 20 seeds; multi-start dominates single start"});

    // 9. one-sample type-I error at desk scale
    run_timed(
        [&](std::string& detail) {
            sim::SimCampaign c;
            c.study = sim::Study::Type1OneSample;
            c.replicates = 500;
            c.sample_sizes = {30, 100};
            c.seed = 20240001;
            c.parallelism = sim_jobs();
            const auto r = sim::run_type1_one_sample(c);
            bool in_band = true;
            std::string rates;
            for (const auto& cell : r.cells) {
                in_band = in_band && cell.rate >= 0.03 && cell.rate <= 0.09;
                char buf[64];
                std::snprintf(buf, sizeof buf, "n=%d rate=%.3f ", cell.n1, cell.rate);
                rates += buf;
            }
            const double budget = c.parallelism >= 8 ? 240.0 : 900.0;
            char buf[64];
            std::snprintf(buf, sizeof buf, "(%d-way, %.0f s budget)", c.parallelism,
                          budget);
            detail = rates + buf;
            return in_band && r.runtime_seconds < budget;
        },
        {9, "one-sample location test: type-I error in [0.03, 0.09] at 500 replicates"});

    // 10. two-sample type-I error, GCPC size-correct, CIPC oversized
    run_timed(
        [&](std::string& detail) {
            sim::SimCampaign c;
            c.study = sim::Study::Type1TwoSample;
            c.replicates = 500;
            c.sample_size_pairs = {{50, 100}};
            c.seed = 20240001;
            c.parallelism = sim_jobs();
            const auto r = sim::run_type1_two_sample(c);
            const auto& cell = r.cells.front();
            char buf[128];
            std::snprintf(buf, sizeof buf, "gcpc rate %.3f, cipc rate %.3f", cell.rate,
                          cell.rate_cipc);
            detail = buf;
            return cell.rate >= 0.03 && cell.rate <= 0.09 && cell.rate_cipc > 0.07;
        },
        {10, "two-sample test at (50, 100): GCPC size-correct, CIPC overrejects"});

    // 11. convergence rate of the regression coefficients
    run_timed(
        [&](std::string& detail) {
            sim::SimCampaign c;
            c.study = sim::Study::ConvergenceRate;
            c.replicates = 20;
            c.scenario = sim::RateScenario::Continuous;
            c.rate_lambda = 5.0;
            c.seed = 20240001;
            c.parallelism = sim_jobs();
            c.sample_sizes.clear();
            for (int n = 100; n <= 2000; n += 100) c.sample_sizes.push_back(n);
            const auto r = sim::run_convergence_rate(c);
            const auto& cells = r.frob_cells;
            double first_half = 0.0, second_half = 0.0;
            for (std::size_t i = 0; i < cells.size(); ++i)
                (i < cells.size() / 2 ? first_half : second_half) +=
                    cells[i].mean_sq_frobenius;
            const bool decreasing =
                r.slope < 0.0 &&
                cells.front().mean_sq_frobenius > cells.back().mean_sq_frobenius &&
                first_half > second_half;
            char buf[128];
            std::snprintf(buf, sizeof buf, "slope b = %.3f +- %.3f, F2 %0.3f -> %0.3f",
                          r.slope, r.slope_se, cells.front().mean_sq_frobenius,
                          cells.back().mean_sq_frobenius);
            detail = buf;
            return std::abs(r.slope) >= 0.85 && std::abs(r.slope) <= 1.15 && decreasing &&
                   r.runtime_seconds < 1200.0;
        },
        {11, "regression coefficients converge at rate ~ 1/n (|b| in [0.85, 1.15])"});

    // 12. real-data tables (gated on the external dataset)
    {
        const Criterion c{12, "real-data fits match the reference tables"};
        const fs::path csv_path = "data/speed_wind2.csv";
        if (!fs::exists(csv_path)) {
            skip(c, "data/speed_wind2.csv not present; see data/README.md for the export recipe");
        } else {
            run_timed(
                [&](std::string& detail) {
                    const fs::path sha_path = "data/speed_wind2.sha256";
                    if (fs::exists(sha_path)) {
                        std::ifstream in(sha_path);
                        std::string expected;
                        in >> expected;
                        const std::string actual = gcpc_cli::sha256_file(csv_path.string());
                        if (actual != expected) {
                            detail = "sha256 mismatch: " + actual;
                            return false;
                        }
                    }
                    const auto table = gcpc_cli::read_csv(csv_path.string());
                    const auto& dir = table.column("direction");
                    std::vector<double> y;
                    for (double d : dir) y.push_back(canonicalize_radians(d));

                    const FitResult cipc = fit_cipc(y);
                    const FitResult gcpc_fit = fit_gcpc(y);

                    Eigen::MatrixXd speed(static_cast<Eigen::Index>(y.size()), 1);
                    const auto& sp = table.column("speed");
                    for (std::size_t i = 0; i < sp.size(); ++i)
                        speed(static_cast<Eigen::Index>(i), 0) = sp[i];
                    const Design design =
                        build_design({{PredictorKind::Continuous, "speed", speed}});
                    const RegressionFit rg = fit_regression(design, y, Family::Gcpc);
                    const RegressionFit rc = fit_regression(design, y, Family::Cipc);
                    const LrtResult cmp = compare_regressions(rg, rc);

                    char buf[300];
                    std::snprintf(buf, sizeof buf,
                                  "cipc ll %.3f; gcpc (%.3f, %.3f, %.3f) ll %.3f; "
                                  "reg ll %.3f p %.4f",
                                  cipc.loglik, gcpc_fit.params.omega.radians(),
                                  gcpc_fit.params.gamma, gcpc_fit.params.lambda,
                                  rg.loglik, cmp.p_value);
                    detail = buf;
                    const bool fits_ok =
                        std::abs(cipc.loglik - (-363.930)) < 0.01 &&
                        std::abs(gcpc_fit.loglik - (-336.682)) < 0.01 &&
                        std::abs(gcpc_fit.params.omega.radians() - 0.873) < 0.005 &&
                        std::abs(gcpc_fit.params.gamma - 0.238) < 0.005 &&
                        std::abs(gcpc_fit.params.lambda - 0.155) < 0.005;
                    const bool reg_ok =
                        std::abs(rg.coef(0, 0) - 0.164) < 0.01 &&
                        std::abs(rg.coef(0, 1) - 0.195) < 0.01 &&
                        std::abs(rg.coef(1, 0) - (-0.010)) < 0.01 &&
                        std::abs(rg.coef(1, 1) - (-0.012)) < 0.01 &&
                        std::abs(rg.loglik - (-335.219)) < 0.05 && cmp.p_value < 0.05;
                    return fits_ok && reg_ok;
                },
                c);
        }
    }

    // 13. regression quadratic-form identity and iid collapse
    run_timed(
        [&](std::string& detail) {
            std::mt19937_64 gen(9009);
            std::uniform_real_distribution<double> ang(-pi, pi);
            std::uniform_real_distribution<double> loglam(std::log(0.25), std::log(4.0));
            double worst = 0.0;
            for (int i = 0; i < 10000; ++i) {
                const double ty = ang(gen), tx = ang(gen);
                const double l = std::exp(loglam(gen));
                const double y1 = std::cos(ty), y2 = std::sin(ty);
                const double x1 = std::cos(tx), x2 = std::sin(tx);
                const double simplified = (y1 * x2 - y2 * x1) * (y1 * x2 - y2 * x1) / l +
                                          (y1 * x1 + y2 * x2) * (y1 * x1 + y2 * x2);
                const double q11 = x2 * x2 / l + x1 * x1;
                const double q22 = x1 * x1 / l + x2 * x2;
                const double q12 = x1 * x2 * (1.0 - 1.0 / l);
                worst = std::max(worst, std::abs(simplified - (y1 * y1 * q11 + y2 * y2 * q22 +
                                                               2.0 * y1 * y2 * q12)));
            }

            const auto y = sample_radians(GcpcParams(0.9, 2.0, 3.0), 300, 606);
            Design d;
            d.column_names = {"(intercept)"};
            d.matrix = Eigen::MatrixXd::Ones(300, 1);
            const double gap =
                std::abs(fit_regression(d, y, Family::Gcpc).loglik - fit_gcpc(y).loglik);
            char buf[128];
            std::snprintf(buf, sizeof buf, "identity diff %.2e, iid collapse gap %.2e",
                          worst, gap);
            detail = buf;
            return worst < 1e-14 && gap < 1e-6;
        },
        {13, "regression quadratic-form identity and intercept-only collapse"});

    std::printf("%s: %d criterion failure(s)\n", g_failures == 0 ? "OK" : "NOT OK",
                g_failures);
    return g_failures == 0 ? 0 : 1;
}
