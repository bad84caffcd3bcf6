#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gcpc/params.hpp"
#include "gcpc/sampling.hpp"

namespace gcpc::sim {

enum class Study { Type1OneSample, Type1TwoSample, ConvergenceRate };
enum class RateScenario { Circular, Continuous, Both };

const char* to_string(Study s);
const char* to_string(RateScenario s);

struct SimCampaign {
    Study study = Study::Type1OneSample;
    int replicates = 500;
    double alpha = 0.05;
    std::uint64_t seed = 20240001;
    int parallelism = 1;
    int fit_starts = 12;

    // Type1OneSample
    std::vector<int> sample_sizes = {30, 100};
    GcpcParams true_params{2.0, 3.0, 2.0};
    double omega0 = 2.0;

    // Type1TwoSample: the smaller sample of each pair draws from
    // smaller_params, the larger from larger_params.
    std::vector<std::pair<int, int>> sample_size_pairs = {{50, 100}};
    GcpcParams smaller_params{2.0, 4.0, 1.0};
    GcpcParams larger_params{2.0, 2.0, 3.0};

    // ConvergenceRate
    RateScenario scenario = RateScenario::Continuous;
    double rate_lambda = 5.0;
    Eigen::MatrixXd true_coef;  // empty selects the bundled defaults
    double vm_location = 2.0;
    double vm_concentration = 5.0;
    double exp_mean = 0.5;
};

struct RateCell {
    int n1 = 0;
    int n2 = 0;  // 0 for one-sample cells
    double rate = 0.0;
    double mc_se = 0.0;
    double rate_cipc = 0.0;  // two-sample study only
    double mc_se_cipc = 0.0;
    int failures = 0;
};

struct FrobCell {
    int n = 0;
    double mean_sq_frobenius = 0.0;
    double mc_se = 0.0;
    int failures = 0;
};

struct SimReport {
    SimCampaign config;
    std::vector<RateCell> cells;
    std::vector<FrobCell> frob_cells;
    double slope = 0.0;  // b in log F2-bar ~ a + b log n
    double slope_se = 0.0;
    double intercept = 0.0;
    std::vector<std::string> warnings;
    double runtime_seconds = 0.0;
};

/// Reference coefficient matrices for the three rate scenarios.
Eigen::MatrixXd default_rate_coefficients(RateScenario scenario);

SimReport run_type1_one_sample(const SimCampaign& campaign);
SimReport run_type1_two_sample(const SimCampaign& campaign);
SimReport run_convergence_rate(const SimCampaign& campaign);
SimReport run_campaign(const SimCampaign& campaign);

/// Covariate generators for the rate study (rejection sampling for the von
/// Mises draw); the circular responses themselves never go through these.
double sample_von_mises(double location, double concentration, Rng& rng);
double sample_exponential(double mean, Rng& rng);

}  // namespace gcpc::sim
