#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gcpc/angle.hpp"
#include "gcpc/params.hpp"

namespace gcpc {

enum class Family { Gcpc, Cipc };

/// Sum of log densities. Rejects empty data.
double loglik_gcpc(std::span<const double> data, const GcpcParams& params);
double loglik_cipc(std::span<const double> data, const GcpcParams& params);

struct FitOptions {
    int n_starts = 12;          // starts taken from the deterministic start grid
    double tol = 1e-10;         // objective tolerance handed to the optimizer
    int max_iterations = 400;
    /// When non-empty, these replace the grid entirely.
    std::vector<GcpcParams> explicit_starts;
};

struct StartRecord {
    GcpcParams start;
    double loglik;
    bool converged;
};

struct FitResult {
    GcpcParams params;
    double loglik = 0.0;
    std::vector<double> std_errors;  // (omega, gamma, lambda) or (omega, gamma)
    bool se_available = false;
    int n_starts = 0;
    std::vector<StartRecord> starts_tried;
    bool converged = false;
    bool near_uniform = false;  // gamma-hat below 1e-6
    Family family = Family::Gcpc;

    WcParams wc_params() const { return WcParams::from_gcpc(params); }
};

/// Multi-start MLE. The start grid crosses the circular-mean location and its
/// pi/2 shifts (the profile log-likelihood in omega is pi/2-periodic when the
/// density is bimodal) with anisotropy starts {0.2, 1, 5}. Optimization runs
/// unconstrained in (omega, log gamma, log lambda).
FitResult fit_gcpc(std::span<const double> data, const FitOptions& options = {});

/// MLE under the lambda = 1 restriction (wrapped Cauchy reparameterized).
FitResult fit_cipc(std::span<const double> data, const FitOptions& options = {});

/// Observed-information standard errors at the optimum (central differences on
/// the log-likelihood in natural parameters). Requires the gradient to vanish;
/// a non-positive-definite Hessian is reported by returning nullopt.
std::optional<std::vector<double>> std_errors(const FitResult& fit,
                                              std::span<const double> data);

struct LrtResult {
    double statistic = 0.0;
    int df = 1;
    double p_value = 1.0;
    std::vector<FitResult> fit_h0;
    std::vector<FitResult> fit_h1;
};

/// H0: omega = omega0 (gamma, lambda free) against the unrestricted fit.
LrtResult lrt_one_location(std::span<const double> data, Angle omega0,
                           const FitOptions& options = {});

/// H0: common location for two samples, concentration and anisotropy free per
/// sample. family = Cipc pins both lambdas to 1.
LrtResult lrt_two_locations(std::span<const double> data1,
                            std::span<const double> data2, Family family,
                            const FitOptions& options = {});

struct LocationCI {
    double level = 0.95;
    Angle lower;
    Angle upper;
    Angle omega_hat;
    double lower_offset = 0.0;  // signed offsets from omega_hat, in (-pi, 0]
    double upper_offset = 0.0;  // and [0, pi)
};

struct LocationCiOptions {
    FitOptions fit;
    /// Re-maximize (gamma, lambda) at every scanned omega instead of plugging
    /// in the MLE values.
    bool profile = false;
};

/// Likelihood-ratio confidence region for omega with (gamma, lambda) plugged
/// in at the MLE: the connected arc around omega-hat where
/// l(omega, gamma-hat, lambda-hat) > l(hat) - chi2_1(level)/2.
LocationCI location_ci(std::span<const double> data, double level,
                       const LocationCiOptions& options = {});

/// Statistic, df and chi-square p-value for nested model log-likelihoods.
LrtResult lrt_nested(double loglik_full, double loglik_restricted, int df);

}  // namespace gcpc
