#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "gcpc/angle.hpp"
#include "gcpc/inference.hpp"

namespace gcpc {

enum class PredictorKind { Continuous, Circular, SimplexAlr };

/// One raw predictor: a single column for continuous and circular predictors,
/// D columns of strictly positive compositions for a simplex predictor.
struct Predictor {
    PredictorKind kind;
    std::string name;
    Eigen::MatrixXd values;
};

struct Design {
    std::vector<std::string> column_names;  // "(intercept)" first
    Eigen::MatrixXd matrix;                 // n x p

    std::size_t rows() const { return static_cast<std::size_t>(matrix.rows()); }
    std::size_t cols() const { return static_cast<std::size_t>(matrix.cols()); }
};

/// Expands typed predictors into the model matrix: intercept first, then per
/// predictor either the raw column, (cos x, sin x), or the D-1 additive
/// log-ratio columns log(x_j / x_D). Compositions are renormalized when their
/// row sums are within 1e-9 of one and rejected otherwise; zero or negative
/// parts are rejected (the alpha-transformation that handles zeros is out of
/// scope here).
Design build_design(const std::vector<Predictor>& predictors);

/// Joint log-likelihood of angles y given coefficients B (p x 2) and lambda.
/// Row i contributes through mu_i = B^T x_i, gamma_i = |mu_i|, xi_i = mu_i/gamma_i.
double loglik_gcpc_regression(const Design& design, std::span<const double> y,
                              const Eigen::MatrixXd& coef, double lambda);

struct RegressionFit {
    std::vector<std::string> column_names;
    Eigen::MatrixXd coef;  // p x 2 (cos-component, sin-component)
    double lambda = 1.0;
    double loglik = 0.0;
    Eigen::MatrixXd coef_se;  // p x 2, observed information
    double lambda_se = 0.0;
    bool se_available = false;
    double rho_hat = 0.0;  // resultant length of the residual angles
    double rho_hat_se = 0.0;
    bool converged = false;
    Family family = Family::Gcpc;
    double loglik_stage1 = 0.0;  // after least-squares initialization
    double loglik_stage2 = 0.0;  // after the Brent step over log lambda
};

struct RegressionOptions {
    double tol = 1e-10;
    int max_iterations = 400;
};

/// Three stages: least-squares initialization of B on the Euclidean response,
/// a Brent line search over log lambda with B fixed, then joint quasi-Newton
/// refinement. family = Cipc pins lambda = 1 and skips the line search.
RegressionFit fit_regression(const Design& design, std::span<const double> y,
                             Family family, const RegressionOptions& options = {});

/// Fitted directions atan2(mu_2i, mu_1i) for new rows.
std::vector<Angle> predict(const RegressionFit& fit, const Design& newdesign);

/// LRT of the GCPC regression against its lambda = 1 restriction (df = 1).
LrtResult compare_regressions(const RegressionFit& fit_gcpc,
                              const RegressionFit& fit_cipc);

}  // namespace gcpc
