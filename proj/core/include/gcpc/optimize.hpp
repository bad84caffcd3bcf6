#pragma once

#include <Eigen/Dense>
#include <functional>

namespace gcpc::optim {

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct Result {
    Eigen::VectorXd x;
    double fx = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct Options {
    double tol = 1e-10;       // absolute tolerance on the objective decrease
    int max_iterations = 400;
    double initial_step = 0.25;  // simplex edge length per coordinate
};

/// Derivative-free Nelder-Mead simplex minimization.
Result nelder_mead(const Objective& f, const Eigen::VectorXd& x0,
                   const Options& opts = {});

/// BFGS with central-difference gradients and Armijo backtracking.
Result bfgs(const Objective& f, const Eigen::VectorXd& x0, const Options& opts = {});

/// Nelder-Mead followed by BFGS refinement from the simplex optimum.
Result minimize(const Objective& f, const Eigen::VectorXd& x0,
                const Options& opts = {});

/// Brent minimization on [a, b]; tol is on the argument.
Result brent(const std::function<double(double)>& f, double a, double b,
             double tol = 1e-8, int max_iterations = 200);

/// Central-difference gradient, matching the steps used inside bfgs.
Eigen::VectorXd numeric_gradient(const Objective& f, const Eigen::VectorXd& x);

/// Central-difference Hessian (symmetric).
Eigen::MatrixXd numeric_hessian(const Objective& f, const Eigen::VectorXd& x);

}  // namespace gcpc::optim
