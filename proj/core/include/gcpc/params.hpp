#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "gcpc/angle.hpp"

namespace gcpc {

/// gamma = 2*delta / (1 - delta^2); inverse of gamma_to_delta.
double delta_to_gamma(double delta);

/// delta = (sqrt(gamma^2 + 1) - 1) / gamma, with the gamma = 0 limit handled.
double gamma_to_delta(double gamma);

/// Parameters of the generalized circular projected Cauchy distribution:
/// location omega, concentration gamma >= 0 and anisotropy lambda > 0.
struct GcpcParams {
    Angle omega;
    double gamma = 0.0;
    double lambda = 1.0;

    GcpcParams() = default;
    GcpcParams(Angle omega_, double gamma_, double lambda_);
    GcpcParams(double omega_rad, double gamma_, double lambda_)
        : GcpcParams(Angle(omega_rad), gamma_, lambda_) {}

    /// sqrt(gamma^2 + 1)
    double c() const { return std::hypot(gamma, 1.0); }
};

/// Wrapped Cauchy parameters: location omega and concentration delta in [0, 1).
/// The lambda = 1 member of the GCPC family in its classic parameterization.
struct WcParams {
    Angle omega;
    double delta = 0.0;

    WcParams() = default;
    WcParams(Angle omega_, double delta_);
    WcParams(double omega_rad, double delta_) : WcParams(Angle(omega_rad), delta_) {}

    static WcParams from_gcpc(const GcpcParams& p);
    GcpcParams to_gcpc() const { return {omega, delta_to_gamma(delta), 1.0}; }
};

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

/// The planar representation of the GCPC: location vector mu = gamma*(cos w, sin w),
/// eigenvectors xi1 (eigenvalue lambda) and xi2 = mu/|mu| (eigenvalue 1) of the
/// scatter matrix Sigma, and the precision Sigma^{-1} = xi1 xi1^T/lambda + xi2 xi2^T.
struct GcpcEuclideanForm {
    Vec2 mu;
    Vec2 xi1;
    Vec2 xi2;
    Mat2 sigma_inv;
    double gamma_sq = 0.0;  // Gamma^2 = mu^T Sigma^{-1} mu, equals gamma^2 here
    double lambda = 1.0;

    static GcpcEuclideanForm from_params(const GcpcParams& p);

    /// A = y^T Sigma^{-1} mu for a point y on the unit circle.
    double cap_a(const Vec2& y) const;
    /// B = y^T Sigma^{-1} y.
    double cap_b(const Vec2& y) const;
};

}  // namespace gcpc
