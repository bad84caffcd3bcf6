#include "gcpc/params.hpp"

namespace gcpc {

double delta_to_gamma(double delta) {
    if (!(delta >= 0.0 && delta < 1.0))
        throw std::invalid_argument("delta must lie in [0, 1)");
    return 2.0 * delta / (1.0 - delta * delta);
}

double gamma_to_delta(double gamma) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("gamma must be finite and >= 0");
    if (gamma == 0.0) return 0.0;
    // (sqrt(g^2+1) - 1)/g, written to avoid cancellation for small g
    return gamma / (std::hypot(gamma, 1.0) + 1.0);
}

GcpcParams::GcpcParams(Angle omega_, double gamma_, double lambda_)
    : omega(omega_), gamma(gamma_), lambda(lambda_) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("gamma must be finite and >= 0");
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("lambda must be finite and > 0");
}

WcParams::WcParams(Angle omega_, double delta_) : omega(omega_), delta(delta_) {
    if (!(delta >= 0.0 && delta < 1.0))
        throw std::invalid_argument("delta must lie in [0, 1)");
}

WcParams WcParams::from_gcpc(const GcpcParams& p) {
    return {p.omega, gamma_to_delta(p.gamma)};
}

GcpcEuclideanForm GcpcEuclideanForm::from_params(const GcpcParams& p) {
    GcpcEuclideanForm f;
    const double cw = std::cos(p.omega.radians());
    const double sw = std::sin(p.omega.radians());
    f.mu = {p.gamma * cw, p.gamma * sw};
    f.xi2 = {cw, sw};
    f.xi1 = {-sw, cw};
    f.lambda = p.lambda;
    f.gamma_sq = p.gamma * p.gamma;
    const double il = 1.0 / p.lambda;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            f.sigma_inv[i][j] = f.xi1[i] * f.xi1[j] * il + f.xi2[i] * f.xi2[j];
    return f;
}

double GcpcEuclideanForm::cap_a(const Vec2& y) const {
    // Sigma mu = mu, so Sigma^{-1} mu = mu and A reduces to y . mu
    return y[0] * mu[0] + y[1] * mu[1];
}

double GcpcEuclideanForm::cap_b(const Vec2& y) const {
    return y[0] * (sigma_inv[0][0] * y[0] + sigma_inv[0][1] * y[1]) +
           y[1] * (sigma_inv[1][0] * y[0] + sigma_inv[1][1] * y[1]);
}

}  // namespace gcpc
