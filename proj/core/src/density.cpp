#include "gcpc/density.hpp"

#include <algorithm>
#include <cmath>

#include "gcpc/specfun.hpp"

namespace gcpc {

namespace {

// D = c sqrt(b) - gamma q2 > 0. For gamma q2 > 0 the direct form cancels badly
// at large gamma, so use the conjugate expression there:
// c^2 b - gamma^2 q2^2 = q2^2 + (gamma^2+1) q1^2 / lambda.
double stable_d(double q2, double q1, double gamma, double lambda, double c,
                double sqrt_b) {
    const double gq = gamma * q2;
    if (gq <= 0.0) return c * sqrt_b - gq;
    const double numer = q2 * q2 + (gamma * gamma + 1.0) * q1 * q1 / lambda;
    return numer / (c * sqrt_b + gq);
}

}  // namespace

double log_projected_term(double gamma, double q1, double q2, double lambda) {
    const double b = q2 * q2 + q1 * q1 / lambda;
    const double sqrt_b = std::sqrt(b);
    const double c = std::hypot(gamma, 1.0);
    return 0.5 * std::log(b) + std::log(stable_d(q2, q1, gamma, lambda, c, sqrt_b));
}

double pdf_polar(double theta, const GcpcParams& params) {
    if (!std::isfinite(theta)) throw std::invalid_argument("pdf_polar: non-finite angle");
    const double phi = theta - params.omega.radians();
    const double cphi = std::cos(phi);
    const double sphi = std::sin(phi);
    const double b = cphi * cphi + sphi * sphi / params.lambda;
    const double sqrt_b = std::sqrt(b);
    const double d = stable_d(cphi, sphi, params.gamma, params.lambda, params.c(), sqrt_b);
    return 1.0 / (two_pi * std::sqrt(params.lambda) * sqrt_b * d);
}

double pdf_polar(Angle theta, const GcpcParams& params) {
    return pdf_polar(theta.radians(), params);
}

double log_pdf_polar(double theta, const GcpcParams& params) {
    const double phi = theta - params.omega.radians();
    const double cphi = std::cos(phi);
    const double sphi = std::sin(phi);
    const double b = cphi * cphi + sphi * sphi / params.lambda;
    const double sqrt_b = std::sqrt(b);
    const double d = stable_d(cphi, sphi, params.gamma, params.lambda, params.c(), sqrt_b);
    return -std::log(two_pi) - 0.5 * std::log(params.lambda) - 0.5 * std::log(b) -
           std::log(d);
}

double pdf_euclidean(const Vec2& y, const GcpcEuclideanForm& form) {
    const double norm = std::hypot(y[0], y[1]);
    if (std::abs(norm - 1.0) > 1e-12)
        throw std::invalid_argument("pdf_euclidean: y must lie on the unit circle");
    const double a = form.cap_a(y);
    const double b = form.cap_b(y);
    const double c = std::sqrt(form.gamma_sq + 1.0);
    return 1.0 / (two_pi * std::sqrt(form.lambda) * (b * c - a * std::sqrt(b)));
}

double wc_pdf(double theta, const WcParams& params) {
    if (!std::isfinite(theta)) throw std::invalid_argument("wc_pdf: non-finite angle");
    const double d = params.delta;
    const double num = 1.0 - d * d;
    const double den = 1.0 + d * d - 2.0 * d * std::cos(theta - params.omega.radians());
    return num / (two_pi * den);
}

Angle to_wc_angle(Angle phi, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("to_wc_angle: lambda must be > 0");
    const double p = phi.radians();
    return Angle(std::atan2(std::sin(p), std::sqrt(lambda) * std::cos(p)));
}

Angle from_wc_angle(Angle psi, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("from_wc_angle: lambda must be > 0");
    const double p = psi.radians();
    return Angle(std::atan2(std::sqrt(lambda) * std::sin(p), std::cos(p)));
}

namespace {

// F_WC(psi(t)) where psi(t) = atan2(sin(t - omega), sqrt(lambda) cos(t - omega)).
double transformed_cdf(double t, const GcpcParams& params, double delta) {
    const double phi = t - params.omega.radians();
    const double psi =
        std::atan2(std::sin(phi), std::sqrt(params.lambda) * std::cos(phi));
    return specfun::wc_cdf(psi, delta);
}

}  // namespace

double interval_probability(Angle a, Angle b, const GcpcParams& params) {
    const double lo = a.radians();
    const double hi = b.radians();
    if (lo > hi)
        throw std::invalid_argument(
            "interval_probability: requires a <= b on the canonical branch");
    if (hi - lo >= two_pi) return 1.0;

    const double delta = gamma_to_delta(params.gamma);
    // The map t -> F_WC(psi(t)) increases except at the seam opposite omega,
    // where psi jumps from +pi to -pi and the CDF drops by 1.
    const double seam = canonicalize_radians(params.omega.radians() + pi);
    double p;
    if (seam > lo && seam < hi) {
        p = (1.0 - transformed_cdf(lo, params, delta)) + transformed_cdf(hi, params, delta);
    } else {
        const double f_lo = (lo == seam) ? 0.0 : transformed_cdf(lo, params, delta);
        const double f_hi = (hi == seam) ? 1.0 : transformed_cdf(hi, params, delta);
        p = f_hi - f_lo;
    }
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace gcpc
