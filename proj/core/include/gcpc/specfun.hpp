#pragma once

#include <cmath>
#include <stdexcept>

namespace gcpc::specfun {

/// Carlson's symmetric elliptic integral of the first kind,
/// R_F(x,y,z) = 1/2 * int_0^inf dt / sqrt((t+x)(t+y)(t+z)).
/// Requires x,y,z >= 0 with at most one of them zero.
double carlson_rf(double x, double y, double z);

/// Carlson's degenerate integral R_C(x,y) = R_F(x,y,y), y > 0.
double carlson_rc(double x, double y);

/// Carlson's symmetric elliptic integral of the third kind,
/// R_J(x,y,z,p) = 3/2 * int_0^inf dt / ((t+p) sqrt((t+x)(t+y)(t+z))).
/// Requires x,y,z >= 0 with at most one zero, and p > 0 (the principal-value
/// branch p < 0 is intentionally not supported and is rejected).
double carlson_rj(double x, double y, double z, double p);

/// Arguments of the complete elliptic integral of the third kind
/// Pi(n,k) = int_0^{pi/2} dt / ((1 - n sin^2 t) sqrt(1 - k^2 sin^2 t)),
/// with characteristic n < 1 and modulus |k| < 1 (parameter m = k^2).
struct EllipticPiArgs {
    double n;
    double k;

    EllipticPiArgs(double n_, double k_) : n(n_), k(k_) {
        if (!(n < 1.0) || !std::isfinite(n))
            throw std::domain_error("elliptic Pi: characteristic n must be < 1");
        if (!(k * k < 1.0))
            throw std::domain_error("elliptic Pi: modulus must satisfy k^2 < 1");
    }
    double m() const { return k * k; }
};

/// Pi(n,k) via Carlson forms: R_F(0,1-m,1) + (n/3) R_J(0,1-m,1,1-n).
double ellint_pi_complete(const EllipticPiArgs& args);

/// Parameter form of the above; m < 1 may be negative (imaginary modulus).
double ellint_pi_param(double n, double m);

/// Complete elliptic integral of the first kind K(k) = Pi(0, k).
double comp_ellint_1(double k);

/// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

/// Upper tail of the chi-square distribution with df degrees of freedom.
double chi2_sf(double x, double df);

/// Lower quantile: the x with P(X <= x) = p for X ~ chi-square(df).
double chi2_quantile(double p, double df);

/// Wrapped Cauchy CDF with base point -pi: F(-pi) = 0, F(0) = 1/2, F(pi) = 1.
/// Evaluated as 1/2 + atan2((1+delta) sin(psi/2), (1-delta) cos(psi/2))/pi,
/// which is finite at the +-pi seam where tan(psi/2) blows up.
double wc_cdf(double psi, double delta);

/// Inverse of wc_cdf on (0,1); returns an angle in (-pi, pi).
double wc_quantile(double u, double delta);

}  // namespace gcpc::specfun
