#pragma once

#include "gcpc/angle.hpp"
#include "gcpc/params.hpp"

namespace gcpc {

/// GCPC density in polar form,
/// f(theta) = 1 / (2 pi sqrt(lambda) (b c - a sqrt(b))) with phi = theta - omega,
/// a = gamma cos(phi), b = cos^2(phi) + sin^2(phi)/lambda, c = sqrt(gamma^2+1).
double pdf_polar(Angle theta, const GcpcParams& params);
double pdf_polar(double theta, const GcpcParams& params);

/// log f(theta); the workhorse for likelihoods.
double log_pdf_polar(double theta, const GcpcParams& params);

/// GCPC density evaluated on the unit circle via the planar form
/// f(y) = 1 / (2 pi sqrt(lambda) (B sqrt(Gamma^2+1) - A sqrt(B))).
/// Rejects y with | ||y|| - 1 | > 1e-12.
double pdf_euclidean(const Vec2& y, const GcpcEuclideanForm& form);

/// Wrapped Cauchy density with location omega and concentration delta.
double wc_pdf(double theta, const WcParams& params);

/// log(B c - gamma q2 sqrt(B)) with B = q2^2 + q1^2/lambda, c = sqrt(gamma^2+1).
/// The per-observation term of every GCPC log-likelihood: the iid case has
/// (q1, q2) = (sin phi, cos phi), the regression case the rotated response
/// coordinates. Evaluated in a form stable for large gamma.
double log_projected_term(double gamma, double q1, double q2, double lambda);

/// psi = atan2(sin phi, sqrt(lambda) cos phi): pushes a centered GCPC angle to
/// its wrapped Cauchy image. Measure-preserving together with from_wc_angle.
Angle to_wc_angle(Angle phi, double lambda);

/// phi = atan2(sqrt(lambda) sin psi, cos psi): exact inverse of to_wc_angle.
Angle from_wc_angle(Angle psi, double lambda);

/// P(a <= theta <= b) for a <= b on the canonical branch [-pi, pi].
/// Uses the wrapped Cauchy CDF of the transformed interval, splitting at the
/// point diametrically opposite omega where the transform wraps.
double interval_probability(Angle a, Angle b, const GcpcParams& params);

}  // namespace gcpc
