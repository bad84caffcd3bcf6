#pragma once

#include "gcpc/params.hpp"
#include "gcpc/unimodality.hpp"

namespace gcpc {

struct CircularSummary {
    double rho = 0.0;            // mean resultant length, in [0, 1]
    double circ_variance = 1.0;  // 1 - rho
    double circ_sd = 0.0;        // sqrt(-2 log rho); +inf at rho = 0
    double entropy = 0.0;
};

/// rho = E[cos(theta - omega)].
///
/// Computed via Carlson forms as
///   rho = (1-d^2)/(pi d sqrt(l)) * [Pi(n0 | m0) - K(m0)]
///       = 4 d (1-d^2) / (3 pi sqrt(l) (1+d^2)^2) * R_J(0, 1/l, 1, ((1-d^2)/(1+d^2))^2)
/// with d = delta(gamma), n0 = (2d/(1+d^2))^2 and parameter m0 = 1 - 1/l.
/// The argument pair (n0, m0) was pinned against the quadrature of
/// cos(theta) * pdf and is regression-tested; lambda = 1 returns delta directly.
double mean_resultant_length(const GcpcParams& params);

/// Closed form: log{ 8 pi sqrt(l) (1-d^2) / [sqrt(l)(1-d^2) + 1 + d^2]^2 }.
double entropy(const GcpcParams& params);

/// KL(GCPC(w,g,l) || CIPC(w,g)). The final expectation term has no closed form
/// and is integrated against the wrapped Cauchy density.
double kl_gcpc_from_cipc(const GcpcParams& params);

CircularSummary circular_summary(const GcpcParams& params);

}  // namespace gcpc
