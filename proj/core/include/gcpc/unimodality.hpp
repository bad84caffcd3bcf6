#pragma once

#include <vector>

#include "gcpc/angle.hpp"
#include "gcpc/params.hpp"

namespace gcpc {

enum class UnimodalityCase { LambdaOne, A, B, C, D, MDegenerate };

struct UnimodalityVerdict {
    bool unimodal = true;
    UnimodalityCase case_label = UnimodalityCase::LambdaOne;
    /// Verified roots t* = cos^2(phi*) of the stationarity quadratic, in [0, 1].
    std::vector<double> critical_roots;
    std::vector<Angle> mode_angles;
};

const char* to_string(UnimodalityCase c);

/// Decides unimodality from the stationary points of the density.
///
/// Stationary angles are phi in {0, pi} plus the solutions of the bracket
/// equation 2(lambda-1) c u sqrt(((lambda-1)u^2+1)/lambda) = gamma (2(lambda-1)u^2+1)
/// with u = cos(phi). Candidate u come from the squared quadratic
/// 4(lambda-1)^2 M t^2 + 4(lambda-1) M t - lambda gamma^2 = 0, t = u^2,
/// M = lambda - gamma^2 - 1; squaring loses the sign of u, so each u = +-sqrt(t)
/// is accepted only when the unsquared bracket vanishes there.
///
/// Mode angles are the stationary points that are local maxima. The verdict is
/// cross-checked against the closed-form case inequalities; disagreements are
/// logged (see diagnostics.hpp) and the stationary-point verdict wins.
UnimodalityVerdict classify_unimodality(const GcpcParams& params);

}  // namespace gcpc
