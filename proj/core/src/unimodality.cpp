#include "gcpc/unimodality.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gcpc/density.hpp"
#include "gcpc/diagnostics.hpp"

namespace gcpc {

const char* to_string(UnimodalityCase c) {
    switch (c) {
        case UnimodalityCase::LambdaOne: return "LambdaOne";
        case UnimodalityCase::A: return "A";
        case UnimodalityCase::B: return "B";
        case UnimodalityCase::C: return "C";
        case UnimodalityCase::D: return "D";
        case UnimodalityCase::MDegenerate: return "MDegenerate";
    }
    return "?";
}

namespace {

constexpr double kRootTol = 1e-9;

// Bracket of the stationarity equation at u = cos(phi):
// g(u) = 2(lambda-1) c u sqrt(((lambda-1)u^2 + 1)/lambda) - 2(lambda-1) gamma u^2 - gamma.
bool bracket_vanishes(double u, double gamma, double lambda, double c) {
    const double inner = ((lambda - 1.0) * u * u + 1.0) / lambda;
    if (inner < 0.0) return false;
    const double t1 = 2.0 * (lambda - 1.0) * c * u * std::sqrt(inner);
    const double t2 = 2.0 * (lambda - 1.0) * gamma * u * u;
    const double g = t1 - t2 - gamma;
    const double scale = std::abs(t1) + std::abs(t2) + gamma;
    return std::abs(g) <= kRootTol * std::max(1.0, scale);
}

// Roots of 4(l-1)^2 M t^2 + 4(l-1) M t - l g^2 = 0 clipped to [0, 1].
std::vector<double> quadratic_roots(double gamma, double lambda, double m_coef) {
    std::vector<double> roots;
    const double a2 = 4.0 * (lambda - 1.0) * (lambda - 1.0) * m_coef;
    const double a1 = 4.0 * (lambda - 1.0) * m_coef;
    const double a0 = -lambda * gamma * gamma;
    if (a2 == 0.0) return roots;  // M = 0 or lambda = 1: no quadratic branch
    const double disc = a1 * a1 - 4.0 * a2 * a0;
    if (disc < 0.0) return roots;
    const double sq = std::sqrt(disc);
    double q = -0.5 * (a1 + std::copysign(sq, a1));
    if (q == 0.0) {  // a1 == 0 and a0 == 0
        roots.push_back(0.0);
        return roots;
    }
    for (double t : {q / a2, a0 / q}) {
        if (t > -1e-12 && t < 1.0 + 1e-12) roots.push_back(std::clamp(t, 0.0, 1.0));
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                roots.end());
    return roots;
}

bool inequality_says_unimodal(UnimodalityCase label, double gamma, double lambda) {
    const double g2p1 = gamma * gamma + 1.0;
    switch (label) {
        case UnimodalityCase::LambdaOne:
        case UnimodalityCase::MDegenerate:
        case UnimodalityCase::A: return true;
        case UnimodalityCase::B:
            return g2p1 * (lambda - 1.0) >
                   (lambda - g2p1) * (2.0 * lambda - 1.0) * (2.0 * lambda - 1.0);
        case UnimodalityCase::C:
            return (g2p1 - lambda) * (1.0 - 2.0 * lambda) * (1.0 - 2.0 * lambda) >
                   g2p1 * (1.0 - lambda);
        case UnimodalityCase::D: return false;
    }
    return true;
}

}  // namespace

UnimodalityVerdict classify_unimodality(const GcpcParams& params) {
    const double gamma = params.gamma;
    const double lambda = params.lambda;
    const double m_coef = lambda - gamma * gamma - 1.0;

    UnimodalityVerdict v;
    if (lambda == 1.0) {
        v.case_label = (gamma == 0.0) ? UnimodalityCase::MDegenerate
                                      : UnimodalityCase::LambdaOne;
        v.unimodal = true;
        v.mode_angles = {params.omega};
        return v;
    }
    if (m_coef == 0.0) {
        v.case_label = UnimodalityCase::A;  // closure of case A at lambda = gamma^2 + 1
        v.unimodal = true;
        v.mode_angles = {params.omega};
        return v;
    }
    if (lambda > 1.0) {
        v.case_label = (lambda <= gamma * gamma + 1.0) ? UnimodalityCase::A
                                                       : UnimodalityCase::B;
    } else {
        v.case_label = (lambda > 0.5) ? UnimodalityCase::C : UnimodalityCase::D;
    }

    // Verified stationary points beyond phi in {0, pi}.
    const double c = params.c();
    std::vector<double> extra_angles;
    for (double t : quadratic_roots(gamma, lambda, m_coef)) {
        bool verified = false;
        const double root = std::sqrt(t);
        for (double u : {root, -root}) {
            if (bracket_vanishes(u, gamma, lambda, c)) {
                verified = true;
                const double phi = std::acos(std::clamp(u, -1.0, 1.0));
                if (phi > 1e-9 && phi < pi - 1e-9) extra_angles.push_back(phi);
            }
            if (root == 0.0) break;
        }
        if (verified) v.critical_roots.push_back(t);
    }
    std::sort(extra_angles.begin(), extra_angles.end());
    extra_angles.erase(
        std::unique(extra_angles.begin(), extra_angles.end(),
                    [](double a, double b) { return std::abs(a - b) < 1e-9; }),
        extra_angles.end());

    // Stationary set in centered coordinates, circular order.
    std::vector<double> stationary;
    stationary.push_back(0.0);
    for (double phi : extra_angles) {
        stationary.push_back(phi);
        stationary.push_back(-phi);
    }
    stationary.push_back(pi);
    std::sort(stationary.begin(), stationary.end());

    const GcpcParams centered(0.0, gamma, lambda);
    const std::size_t k = stationary.size();
    std::vector<double> dens(k);
    for (std::size_t i = 0; i < k; ++i) dens[i] = pdf_polar(stationary[i], centered);

    std::vector<double> modes;
    for (std::size_t i = 0; i < k; ++i) {
        const double prev = dens[(i + k - 1) % k];
        const double next = dens[(i + 1) % k];
        if (dens[i] > prev && dens[i] > next) modes.push_back(stationary[i]);
    }
    if (modes.empty()) modes.push_back(0.0);  // k == 2 with equal heights cannot occur

    v.unimodal = modes.size() <= 1;
    for (double phi : modes) v.mode_angles.push_back(params.omega + Angle(phi));
    std::sort(v.mode_angles.begin(), v.mode_angles.end(),
              [](Angle a, Angle b) { return a.radians() < b.radians(); });

    const bool ineq = inequality_says_unimodal(v.case_label, gamma, lambda);
    if (ineq != v.unimodal) {
        std::ostringstream os;
        os << "classify_unimodality: case-" << to_string(v.case_label)
           << " inequality says " << (ineq ? "unimodal" : "bimodal")
           << " but stationary-point analysis says "
           << (v.unimodal ? "unimodal" : "bimodal") << " at gamma=" << gamma
           << " lambda=" << lambda << "; keeping the stationary-point verdict";
        log_diagnostic(os.str());
    }
    return v;
}

}  // namespace gcpc
