#pragma once

// Independent oracles used across the test suites. Everything here goes
// through quadrature or brute-force enumeration, never through the closed
// forms or special-function paths it is used to check.

#include <cmath>
#include <functional>
#include <vector>

#include "gcpc/angle.hpp"
#include "gcpc/density.hpp"
#include "gcpc/params.hpp"
#include "gcpc/quadrature.hpp"

namespace oracles {

using gcpc::pi;

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-13) {
    return gcpc::specfun::quad_adaptive(f, a, b, tol, 200000).value;
}

/// R_F by its defining integral, tan-substituted so the integrand is smooth.
inline double rf_defining(double x, double y, double z) {
    auto f = [&](double th) {
        const double t = std::tan(th) * std::tan(th);
        const double sec2 = 1.0 + t;
        return 2.0 * std::tan(th) * sec2 / std::sqrt((t + x) * (t + y) * (t + z));
    };
    return 0.5 * integrate(f, 0.0, pi / 2 - 1e-14, 1e-14);
}

inline double rj_defining(double x, double y, double z, double p) {
    auto f = [&](double th) {
        const double t = std::tan(th) * std::tan(th);
        const double sec2 = 1.0 + t;
        return 2.0 * std::tan(th) * sec2 /
               ((t + p) * std::sqrt((t + x) * (t + y) * (t + z)));
    };
    return 1.5 * integrate(f, 0.0, pi / 2 - 1e-14, 1e-14);
}

/// Legendre-form complete elliptic integral of the third kind, parameter m.
inline double pi3_defining(double n, double m) {
    auto f = [&](double th) {
        const double s = std::sin(th) * std::sin(th);
        return 1.0 / ((1.0 - n * s) * std::sqrt(1.0 - m * s));
    };
    return integrate(f, 0.0, pi / 2, 1e-14);
}

inline double density_mass(const gcpc::GcpcParams& p, double a, double b,
                           double tol = 1e-12) {
    return integrate([&](double t) { return gcpc::pdf_polar(t, p); }, a, b, tol);
}

inline double rho_by_quadrature(const gcpc::GcpcParams& p) {
    const double w = p.omega.radians();
    return integrate(
        [&](double t) { return std::cos(t - w) * gcpc::pdf_polar(t, p); }, w - pi,
        w + pi);
}

inline double entropy_by_quadrature(const gcpc::GcpcParams& p) {
    return integrate(
        [&](double t) {
            const double f = gcpc::pdf_polar(t, p);
            return -f * std::log(f);
        },
        -pi, pi);
}

inline double kl_by_quadrature(const gcpc::GcpcParams& p) {
    const gcpc::WcParams wc = gcpc::WcParams::from_gcpc(p);
    return integrate(
        [&](double t) {
            const double fg = gcpc::pdf_polar(t, p);
            return fg * std::log(fg / gcpc::wc_pdf(t, wc));
        },
        -pi, pi);
}

/// Number of strict local maxima of the density on a wrapped grid.
inline int grid_mode_count(const gcpc::GcpcParams& p, int points) {
    std::vector<double> f(points);
    for (int i = 0; i < points; ++i)
        f[i] = gcpc::pdf_polar(-pi + gcpc::two_pi * i / points, p);
    int modes = 0;
    for (int i = 0; i < points; ++i) {
        const double prev = f[(i + points - 1) % points];
        const double next = f[(i + 1) % points];
        if (f[i] > prev && f[i] > next) ++modes;
    }
    return modes;
}

/// Grid argmax angles (the modes), for location cross-checks.
inline std::vector<double> grid_mode_angles(const gcpc::GcpcParams& p, int points) {
    std::vector<double> f(points);
    for (int i = 0; i < points; ++i)
        f[i] = gcpc::pdf_polar(-pi + gcpc::two_pi * i / points, p);
    std::vector<double> modes;
    for (int i = 0; i < points; ++i) {
        const double prev = f[(i + points - 1) % points];
        const double next = f[(i + 1) % points];
        if (f[i] > prev && f[i] > next) modes.push_back(-pi + gcpc::two_pi * i / points);
    }
    return modes;
}

}  // namespace oracles
