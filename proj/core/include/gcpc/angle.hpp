#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>

namespace gcpc {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Maps any finite x (radians) to its representative in [-pi, pi].
inline double canonicalize_radians(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("angle must be finite");
    return std::remainder(x, two_pi);
}

/// An angle in radians, kept canonical in [-pi, pi].
class Angle {
public:
    Angle() = default;
    explicit Angle(double radians) : rad_(canonicalize_radians(radians)) {}

    static Angle from_degrees(double deg) { return Angle(deg * pi / 180.0); }

    double radians() const { return rad_; }
    double degrees() const { return rad_ * 180.0 / pi; }

    friend Angle operator+(Angle a, Angle b) { return Angle(a.rad_ + b.rad_); }
    friend Angle operator-(Angle a, Angle b) { return Angle(a.rad_ - b.rad_); }
    friend bool operator==(Angle a, Angle b) { return a.rad_ == b.rad_; }

private:
    double rad_ = 0.0;
};

struct CircularMoments {
    double mean;       // atan2 of the resultant vector, in [-pi, pi]
    double resultant;  // mean resultant length R-bar in [0, 1]
};

/// First circular moment of a sample of angles (radians).
inline CircularMoments circular_moments(std::span<const double> angles) {
    if (angles.empty()) throw std::invalid_argument("empty sample");
    double c = 0.0, s = 0.0;
    for (double a : angles) {
        c += std::cos(a);
        s += std::sin(a);
    }
    c /= static_cast<double>(angles.size());
    s /= static_cast<double>(angles.size());
    return {std::atan2(s, c), std::hypot(c, s)};
}

}  // namespace gcpc
