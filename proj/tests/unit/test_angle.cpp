#include <cmath>
#include <vector>

#include "doctest.h"
#include "gcpc/angle.hpp"

using namespace gcpc;

TEST_CASE("canonicalization lands in [-pi, pi]") {
    for (double x : {0.0, 1.0, -1.0, 3.2, -3.2, 10.0, -100.0, 6.283185307179586}) {
        const double c = canonicalize_radians(x);
        CHECK(c >= -pi);
        CHECK(c <= pi);
    }
}

TEST_CASE("canonicalize(x + 2 pi k) == canonicalize(x)") {
    for (double x : {0.3, -2.9, 1.7}) {
        for (int k : {-3, -1, 1, 4}) {
            CHECK(canonicalize_radians(x + two_pi * k) ==
                  doctest::Approx(canonicalize_radians(x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("non-finite angles are rejected") {
    CHECK_THROWS_AS(Angle(std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(canonicalize_radians(INFINITY), std::invalid_argument);
}

TEST_CASE("angle arithmetic stays canonical") {
    const Angle a(3.0), b(2.0);
    CHECK((a + b).radians() == doctest::Approx(5.0 - two_pi));
    CHECK((a - b).radians() == doctest::Approx(1.0));
    CHECK(Angle::from_degrees(180.0).radians() == doctest::Approx(pi));
    CHECK(Angle::from_degrees(-90.0).degrees() == doctest::Approx(-90.0));
}

TEST_CASE("circular moments") {
    std::vector<double> sample = {0.5, 0.5, 0.5};
    auto m = circular_moments(sample);
    CHECK(m.mean == doctest::Approx(0.5));
    CHECK(m.resultant == doctest::Approx(1.0));

    std::vector<double> spread = {0.0, pi / 2, pi, -pi / 2};
    CHECK(circular_moments(spread).resultant == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS_AS(circular_moments(std::vector<double>{}), std::invalid_argument);
}
