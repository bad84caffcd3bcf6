#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "gcpc/angle.hpp"
#include "gcpc/params.hpp"

namespace gcpc {

/// Seeded generator handed around explicitly; never shared across threads.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform draw on the open interval (0, 1), reproducible across platforms.
    double uniform_open() {
        const std::uint64_t bits = engine_() >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// Deterministic stream splitting: one master seed, many independent substreams.
std::uint64_t sub_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

/// One GCPC draw: inverse-CDF wrapped Cauchy draw mapped through the angle
/// transform and shifted to the location.
Angle sample_one(const GcpcParams& params, Rng& rng);

std::vector<Angle> sample(const GcpcParams& params, std::size_t n, Rng& rng);
std::vector<Angle> sample(const GcpcParams& params, std::size_t n, std::uint64_t seed);

/// Convenience: raw radians instead of Angle, for numeric pipelines.
std::vector<double> sample_radians(const GcpcParams& params, std::size_t n,
                                   std::uint64_t seed);

}  // namespace gcpc
