#include "gcpc/sampling.hpp"

#include <stdexcept>

#include "gcpc/density.hpp"
#include "gcpc/specfun.hpp"

namespace gcpc {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t sub_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
    std::uint64_t h = splitmix64(master ^ (0xA24BAED4963EE407ULL * (stream + 1)));
    return splitmix64(h ^ (0x9FB21C651E98DF25ULL * (index + 1)));
}

Angle sample_one(const GcpcParams& params, Rng& rng) {
    const double delta = gamma_to_delta(params.gamma);
    const double psi = specfun::wc_quantile(rng.uniform_open(), delta);
    const Angle phi = from_wc_angle(Angle(psi), params.lambda);
    return phi + params.omega;
}

std::vector<Angle> sample(const GcpcParams& params, std::size_t n, Rng& rng) {
    if (n == 0) throw std::invalid_argument("sample: n must be >= 1");
    std::vector<Angle> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(sample_one(params, rng));
    return out;
}

std::vector<Angle> sample(const GcpcParams& params, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return sample(params, n, rng);
}

std::vector<double> sample_radians(const GcpcParams& params, std::size_t n,
                                   std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(sample_one(params, rng).radians());
    return out;
}

}  // namespace gcpc
