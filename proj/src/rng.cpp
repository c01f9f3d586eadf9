#include "pam/rng.hpp"

#include <cmath>
#include <numbers>

namespace pam {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t stream, std::uint64_t counter) const {
    const std::uint64_t key = mix64(seed + kGolden) ^ mix64(stream * 0xd1b54a32d192ed03ull + 1);
    return mix64(key + (counter + 1) * kGolden);
}

double CounterRng::uniform(std::uint64_t stream, std::uint64_t counter) const {
    return (static_cast<double>(bits(stream, counter) >> 11) + 0.5) * 0x1.0p-53;
}

std::pair<double, double> CounterRng::normal_pair(std::uint64_t stream,
                                                  std::uint64_t counter) const {
    const double u1 = uniform(stream, 2 * counter);
    const double u2 = uniform(stream, 2 * counter + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t replicate) {
    return mix64(mix64(base ^ 0x5851f42d4c957f2dull) + replicate * kGolden);
}

}  // namespace pam
