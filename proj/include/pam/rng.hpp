#pragma once

#include <cstdint>
#include <utility>

namespace pam {

// Stateless counter-based generator: every draw is a pure function of
// (seed, stream, counter), so draws can be produced in any order or in
// parallel and still reproduce bit-for-bit.
struct CounterRng {
    std::uint64_t seed = 0;

    std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const;
    // Uniform on (0, 1), 53-bit resolution; never returns 0.
    double uniform(std::uint64_t stream, std::uint64_t counter) const;
    // Two independent standard normals via Box-Muller on counters 2c, 2c+1.
    std::pair<double, double> normal_pair(std::uint64_t stream, std::uint64_t counter) const;
    double normal(std::uint64_t stream, std::uint64_t counter) const {
        return normal_pair(stream, counter).first;
    }
};

// Derives an independent seed from a base seed and a replicate index.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t replicate);

}  // namespace pam
