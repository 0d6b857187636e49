#pragma once

#include <cstdint>
#include <random>

namespace fquake {

using Rng = std::mt19937_64;

// Independent random streams. Keeping them apart is what makes avalanche
// sizes independent of the price series: coin flips never touch the drive.
enum class Stream : std::uint32_t {
    Topology = 1,
    Drive = 2,
    Bets = 3,
    Capital = 4,
};

inline Rng make_stream(std::uint64_t seed, Stream stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    return Rng(seq);
}

inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline bool coin_flip(Rng& rng) {
    return std::bernoulli_distribution(0.5)(rng);
}

}  // namespace fquake
