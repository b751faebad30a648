#pragma once

#include <cstdint>
#include <random>

namespace molsec {

// Every stochastic operation takes its stream explicitly; there is no global RNG.
using Rng = std::mt19937_64;

// Seed for an independent stream, a pure function of the master seed, a
// stream tag and an index (epoch, frame, trial). Two splitmix64 rounds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) noexcept;

inline Rng make_rng(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
    return Rng{derive_seed(master, stream, index)};
}

} // namespace molsec
