#pragma once

#include <cstdint>
#include <random>

namespace kmono {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer; used to turn (seed, stream) pairs into
/// well-separated engine seeds.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

/// Engine for stream `stream` of base seed `seed`. Distinct streams are
/// statistically independent for all practical purposes.
Engine make_engine(std::uint64_t seed, std::uint64_t stream = 0);

/// Seed of a derived stream, for handing to a callee that creates its own engine.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

}  // namespace kmono
