#pragma once

#include <cstdint>
#include <vector>

namespace loewner {

/// Default seed used by every sampling routine; reports are reproducible
/// unless the caller overrides it.
inline constexpr std::uint64_t kDefaultSeed = 0x5EEDBA5Eu;

/// Halton radical-inverse in the given prime base, index >= 1.
double halton(std::uint64_t index, std::uint32_t base);

/// First `count` primes (2, 3, 5, ...), used as Halton bases per dimension.
std::vector<std::uint32_t> halton_bases(std::size_t count);

/// Deterministic Fisher-Yates shuffle of 0..count-1 driven by the seed.
std::vector<std::size_t> shuffled_indices(std::size_t count, std::uint64_t seed);

} // namespace loewner
