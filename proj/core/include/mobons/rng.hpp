#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace mobons {

using Rng = std::mt19937_64;

/// Derives a child seed from a parent seed and a stream tag.
/// Stable across runs and platforms (splitmix64 finalizer).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);
std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag);
std::uint64_t mix_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> streams);

}  // namespace mobons
