#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace bgwr {

using Engine = std::mt19937_64;

/// Named substreams. Every random draw in the library comes from an engine
/// seeded with derive_seed(master, {stream, index...}).
enum class Stream : std::uint64_t {
  data = 1,   // simulated dataset of one replicate
  chain = 2,  // MCMC chain of one replicate / fit
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Deterministic child seed for a path of indices below a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept;

inline Engine make_engine(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  return Engine(derive_seed(master, path));
}

}  // namespace bgwr
