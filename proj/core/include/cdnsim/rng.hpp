#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace cdnsim {

// All stochastic behaviour in the library is driven by this generator.
//
// The engine is MT19937-64 (std::mt19937_64), whose output sequence is fixed
// by the C++ standard. The standard <random> distributions are not
// portable across library implementations, so the conversions to doubles and
// bounded integers are done here with explicitly specified arithmetic:
//
//   uniform01()  = (next() >> 11) * 2^-53             in [0, 1)
//   below(n)     = rejection sampling on next() % n   unbiased in [0, n)
//
// Given the same seed, every platform produces the same values.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform01();
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// FNV-1a 64-bit hash of a byte string.
std::uint64_t fnv1a64(std::string_view bytes);

/// Per-entity seed: mix64(master ^ fnv1a64(key)). Used so that e.g. each
/// user group draws from an independent stream regardless of processing order.
std::uint64_t derive_seed(std::uint64_t master, std::string_view key);

}  // namespace cdnsim
