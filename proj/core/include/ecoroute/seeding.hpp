#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace ecoroute {

// Seed hierarchy: master seed → (stream, index) → child seed. Children are
// SplitMix64 finalizations of the parent mixed with the stream tag and
// index, so sibling streams are independent and stable across builds.
enum class SeedStream : std::uint64_t {
  scenario = 1,    // topology, source/DC draws, rates
  noise = 2,       // per-trajectory noise seeds (index = replicate)
  edge = 3,        // per-edge Gaussian streams inside a NoiseDriver
  replicate = 4,   // auxiliary per-replicate draws
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t parent, SeedStream stream, std::uint64_t index = 0);

// Portable draws on top of mt19937_64; the std distributions are not
// bit-stable across standard libraries.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, n), rejection-sampled.
  std::size_t below(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

// FNV-1a 64-bit.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace ecoroute
