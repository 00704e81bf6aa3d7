#pragma once

#include <cstddef>
#include <cstdint>

namespace irlbfgs {

// splitmix64 generator. std::mt19937_64 would be portable too, but
// std::uniform_int_distribution is not specified bit-for-bit across standard
// libraries, and runs must replay identically on every platform.
struct RngState {
  std::uint64_t state = 0x9e3779b97f4a7c15ull;

  static RngState seeded(std::uint64_t seed) { return RngState{seed}; }

  // Independent stream `index` under one master seed.
  static RngState derive(std::uint64_t master_seed, std::uint64_t index);

  std::uint64_t next_u64();

  // Uniform in [0, 1), 53-bit resolution.
  double next_unit();

  // Standard normal via Box-Muller (two uniforms per draw, no cached spare).
  double next_gaussian();
};

// Uniform draw on {0, ..., N-1}; advances rng deterministically.
// Throws std::invalid_argument when N == 0.
std::size_t sample_index(RngState& rng, std::size_t N);

}  // namespace irlbfgs
