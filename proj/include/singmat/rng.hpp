#pragma once

#include <cstdint>

#include "singmat/base.hpp"
#include "singmat/vec.hpp"

namespace singmat {

// SplitMix64: tiny, portable, and identical across platforms, which keeps
// seeded sampling byte-reproducible.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [lo, hi], rejection-sampled.
  Int uniform(Int lo, Int hi) {
    std::uint64_t span = std::uint64_t(hi - lo) + 1;
    std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % span);
    std::uint64_t r;
    do {
      r = next();
    } while (r >= limit);
    return lo + Int(r % span);
  }
};

// Random primitive vector with coordinates in [-coord_max, coord_max] and,
// if norm_sq_max > 0, squared norm at most norm_sq_max.
inline IntVec random_primitive_vec(SplitMix64& rng, int dim, Int coord_max, Int norm_sq_max = 0) {
  while (true) {
    auto c = std::vector<Int>(size_t(dim));
    for (auto& x : c) x = rng.uniform(-coord_max, coord_max);
    IntVec v(std::move(c));
    if (v.is_zero() || !v.is_primitive()) continue;
    if (norm_sq_max > 0 && v.norm_sq() > norm_sq_max) continue;
    return v;
  }
}

}  // namespace singmat
