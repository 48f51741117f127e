// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "linalg.hpp"

namespace actwarp {

inline uint64_t fnv1a64(std::string_view s, uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

/// Per-check seed so that execution order never changes a check's samples.
inline uint64_t derive_seed(uint64_t base, std::string_view tag) {
  return base ^ fnv1a64(tag);
}

/// Deterministic uniform draws; the mapping from raw 64-bit output to
/// doubles is pinned here rather than left to the standard library so
/// reports are reproducible across platforms.
class Rng {
public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  double unit() {  // [0, 1)
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  /// Componentwise uniform in [-1, 1].
  Vec vector_pm1(int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = uniform(-1.0, 1.0);
    return v;
  }

  Vec point_in(const std::vector<std::pair<double, double>>& box) {
    Vec p(box.size());
    for (size_t i = 0; i < box.size(); ++i) p[i] = uniform(box[i].first, box[i].second);
    return p;
  }

private:
  std::mt19937_64 gen_;
};

}  // namespace actwarp
