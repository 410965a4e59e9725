// Copyright 2026 The adalsh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "adalsh/rng.hpp"

namespace adalsh {

/// C(n, k) as an integer, saturating at UINT64_MAX instead of overflowing.
inline std::uint64_t binomial_saturated(std::uint64_t n, std::uint64_t k) noexcept {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  if (k > n) return 0;
  k = std::min(k, n - k);
  uint128_t acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // acc * (n - k + i) / i stays integral at every step.
    acc = acc * (n - k + i) / i;
    if (acc > kMax) return kMax;
  }
  return static_cast<std::uint64_t>(acc);
}

/// C(n, k) in floating point; exact while the result fits in 53 bits.
inline double binomial_real(std::uint64_t n, std::uint64_t k) noexcept {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double acc = 1.0;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return acc < 0x1.0p53 ? std::round(acc) : acc;
}

/// Advances `idx` (strictly increasing indices into [0, universe)) to the next
/// combination in lexicographic order. Returns false after the last one.
inline bool next_combination(std::vector<std::size_t>& idx, std::size_t universe) noexcept {
  const std::size_t k = idx.size();
  std::size_t pos = k;
  while (pos > 0) {
    --pos;
    if (idx[pos] < universe - k + pos) {
      ++idx[pos];
      for (std::size_t j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

/// Ceiling that ignores floating-point noise just above an integer, so
/// ln(1024)/ln(2) maps to 10 rather than 11.
inline double stable_ceil(double x) noexcept {
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x))) return nearest;
  return std::ceil(x);
}

}  // namespace adalsh
