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
#include <optional>

#include "adalsh/combinatorics.hpp"
#include "adalsh/error.hpp"

namespace adalsh {

/// Bitsampling collision probabilities for a close radius r (and optionally a
/// far radius c r) in {0,1}^d.
struct CollisionModel {
  std::size_t d = 0;
  std::size_t r = 0;
  double p1 = 1.0;
  std::optional<double> c;
  std::optional<double> p2;

  static CollisionModel make(std::size_t d, std::size_t r, std::optional<double> c = std::nullopt) {
    if (d == 0) throw_validation("CollisionModel: d must be positive");
    if (r >= d) throw_validation("CollisionModel: need r < d so that p1 > 0");
    CollisionModel m;
    m.d = d;
    m.r = r;
    m.p1 = 1.0 - static_cast<double>(r) / static_cast<double>(d);
    if (c) {
      const double far = *c * static_cast<double>(r);
      if (!(*c > 1.0)) throw_validation("CollisionModel: need c > 1");
      if (!(far < static_cast<double>(d))) throw_validation("CollisionModel: need c r < d");
      m.c = c;
      m.p2 = 1.0 - far / static_cast<double>(d);
    }
    return m;
  }
};

/// (1 - delta/d)^k: probability that k sampled coordinates all agree.
inline double collision_prob(std::size_t delta, std::size_t d, std::size_t k) noexcept {
  return std::pow(1.0 - static_cast<double>(delta) / static_cast<double>(d), static_cast<double>(k));
}

struct StandardParams {
  std::size_t k = 0;
  std::uint64_t L = 0;
};

/// Classic single-level parameters: k = ceil(ln n / ln(1/p2)) and
/// L = ceil(3 p1^-k), i.e. failure probability about e^-3 per close point.
inline StandardParams standard_lsh_params(std::size_t n, double p1, double p2) {
  if (!(p2 > 0.0 && p2 < p1 && p1 < 1.0)) throw_validation("standard_lsh_params: need 0 < p2 < p1 < 1");
  if (n == 0) throw_validation("standard_lsh_params: n must be positive");
  StandardParams params;
  params.k = static_cast<std::size_t>(stable_ceil(std::log(static_cast<double>(n)) / std::log(1.0 / p2)));
  params.L = static_cast<std::uint64_t>(stable_ceil(3.0 * std::pow(p1, -static_cast<double>(params.k))));
  return params;
}

namespace detail {
inline std::uint64_t to_count(double value) {
  if (value >= 0x1.0p63) return std::uint64_t{1} << 63;
  return static_cast<std::uint64_t>(stable_ceil(value));
}
}  // namespace detail

inline std::uint64_t reps_plain(std::size_t k, double p1) {
  return detail::to_count(std::pow(p1, -static_cast<double>(k)));
}

/// ceil(p1^-k * 2 ln(2k)); level 0 always has exactly one table.
inline std::uint64_t reps_single(std::size_t k, double p1) {
  if (k == 0) return 1;
  return detail::to_count(std::pow(p1, -static_cast<double>(k)) * 2.0 * std::log(2.0 * static_cast<double>(k)));
}

}  // namespace adalsh
