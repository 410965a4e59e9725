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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adalsh/combinatorics.hpp"
#include "adalsh/error.hpp"
#include "adalsh/hamming.hpp"
#include "adalsh/rng.hpp"

namespace adalsh {

struct InstanceMeta {
  std::string generator;
  std::uint64_t seed = 0;
  std::size_t t = 0;
  double c = 0.0;
  /// t-heavy only: collision probability of the farthest very-close point at
  /// the standard LSH level ceil(ln n / ln(1/p2)).
  std::optional<double> close_collision_prob;
};

struct Instance {
  PointSet set;
  BitPoint query;
  std::size_t r = 0;
  InstanceMeta meta;
};

inline BitPoint random_point(std::size_t dim, Rng& rng) {
  BitPoint x(dim);
  for (std::size_t i = 0; i < dim; ++i) x.set(i, rng() >> 63);
  return x;
}

namespace detail {

/// Appends `count` distinct points at exactly `delta` from `query`, drawn
/// uniformly from the shell. Small shells are enumerated in lexicographic
/// flip order and subsampled; large ones are sampled with rejection.
inline void append_shell(std::vector<BitPoint>& out, const BitPoint& query,
                         std::size_t delta, std::uint64_t count, Rng& rng) {
  const std::size_t d = query.dim();
  if (count == 0) return;
  const std::uint64_t total = binomial_saturated(d, delta);
  if (count > total) {
    throw_infeasible("shell " + std::to_string(delta) + " cannot hold " +
                     std::to_string(count) + " distinct points");
  }
  auto flipped = [&](const std::vector<std::size_t>& idx) {
    BitPoint x = query;
    for (auto i : idx) x.flip(i);
    return x;
  };

  if (total / 4 <= count) {
    // Dense: pick `count` ranks out of `total`, keep them in flip order.
    std::vector<std::uint64_t> ranks(total);
    for (std::uint64_t j = 0; j < total; ++j) ranks[j] = j;
    for (std::uint64_t j = 0; j < count; ++j) std::swap(ranks[j], ranks[j + rng.uniform(total - j)]);
    ranks.resize(count);
    std::sort(ranks.begin(), ranks.end());
    std::vector<std::size_t> idx(delta);
    for (std::size_t j = 0; j < delta; ++j) idx[j] = j;
    std::uint64_t rank = 0;
    for (auto want : ranks) {
      for (; rank < want; ++rank) next_combination(idx, d);
      out.push_back(flipped(idx));
    }
    return;
  }

  std::set<std::vector<std::uint64_t>> seen;
  std::vector<std::size_t> coords(d);
  std::vector<std::size_t> idx(delta);
  while (seen.size() < count) {
    for (std::size_t j = 0; j < d; ++j) coords[j] = j;
    for (std::size_t j = 0; j < delta; ++j) {
      std::swap(coords[j], coords[j + rng.uniform(d - j)]);
      idx[j] = coords[j];
    }
    BitPoint x = flipped(idx);
    std::vector<std::uint64_t> key(x.words().begin(), x.words().end());
    if (seen.insert(std::move(key)).second) out.push_back(std::move(x));
  }
}

/// Fills shells lo, lo+1, ..., hi (lo <= hi) or lo, lo-1, ..., hi (lo > hi)
/// until `count` points are placed. Returns the last shell touched.
inline std::size_t fill_shells(std::vector<BitPoint>& out, const BitPoint& query,
                               std::size_t lo, std::size_t hi, std::uint64_t count,
                               const char* what, Rng& rng) {
  std::size_t delta = lo;
  std::size_t last = lo;
  while (count > 0) {
    const std::uint64_t take = std::min<std::uint64_t>(count, binomial_saturated(query.dim(), delta));
    append_shell(out, query, delta, take, rng);
    count -= take;
    last = delta;
    if (count == 0) break;
    if (delta == hi) {
      throw_infeasible(std::string(what) + ": distance shells " + std::to_string(lo) + ".." +
                       std::to_string(hi) + " hold too few points");
    }
    delta = lo <= hi ? delta + 1 : delta - 1;
  }
  return last;
}

inline std::size_t ceil_radius(double c, std::size_t r) { return static_cast<std::size_t>(stable_ceil(c * r)); }
inline std::size_t floor_radius(double c, std::size_t r) {
  const double x = c * static_cast<double>(r);
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, x)) return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::floor(x));
}

inline Instance finish(std::vector<BitPoint> points, BitPoint query, std::size_t r,
                       InstanceMeta meta, Rng& rng) {
  shuffle(points.begin(), points.end(), rng);
  const std::size_t d = query.dim();
  return Instance{PointSet(d, std::move(points)), std::move(query), r, std::move(meta)};
}

inline void check_common(std::size_t n, std::size_t t, std::size_t d, std::size_t r) {
  if (d == 0) throw_validation("dimension must be positive");
  if (n == 0) throw_validation("n must be positive");
  if (t == 0 || t > n) throw_validation("t must satisfy 1 <= t <= n");
  if (r == 0 || r >= d) throw_validation("r must satisfy 1 <= r < d");
}

}  // namespace detail

/// t-1 points on the innermost shells 1, 2, ... (all strictly inside r), one
/// point at distance exactly r, and n-t points from distance ceil(c r) upward.
inline Instance gen_t_heavy(std::size_t n, std::size_t t, std::size_t d, std::size_t r,
                            double c, std::uint64_t seed) {
  detail::check_common(n, t, d, r);
  const std::size_t far = detail::ceil_radius(c, r);
  if (far <= r) throw_validation("t-heavy: need ceil(c r) > r");
  if (far >= d) throw_validation("t-heavy: need ceil(c r) < d");

  Rng rng(seed);
  BitPoint query = random_point(d, rng);
  std::vector<BitPoint> points;
  points.reserve(n);

  std::optional<std::size_t> outermost_close;
  if (t > 1) {
    if (r < 2) throw_infeasible("t-heavy: no shell strictly inside r for the close points");
    outermost_close = detail::fill_shells(points, query, 1, r - 1, t - 1, "t-heavy close points", rng);
  }
  detail::append_shell(points, query, r, 1, rng);
  detail::fill_shells(points, query, far, d, n - t, "t-heavy far points", rng);

  InstanceMeta meta{"t-heavy", seed, t, c, std::nullopt};
  if (outermost_close) {
    const double p2 = 1.0 - static_cast<double>(far) / static_cast<double>(d);
    const double k = n > 1 ? stable_ceil(std::log(static_cast<double>(n)) / std::log(1.0 / p2)) : 0.0;
    meta.close_collision_prob =
        std::pow(1.0 - static_cast<double>(*outermost_close) / static_cast<double>(d), k);
  }
  return detail::finish(std::move(points), std::move(query), r, std::move(meta), rng);
}

/// t points within r (t-1 innermost plus one at r), t points in (r, c r]
/// filled from shell floor(c r) downward, and n-2t points on the shells just
/// beyond c r.
inline Instance gen_gap_instance(std::size_t n, std::size_t t, std::size_t d, std::size_t r,
                                 double c, std::uint64_t seed) {
  if (t == 0) throw_validation("gap instance: t must be positive");
  detail::check_common(n, t, d, r);
  if (!(c > 1.0)) throw_validation("gap instance: need c > 1");
  if (n < 2 * t) throw_validation("gap instance: need n >= 2t");
  const std::size_t outer = detail::floor_radius(c, r);
  if (outer <= r) throw_validation("gap instance: no integer distance in (r, c r]");
  if (outer + 1 > d) throw_validation("gap instance: need c r < d");

  Rng rng(seed);
  BitPoint query = random_point(d, rng);
  std::vector<BitPoint> points;
  points.reserve(n);
  if (t > 1) {
    if (r < 2) throw_infeasible("gap instance: no shell strictly inside r for the close points");
    detail::fill_shells(points, query, 1, r - 1, t - 1, "gap close points", rng);
  }
  detail::append_shell(points, query, r, 1, rng);
  detail::fill_shells(points, query, outer, r + 1, t, "gap middle points", rng);
  detail::fill_shells(points, query, outer + 1, d, n - 2 * t, "gap far points", rng);
  return detail::finish(std::move(points), std::move(query), r,
                        InstanceMeta{"gap", seed, t, c, std::nullopt}, rng);
}

inline PointSet gen_uniform(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n == 0 || d == 0) throw_validation("gen_uniform: n and d must be positive");
  Rng rng(seed);
  std::vector<BitPoint> points;
  points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) points.push_back(random_point(d, rng));
  return PointSet(d, std::move(points));
}

/// Uniform points plus an independent uniform query.
inline Instance gen_uniform_instance(std::size_t n, std::size_t d, std::size_t r,
                                     std::uint64_t seed) {
  if (r > d) throw_validation("r must not exceed d");
  PointSet set = gen_uniform(n, d, seed);
  Rng rng(derive_seed(seed, 1));
  BitPoint query = random_point(d, rng);
  const std::size_t t = distance_histogram(query, set).within(r);
  return Instance{std::move(set), std::move(query), r, InstanceMeta{"uniform", seed, t, 0.0, std::nullopt}};
}

/// Points around the query such that N_s(query) <= max(1, s^growth_exp) for
/// every s in 1..d; each shell takes as many points as the cap allows.
inline Instance gen_growth_restricted(std::size_t n, std::size_t d, double growth_exp,
                                      std::size_t r, std::uint64_t seed) {
  if (n == 0 || d == 0) throw_validation("growth-restricted: n and d must be positive");
  if (!(growth_exp > 0.0)) throw_validation("growth-restricted: growth exponent must be positive");
  if (r > d) throw_validation("r must not exceed d");

  Rng rng(seed);
  BitPoint query = random_point(d, rng);
  std::vector<BitPoint> points;
  points.reserve(n);
  std::uint64_t placed = 0;
  for (std::size_t s = 1; s <= d && placed < n; ++s) {
    const double cap_real = std::floor(std::pow(static_cast<double>(s), growth_exp) + 1e-9);
    const std::uint64_t cap =
        cap_real >= static_cast<double>(n) ? n : std::max<std::uint64_t>(1, static_cast<std::uint64_t>(cap_real));
    if (cap <= placed) continue;
    const std::uint64_t take =
        std::min({cap - placed, static_cast<std::uint64_t>(n) - placed, binomial_saturated(d, s)});
    detail::append_shell(points, query, s, take, rng);
    placed += take;
  }
  if (placed < n) {
    throw_infeasible("growth-restricted: growth bound allows only " + std::to_string(placed) +
                     " points in dimension " + std::to_string(d));
  }
  Instance inst = detail::finish(std::move(points), std::move(query), r,
                                 InstanceMeta{"growth", seed, 0, growth_exp, std::nullopt}, rng);
  inst.meta.t = distance_histogram(inst.query, inst.set).within(r);
  return inst;
}

}  // namespace adalsh
