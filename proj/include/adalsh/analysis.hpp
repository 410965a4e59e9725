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
#include <string>
#include <vector>

#include "adalsh/combinatorics.hpp"
#include "adalsh/error.hpp"
#include "adalsh/hamming.hpp"
#include "adalsh/probing.hpp"

namespace adalsh {

namespace detail {

/// Q_a = sum over delta of counts[delta] * (delta/d)^a * (1 - delta/d)^(k-a):
/// expected number of points landing in one fixed probe at shell radius a.
inline double shell_mass(const DistanceHistogram& hist, std::size_t k, std::size_t a) {
  const double d = static_cast<double>(hist.dim());
  double total = 0.0;
  for (std::size_t delta = 0; delta < hist.counts.size(); ++delta) {
    if (hist.counts[delta] == 0) continue;
    const double disagree = static_cast<double>(delta) / d;
    const double weight = std::pow(disagree, static_cast<double>(a)) * std::pow(1.0 - disagree, static_cast<double>(k - a));
    total += static_cast<double>(hist.counts[delta]) * weight;
  }
  return total;
}

inline void check_hist(const DistanceHistogram& hist) {
  if (hist.counts.size() < 2) throw_validation("histogram needs dimension >= 1");
}

}  // namespace detail

/// Expected work of probing level k with p^-k repetitions:
/// (1 + sum_x Pr[h_k(q) = h_k(x)]) / p^k.
inline double expected_work(const DistanceHistogram& hist, std::size_t k, double p_close) {
  detail::check_hist(hist);
  if (!(p_close > 0.0 && p_close <= 1.0)) throw_validation("expected_work: need 0 < p <= 1");
  return (1.0 + detail::shell_mass(hist, k, 0)) / std::pow(p_close, static_cast<double>(k));
}

struct LevelOptimum {
  double value = 0.0;
  std::size_t k = 0;
};

inline LevelOptimum w_single(const DistanceHistogram& hist, double p1, std::size_t K) {
  LevelOptimum best{expected_work(hist, 0, p1), 0};
  for (std::size_t k = 1; k <= K; ++k) {
    const double w = expected_work(hist, k, p1);
    if (w < best.value) best = {w, k};
  }
  return best;
}

struct GridCell {
  std::size_t k = 0;
  std::uint64_t ell = 1;
  double value = 0.0;
};

struct CellOptimum {
  double value = 0.0;
  std::size_t k = 0;
  std::uint64_t ell = 1;
};

/// Expected work of the cell (k, ell) for every ell <= min(2^k, max_probes),
/// calling `visit(GridCell)` on each. Returns the minimum (smallest k, then
/// smallest ell, on ties).
template <typename Visit>
CellOptimum for_each_multi_cell(const DistanceHistogram& hist, double p1, std::size_t K,
                                std::uint64_t max_probes, Visit&& visit) {
  detail::check_hist(hist);
  if (!(p1 > 0.0 && p1 < 1.0)) throw_validation("w_multi: need 0 < p1 < 1");
  if (max_probes < 1) throw_validation("w_multi: probe budget must be >= 1");
  const double level0 = expected_work(hist, 0, p1);
  CellOptimum best{level0, 0, 1};
  visit(GridCell{0, 1, level0});
  for (std::size_t k = 1; k <= K; ++k) {
    std::vector<double> mass(k + 1);
    for (std::size_t a = 0; a <= k; ++a) mass[a] = detail::shell_mass(hist, k, a);
    std::vector<double> per_shell(k + 1, 0.0);  // m_a(ell)
    const std::uint64_t limit = k >= 63 ? max_probes : std::min(max_probes, std::uint64_t{1} << k);
    std::size_t shell = 0;
    std::uint64_t shell_end = 1;  // V(shell)
    for (std::uint64_t ell = 1; ell <= limit; ++ell) {
      while (ell > shell_end) {
        ++shell;
        shell_end += binomial_saturated(k, shell);
      }
      per_shell[shell] += 1.0;
      double collisions = 0.0;
      for (std::size_t a = 0; a <= shell; ++a) collisions += per_shell[a] * mass[a];
      const double value = (static_cast<double>(ell) + collisions) / cumulative_prob(k, ell, p1);
      visit(GridCell{k, ell, value});
      if (value < best.value) best = {value, k, ell};
    }
  }
  return best;
}

inline CellOptimum w_multi(const DistanceHistogram& hist, double p1, std::size_t K, std::uint64_t max_probes) {
  return for_each_multi_cell(hist, p1, K, max_probes, [](const GridCell&) {});
}

/// Everything the analysis reports for one histogram.
struct WorkProfile {
  std::vector<double> level_work;  // E[W_k], k = 0..K
  LevelOptimum single;
  CellOptimum multi;
  std::vector<GridCell> grid;  // filled only when requested
};

inline WorkProfile work_profile(const DistanceHistogram& hist, double p1, std::size_t K, std::uint64_t max_probes,
                                bool keep_grid) {
  WorkProfile profile;
  for (std::size_t k = 0; k <= K; ++k) profile.level_work.push_back(expected_work(hist, k, p1));
  profile.single = w_single(hist, p1, K);
  profile.multi = for_each_multi_cell(hist, p1, K, max_probes, [&](const GridCell& cell) {
    if (keep_grid) profile.grid.push_back(cell);
  });
  return profile;
}

/// ln(1/p1) / ln(1/p2).
inline double rho(double p1, double p2) {
  if (!(p1 > 0.0 && p1 < 1.0 && p2 > 0.0 && p2 < 1.0)) throw_validation("rho: need p1, p2 in (0, 1)");
  return std::log(1.0 / p1) / std::log(1.0 / p2);
}

/// Binary entropy in nats.
inline double entropy(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw_validation("entropy: need alpha in [0, 1]");
  if (alpha == 0.0 || alpha == 1.0) return 0.0;
  return -alpha * std::log(alpha) - (1.0 - alpha) * std::log1p(-alpha);
}

/// Relative entropy D(alpha || beta) between Bernoulli distributions, in nats.
inline double kl(double alpha, double beta) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw_validation("kl: need alpha in [0, 1]");
  if (!(beta > 0.0 && beta < 1.0)) throw_validation("kl: need beta in (0, 1)");
  double total = 0.0;
  if (alpha > 0.0) total += alpha * std::log(alpha / beta);
  if (alpha < 1.0) total += (1.0 - alpha) * (std::log1p(-alpha) - std::log1p(-beta));
  return total;
}

struct MultiprobeExponent {
  double alpha = 0.0;
  double exponent = 0.0;
  double residual = 0.0;
};

inline constexpr double kAlphaFloor = 1e-9;

/// Solves tau * (1 + D(alpha || 1-p2) / H(alpha)) = 1 for alpha in
/// (1e-9, 1-p2] by bisection, then returns tau * (1 + D(alpha || 1-p1) / H(alpha)).
inline MultiprobeExponent multiprobe_exponent(double tau, double p1, double p2, double tol = 1e-10) {
  if (!(tau > 0.0 && tau < 1.0)) throw_validation("multiprobe_exponent: need 0 < tau < 1");
  if (!(p2 > 0.0 && p2 < p1 && p1 < 1.0)) throw_validation("multiprobe_exponent: need 0 < p2 < p1 < 1");
  auto residual = [&](double alpha) { return tau * (1.0 + kl(alpha, 1.0 - p2) / entropy(alpha)) - 1.0; };
  double lo = kAlphaFloor;
  double hi = 1.0 - p2;
  const double r_lo = residual(lo);
  const double r_hi = residual(hi);
  if (!(r_lo > 0.0 && r_hi <= 0.0)) {
    throw_validation("multiprobe_exponent: no root in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                     "], residuals " + std::to_string(r_lo) + " and " + std::to_string(r_hi));
  }
  double mid = hi;
  double r_mid = r_hi;
  for (int iter = 0; iter < 400 && std::abs(r_mid) > tol; ++iter) {
    mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    r_mid = residual(mid);
    if (r_mid > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {mid, tau * (1.0 + kl(mid, 1.0 - p1) / entropy(mid)), r_mid};
}

/// tau at which the implicit alpha reaches 1 - p1; from there on the
/// multi-probe exponent equals tau (time linear in the output). Nested
/// bisection: the outer loop on tau, the inner one solving for alpha.
inline double linear_time_threshold(double p1, double p2, double tol = 1e-12) {
  if (!(p2 > 0.0 && p2 < p1 && p1 < 1.0)) throw_validation("linear_time_threshold: need 0 < p2 < p1 < 1");
  const double target = 1.0 - p1;
  double lo = 1e-6;
  double hi = 1.0 - 1e-9;
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (multiprobe_exponent(mid, p1, p2, 1e-13).alpha < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Closed form of the same threshold: H(1-p1) / (H(1-p1) + D(1-p1 || 1-p2)).
inline double linear_time_threshold_closed_form(double p1, double p2) {
  const double h = entropy(1.0 - p1);
  return h / (h + kl(1.0 - p1, 1.0 - p2));
}

/// The other candidate expression, H(1-p2) / (H(1-p2) + D(1-p2 || 1-p1)).
/// Reported next to the solved threshold; the two disagree numerically.
inline double alternate_threshold(double p1, double p2) {
  const double h = entropy(1.0 - p2);
  return h / (h + kl(1.0 - p2, 1.0 - p1));
}

struct ExponentParams {
  double p1 = 0.0;
  double p2 = 0.0;
  double rho = 0.0;
  double tau = 0.0;
  double alpha = 0.0;
  double multiprobe = 0.0;
};

inline ExponentParams exponent_params(double p1, double p2, std::size_t n, std::size_t t) {
  if (n < 2 || t < 1 || t >= n) throw_validation("exponent_params: need 1 <= t < n");
  ExponentParams e;
  e.p1 = p1;
  e.p2 = p2;
  e.rho = rho(p1, p2);
  e.tau = std::log(static_cast<double>(t)) / std::log(static_cast<double>(n));
  if (e.tau > 0.0) {
    const auto m = multiprobe_exponent(e.tau, p1, p2);
    e.alpha = m.alpha;
    e.multiprobe = m.exponent;
  } else {
    e.multiprobe = e.rho;
  }
  return e;
}

/// Level with p2^k <= t/n for the far factor c: ceil(ln(n/t) / ln(1/(1 - c r/d))).
inline std::size_t gap_k(std::size_t n, std::size_t t, std::size_t d, std::size_t r, double c) {
  if (t < 1 || t > n) throw_validation("gap_k: need 1 <= t <= n");
  const double far = c * static_cast<double>(r) / static_cast<double>(d);
  if (!(far < 1.0)) throw_validation("gap_k: need c r < d");
  if (t == n) return 0;
  return static_cast<std::size_t>(
      stable_ceil(std::log(static_cast<double>(n) / static_cast<double>(t)) / std::log(1.0 / (1.0 - far))));
}

/// Largest integer radius R with N_R <= 2 N_r, divided by r (the expansion at
/// the query); infinity when N_r >= n/2.
inline double expansion(const DistanceHistogram& hist, std::size_t r) {
  if (r == 0) throw_validation("expansion: need r >= 1");
  const std::uint64_t n = hist.total();
  const std::uint64_t inside = hist.within(r);
  if (2 * inside >= n) return std::numeric_limits<double>::infinity();
  std::size_t radius = r;
  while (radius + 1 <= hist.dim() && hist.within(radius + 1) <= 2 * inside) ++radius;
  return static_cast<double>(radius) / static_cast<double>(r);
}

}  // namespace adalsh
