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
#include <optional>
#include <string>

#include "adalsh/combinatorics.hpp"
#include "adalsh/error.hpp"

namespace adalsh {

inline constexpr std::size_t kMaxLevel = 64;

/// k-bit bucket code; bit j is the point's value at the j-th sampled
/// coordinate, so the level-(k-1) code is the low k-1 bits of the level-k one.
struct HashCode {
  std::uint32_t level = 0;
  std::uint64_t bits = 0;

  friend bool operator==(const HashCode&, const HashCode&) = default;
};

inline constexpr std::uint64_t level_mask(std::size_t k) noexcept {
  return k >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
}

/// Number of k-bit codes at distance <= a from a fixed code, saturating at
/// UINT64_MAX (only reachable for k = 64, a = 64). V(-1) = 0.
inline std::uint64_t ball_volume(std::size_t k, long a) {
  if (a < -1) throw_validation("ball_volume: radius below -1");
  if (a > static_cast<long>(k)) throw_validation("ball_volume: radius exceeds k");
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 0;
  for (long i = 0; i <= a; ++i) {
    const std::uint64_t c = binomial_saturated(k, static_cast<std::uint64_t>(i));
    if (c > kMax - total) return kMax;
    total += c;
  }
  return total;
}

namespace detail {

inline void check_probe_index(std::size_t k, std::uint64_t ell) {
  if (k > kMaxLevel) throw_validation("probe: level exceeds 64");
  if (ell == 0) throw_validation("probe index must be >= 1");
  if (k < 64 && ell > (std::uint64_t{1} << k)) {
    throw_validation("probe index " + std::to_string(ell) + " exceeds 2^" + std::to_string(k));
  }
}

}  // namespace detail

/// Shell radius a of the ell-th probe: V(a-1) < ell <= V(a).
inline std::size_t probe_shell(std::size_t k, std::uint64_t ell) {
  detail::check_probe_index(k, ell);
  std::uint64_t volume = 0;
  for (std::size_t a = 0; a <= k; ++a) {
    const std::uint64_t c = binomial_saturated(k, a);
    if (ell - volume <= c) return a;
    volume += c;
  }
  return k;
}

/// XOR mask of the ell-th probe. Within a shell the flipped index sets come
/// in colexicographic order, which for bitmasks is increasing numeric order.
inline std::uint64_t probe_mask(std::size_t k, std::uint64_t ell) {
  const std::size_t a = probe_shell(k, ell);
  std::uint64_t rank = ell - 1 - (a == 0 ? 0 : ball_volume(k, static_cast<long>(a) - 1));
  std::uint64_t mask = 0;
  std::size_t upper = k;  // exclusive bound for the next element
  for (std::size_t i = a; i >= 1; --i) {
    std::size_t c = upper - 1;
    while (binomial_saturated(c, i) > rank) --c;
    mask |= std::uint64_t{1} << c;
    rank -= binomial_saturated(c, i);
    upper = c;
  }
  return mask;
}

/// The ell-th closest code to `base` (1-based; ell = 1 is base itself).
inline HashCode probe_code(const HashCode& base, std::uint64_t ell) {
  return HashCode{base.level, base.bits ^ probe_mask(base.level, ell)};
}

/// Probability that a point whose sampled bits each agree with the query's
/// with probability p lands in the ell-th probed bucket: p^(k-a) (1-p)^a.
inline double probe_prob(std::size_t k, std::uint64_t ell, double p) {
  if (!(p > 0.0 && p < 1.0)) throw_validation("probe_prob: need 0 < p < 1");
  const std::size_t a = probe_shell(k, ell);
  return std::pow(p, static_cast<double>(k - a)) * std::pow(1.0 - p, static_cast<double>(a));
}

/// P_{k,ell}: probability of a collision within the first ell probes.
inline double cumulative_prob(std::size_t k, std::uint64_t ell, double p) {
  if (!(p > 0.0 && p < 1.0)) throw_validation("cumulative_prob: need 0 < p < 1");
  const std::size_t a = probe_shell(k, ell);
  double total = 0.0;
  for (std::size_t i = 0; i < a; ++i) {
    total += binomial_real(k, i) * std::pow(p, static_cast<double>(k - i)) *
             std::pow(1.0 - p, static_cast<double>(i));
  }
  const std::uint64_t inner = a == 0 ? 0 : ball_volume(k, static_cast<long>(a) - 1);
  total += static_cast<double>(ell - inner) * std::pow(p, static_cast<double>(k - a)) *
           std::pow(1.0 - p, static_cast<double>(a));
  return total;
}

/// Repetitions for ell probes per table at level k: ceil(2 ln(2 ell k) / P_{k,ell}).
inline std::uint64_t reps_multi(std::size_t k, std::uint64_t ell, double p1) {
  if (k < 1 || ell < 1) throw_validation("reps_multi: need k >= 1 and ell >= 1");
  const double value = 2.0 * std::log(2.0 * static_cast<double>(ell) * static_cast<double>(k)) /
                       cumulative_prob(k, ell, p1);
  if (value >= 0x1.0p63) return std::uint64_t{1} << 63;
  return static_cast<std::uint64_t>(stable_ceil(value));
}

struct Probe {
  std::uint64_t index = 0;  // 1-based probe number
  std::uint64_t mask = 0;
  std::size_t shell = 0;
};

/// Lazy enumeration of the probing sequence at level k: shells by increasing
/// radius, masks within a shell in increasing numeric order. Never
/// materializes all 2^k codes.
class ProbeSequence {
 public:
  ProbeSequence(std::size_t k, double p) : k_(k), p_(p) {
    if (k > kMaxLevel) throw_validation("ProbeSequence: level exceeds 64");
    if (!(p > 0.5 && p < 1.0)) {
      throw_validation("ProbeSequence: need 1/2 < p < 1 for a probability-ordered sequence");
    }
  }

  std::size_t level() const noexcept { return k_; }
  double p() const noexcept { return p_; }

  /// Next probe, or nullopt once all 2^k codes were produced.
  std::optional<Probe> next() {
    if (done_) return std::nullopt;
    Probe probe{++count_, mask_, shell_};
    advance();
    return probe;
  }

  /// Probability that a point at per-bit agreement p_ hits `probe`.
  double probability(const Probe& probe) const noexcept {
    return std::pow(p_, static_cast<double>(k_ - probe.shell)) *
           std::pow(1.0 - p_, static_cast<double>(probe.shell));
  }

 private:
  void advance() {
    if (shell_ == 0) {
      start_shell(1);
      return;
    }
    // Gosper's hack: next larger integer with the same popcount.
    const std::uint64_t lowest = mask_ & (~mask_ + 1);
    const std::uint64_t ripple = mask_ + lowest;
    if (ripple == 0 || (k_ < 64 && (ripple >> k_) != 0)) {
      start_shell(shell_ + 1);
      return;
    }
    const std::uint64_t next = (((ripple ^ mask_) >> 2) / lowest) | ripple;
    if (k_ < 64 && (next >> k_) != 0) {
      start_shell(shell_ + 1);
      return;
    }
    mask_ = next;
  }

  void start_shell(std::size_t a) {
    if (a > k_) {
      done_ = true;
      return;
    }
    shell_ = a;
    mask_ = level_mask(a);
  }

  std::size_t k_;
  double p_;
  std::uint64_t count_ = 0;
  std::uint64_t mask_ = 0;
  std::size_t shell_ = 0;
  bool done_ = false;
};

}  // namespace adalsh
