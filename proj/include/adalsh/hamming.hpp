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
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adalsh/error.hpp"

namespace adalsh {

/// A point of {0,1}^d packed into 64-bit words, bit i in word i / 64 at
/// position i % 64. Padding bits beyond `dim()` are always zero, so word-wise
/// popcount needs no masking.
class BitPoint {
 public:
  BitPoint() = default;
  explicit BitPoint(std::size_t dim) : dim_(dim), words_((dim + 63) / 64, 0) {}

  std::size_t dim() const noexcept { return dim_; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  bool test(std::size_t i) const noexcept {
    return (words_[i >> 6] >> (i & 63)) & 1U;
  }
  void set(std::size_t i, bool value = true) noexcept {
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= bit;
    } else {
      words_[i >> 6] &= ~bit;
    }
  }
  void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  std::size_t popcount() const noexcept {
    std::size_t total = 0;
    for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
  }

  friend bool operator==(const BitPoint&, const BitPoint&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<std::uint64_t> words_;
};

inline BitPoint complement(const BitPoint& x) {
  BitPoint out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) out.set(i, !x.test(i));
  return out;
}

inline std::size_t hamming_distance(const BitPoint& a, const BitPoint& b) {
  if (a.dim() != b.dim()) {
    throw_validation("hamming_distance: dimension mismatch (" +
                     std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
  }
  const auto wa = a.words();
  const auto wb = b.words();
  std::size_t dist = 0;
  for (std::size_t w = 0; w < wa.size(); ++w) {
    dist += static_cast<std::size_t>(std::popcount(wa[w] ^ wb[w]));
  }
  return dist;
}

/// Points sharing one dimension; ids are positions 0..n-1.
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::size_t dim, std::vector<BitPoint> points)
      : dim_(dim), points_(std::move(points)) {
    if (points_.empty()) throw_validation("PointSet: need at least one point");
    for (const auto& p : points_) {
      if (p.dim() != dim_) throw_validation("PointSet: point dimension differs from set dimension");
    }
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return points_.size(); }
  const BitPoint& operator[](std::size_t id) const noexcept { return points_[id]; }
  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<BitPoint> points_;
};

/// counts[delta] = number of points at Hamming distance delta from a query.
struct DistanceHistogram {
  std::vector<std::uint64_t> counts;

  std::size_t dim() const noexcept { return counts.empty() ? 0 : counts.size() - 1; }

  std::uint64_t total() const noexcept {
    std::uint64_t n = 0;
    for (auto c : counts) n += c;
    return n;
  }

  /// N_radius: points at distance <= radius.
  std::uint64_t within(std::size_t radius) const noexcept {
    std::uint64_t n = 0;
    for (std::size_t delta = 0; delta <= radius && delta < counts.size(); ++delta) n += counts[delta];
    return n;
  }

  /// Points with lo < distance <= hi.
  std::uint64_t between(std::size_t lo, std::size_t hi) const noexcept {
    return within(hi) - within(lo);
  }

  friend bool operator==(const DistanceHistogram&, const DistanceHistogram&) = default;
};

inline DistanceHistogram distance_histogram(const BitPoint& q, const PointSet& set) {
  if (q.dim() != set.dim()) throw_validation("distance_histogram: dimension mismatch");
  DistanceHistogram hist;
  hist.counts.assign(set.dim() + 1, 0);
  for (const auto& x : set) ++hist.counts[hamming_distance(q, x)];
  return hist;
}

// Hex form: character j holds bits 4j..4j+3 with bit 4j as the most
// significant bit of the nibble. ceil(d/4) characters; unused trailing bits
// of the last nibble are zero.

inline std::string to_hex(const BitPoint& x) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out((x.dim() + 3) / 4, '0');
  for (std::size_t j = 0; j < out.size(); ++j) {
    unsigned nibble = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      const std::size_t i = 4 * j + b;
      if (i < x.dim() && x.test(i)) nibble |= 8U >> b;
    }
    out[j] = kDigits[nibble];
  }
  return out;
}

inline BitPoint from_hex(std::string_view hex, std::size_t dim) {
  if (hex.size() != (dim + 3) / 4) {
    throw_validation("hex point has " + std::to_string(hex.size()) + " digits, expected " +
                     std::to_string((dim + 3) / 4));
  }
  BitPoint x(dim);
  for (std::size_t j = 0; j < hex.size(); ++j) {
    const char ch = hex[j];
    unsigned nibble = 0;
    if (ch >= '0' && ch <= '9') {
      nibble = static_cast<unsigned>(ch - '0');
    } else if (ch >= 'a' && ch <= 'f') {
      nibble = static_cast<unsigned>(ch - 'a' + 10);
    } else if (ch >= 'A' && ch <= 'F') {
      nibble = static_cast<unsigned>(ch - 'A' + 10);
    } else {
      throw_validation(std::string("invalid hex digit '") + ch + "'");
    }
    for (std::size_t b = 0; b < 4; ++b) {
      if (!(nibble & (8U >> b))) continue;
      const std::size_t i = 4 * j + b;
      if (i >= dim) throw_validation("hex point sets padding bits beyond dimension");
      x.set(i);
    }
  }
  return x;
}

}  // namespace adalsh
