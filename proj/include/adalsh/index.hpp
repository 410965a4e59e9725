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
#include <cstring>
#include <istream>
#include <memory>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "adalsh/collision.hpp"
#include "adalsh/error.hpp"
#include "adalsh/hamming.hpp"
#include "adalsh/probing.hpp"
#include "adalsh/rng.hpp"

namespace adalsh {

enum class Backend : std::uint8_t { kHash = 0, kTrie = 1 };

/// How many tables each level gets (always capped by the budget L).
enum class Schedule : std::uint8_t {
  kPlain = 0,   // ceil(p1^-k)
  kSingle = 1,  // reps_single(k)
  kMulti = 2,   // enough for every reps_multi(k, ell) with ell <= max_probes
};

struct IndexOptions {
  std::uint64_t L = 1;
  Backend backend = Backend::kHash;
  Schedule schedule = Schedule::kSingle;
  std::uint64_t max_probes = 4096;
  std::uint64_t seed = 0;
};

/// Coordinates read by one repetition; level k uses the first k of them.
struct Sampler {
  std::vector<std::uint32_t> coords;

  friend bool operator==(const Sampler&, const Sampler&) = default;
};

inline std::uint64_t scheduled_reps(Schedule schedule, std::size_t k, double p1,
                                    std::uint64_t max_probes) {
  if (k == 0) return 1;
  switch (schedule) {
    case Schedule::kPlain:
      return reps_plain(k, p1);
    case Schedule::kSingle:
      return reps_single(k, p1);
    case Schedule::kMulti: {
      std::uint64_t most = reps_single(k, p1);
      const std::uint64_t probes = k >= 63 ? max_probes : std::min(max_probes, std::uint64_t{1} << k);
      for (std::uint64_t ell = 1; ell <= probes; ++ell) most = std::max(most, reps_multi(k, ell, p1));
      return most;
    }
  }
  return 1;
}

/// Largest level K <= 64 with reps_single(K) <= L.
inline std::size_t max_level_for_budget(std::uint64_t L, double p1) {
  std::size_t K = 0;
  while (K < kMaxLevel && reps_single(K + 1, p1) <= L) ++K;
  return K;
}

namespace detail {

inline std::uint64_t reverse_bits(std::uint64_t x) noexcept {
  x = ((x >> 1) & 0x5555555555555555ULL) | ((x & 0x5555555555555555ULL) << 1);
  x = ((x >> 2) & 0x3333333333333333ULL) | ((x & 0x3333333333333333ULL) << 2);
  x = ((x >> 4) & 0x0F0F0F0F0F0F0F0FULL) | ((x & 0x0F0F0F0F0F0F0F0FULL) << 4);
  x = ((x >> 8) & 0x00FF00FF00FF00FFULL) | ((x & 0x00FF00FF00FF00FFULL) << 8);
  x = ((x >> 16) & 0x0000FFFF0000FFFFULL) | ((x & 0x0000FFFF0000FFFFULL) << 16);
  return (x >> 32) | (x << 32);
}

/// Open-addressing map from bucket code to a slice of the table's id array.
class BucketMap {
 public:
  struct Slot {
    std::uint64_t code = 0;
    std::uint32_t begin = 0;
    std::uint32_t size = 0;  // 0 marks an empty slot; buckets are never empty
  };

  void reserve(std::size_t buckets) {
    std::size_t cap = 2;
    while (cap < 2 * buckets) cap <<= 1;
    slots_.assign(cap, Slot{});
    count_ = 0;
  }

  void insert(std::uint64_t code, std::uint32_t begin, std::uint32_t size) {
    std::size_t pos = splitmix64(code) & (slots_.size() - 1);
    while (slots_[pos].size != 0) pos = (pos + 1) & (slots_.size() - 1);
    slots_[pos] = Slot{code, begin, size};
    ++count_;
  }

  const Slot* find(std::uint64_t code) const noexcept {
    std::size_t pos = splitmix64(code) & (slots_.size() - 1);
    while (slots_[pos].size != 0) {
      if (slots_[pos].code == code) return &slots_[pos];
      pos = (pos + 1) & (slots_.size() - 1);
    }
    return nullptr;
  }

  std::size_t size() const noexcept { return count_; }

 private:
  std::vector<Slot> slots_;
  std::size_t count_ = 0;
};

struct HashTable {
  std::vector<std::uint32_t> ids;  // grouped by bucket, buckets in code-prefix order
  BucketMap buckets;
};

/// One repetition of the trie layout: ids sorted lexicographically by their
/// full code (bit 0 first) plus a path-compressed trie whose nodes store the
/// inclusive index range [left, right] of the ids below them.
struct TrieRepetition {
  struct Node {
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::uint32_t depth = 0;  // length of the prefix shared by the whole range
    std::int32_t child[2] = {-1, -1};
  };

  std::vector<std::uint32_t> order;
  std::vector<std::uint64_t> codes;  // codes[j] is the code of order[j]
  std::vector<Node> nodes;           // nodes[0] is the root
};

inline std::uint32_t common_prefix(std::uint64_t a, std::uint64_t b, std::size_t K) noexcept {
  const std::uint64_t diff = (a ^ b) & level_mask(K);
  return diff == 0 ? static_cast<std::uint32_t>(K) : static_cast<std::uint32_t>(std::countr_zero(diff));
}

inline std::int32_t build_trie_node(TrieRepetition& rep, std::uint32_t lo, std::uint32_t hi,
                                    std::size_t K) {
  using Node = TrieRepetition::Node;
  const auto id = static_cast<std::int32_t>(rep.nodes.size());
  rep.nodes.push_back(Node{lo, hi, common_prefix(rep.codes[lo], rep.codes[hi], K), {-1, -1}});
  const std::uint32_t depth = rep.nodes[id].depth;
  if (depth < K) {
    // Range is sorted with bit `depth` as the first differing bit: zeros first.
    const auto first_one = static_cast<std::uint32_t>(
        std::partition_point(rep.codes.begin() + lo, rep.codes.begin() + hi + 1,
                             [depth](std::uint64_t c) { return ((c >> depth) & 1U) == 0; }) -
        rep.codes.begin());
    const std::int32_t zero = build_trie_node(rep, lo, first_one - 1, K);
    const std::int32_t one = build_trie_node(rep, first_one, hi, K);
    rep.nodes[id].child[0] = zero;
    rep.nodes[id].child[1] = one;
  }
  return id;
}

inline void build_trie(TrieRepetition& rep, std::size_t K) {
  rep.nodes.clear();
  rep.nodes.reserve(2 * rep.order.size());
  build_trie_node(rep, 0, static_cast<std::uint32_t>(rep.order.size() - 1), K);
}

/// Returns (begin, size) of the ids whose level-k code equals `code`.
inline std::pair<std::uint32_t, std::uint32_t> trie_range(const TrieRepetition& rep, std::size_t k,
                                                          std::uint64_t code) noexcept {
  const TrieRepetition::Node* node = &rep.nodes[0];
  while (node->depth < k) {
    const auto bit = (code >> node->depth) & 1U;
    node = &rep.nodes[static_cast<std::size_t>(node->child[bit])];
  }
  if (((code ^ rep.codes[node->left]) & level_mask(k)) != 0) return {0, 0};
  return {node->left, node->right - node->left + 1};
}

template <typename T>
void write_pod(std::ostream& os, const T& value) {
  static_assert(std::endian::native == std::endian::little, "index files are little-endian");
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw_io("index file truncated");
  return value;
}

inline constexpr char kIndexMagic[8] = {'A', 'D', 'A', 'L', 'S', 'H', 'I', 'X'};
inline constexpr std::uint32_t kIndexVersion = 1;

}  // namespace detail

/// Multi-level bitsampling LSH index: levels 0..K, tables_at(k) repetitions at
/// level k. Repetition i uses one coordinate sequence for all levels, so the
/// level-k code is the k-prefix of the level-(k+1) code. Repetitions are
/// 0-based. Immutable once built.
class MultiLevelIndex {
 public:
  static MultiLevelIndex build(std::shared_ptr<const PointSet> points, const CollisionModel& model,
                               const IndexOptions& options) {
    if (!points) throw_validation("build_index: null point set");
    if (points->dim() != model.d) throw_validation("build_index: model dimension differs from point set");
    if (options.L < 1) throw_validation("build_index: need L >= 1");
    if (points->size() > 0xffffffffULL) throw_validation("build_index: too many points");

    MultiLevelIndex index;
    index.points_ = std::move(points);
    index.model_ = model;
    index.options_ = options;
    index.init_layout();

    const std::size_t d = index.model_.d;
    for (std::size_t i = 0; i < index.samplers_.size(); ++i) {
      Rng stream(derive_seed(options.seed, i));
      auto& coords = index.samplers_[i].coords;
      coords.resize(index.K_);
      for (auto& c : coords) c = static_cast<std::uint32_t>(stream.uniform(d));
    }
    index.populate();
    return index;
  }

  const PointSet& points() const noexcept { return *points_; }
  std::shared_ptr<const PointSet> shared_points() const noexcept { return points_; }
  const CollisionModel& model() const noexcept { return model_; }
  const IndexOptions& options() const noexcept { return options_; }
  Backend backend() const noexcept { return options_.backend; }
  Schedule schedule() const noexcept { return options_.schedule; }
  std::uint64_t budget() const noexcept { return options_.L; }
  std::size_t max_level() const noexcept { return K_; }
  std::size_t size() const noexcept { return points_->size(); }
  std::size_t repetitions() const noexcept { return samplers_.size(); }
  const Sampler& sampler(std::size_t i) const { return samplers_.at(i); }

  /// Number of repetitions available at level k.
  std::uint64_t tables_at(std::size_t k) const {
    if (k > K_) throw_validation("tables_at: level " + std::to_string(k) + " exceeds K");
    return tables_at_[k];
  }

  /// Level-K code of x under repetition i; mask with level_mask(k) for level k.
  std::uint64_t full_code(std::size_t i, const BitPoint& x) const {
    if (i >= samplers_.size()) throw_validation("full_code: repetition out of range");
    if (x.dim() != model_.d) throw_validation("full_code: dimension mismatch");
    return compute_code(samplers_[i], x, K_);
  }

  HashCode hash_code(std::size_t i, std::size_t k, const BitPoint& x) const {
    if (k > K_) throw_validation("hash_code: level exceeds K");
    return HashCode{static_cast<std::uint32_t>(k), full_code(i, x) & level_mask(k)};
  }

  std::span<const std::uint32_t> bucket_points(std::size_t k, std::size_t i, std::uint64_t code) const {
    check_table(k, i);
    code &= level_mask(k);
    if (options_.backend == Backend::kHash) {
      const auto& table = tables_[k][i];
      const auto* slot = table.buckets.find(code);
      if (slot == nullptr) return {};
      return std::span<const std::uint32_t>(table.ids).subspan(slot->begin, slot->size);
    }
    const auto& rep = tries_[i];
    const auto [begin, count] = detail::trie_range(rep, k, code);
    return std::span<const std::uint32_t>(rep.order).subspan(begin, count);
  }

  std::uint64_t bucket_size(std::size_t k, std::size_t i, std::uint64_t code) const {
    return bucket_points(k, i, code).size();
  }

  /// Point-id references held by the tables.
  std::uint64_t stored_references() const noexcept {
    std::uint64_t total = 0;
    if (options_.backend == Backend::kHash) {
      for (const auto& level : tables_) {
        for (const auto& table : level) total += table.ids.size();
      }
    } else {
      for (const auto& rep : tries_) total += rep.order.size();
    }
    return total;
  }

  void save(std::ostream& os) const {
    using detail::write_pod;
    os.write(detail::kIndexMagic, sizeof(detail::kIndexMagic));
    write_pod(os, detail::kIndexVersion);
    write_pod<std::uint64_t>(os, model_.d);
    write_pod<std::uint64_t>(os, points_->size());
    write_pod<std::uint64_t>(os, K_);
    write_pod<std::uint64_t>(os, options_.L);
    write_pod<std::uint64_t>(os, options_.seed);
    write_pod(os, static_cast<std::uint8_t>(options_.backend));
    write_pod(os, static_cast<std::uint8_t>(options_.schedule));
    write_pod<std::uint64_t>(os, options_.max_probes);
    write_pod<std::uint64_t>(os, model_.r);
    write_pod<std::uint8_t>(os, model_.c ? 1 : 0);
    write_pod<double>(os, model_.c.value_or(0.0));
    write_pod<std::uint64_t>(os, samplers_.size());
    for (auto reps : tables_at_) write_pod<std::uint64_t>(os, reps);
    for (const auto& s : samplers_) {
      for (auto c : s.coords) write_pod(os, c);
    }
    if (options_.backend == Backend::kHash) {
      for (std::size_t k = 0; k <= K_; ++k) {
        for (std::size_t i = 0; i < tables_[k].size(); ++i) {
          const auto& table = tables_[k][i];
          write_pod<std::uint64_t>(os, table.buckets.size());
          // Buckets are contiguous in `ids`; walk them in storage order.
          std::size_t pos = 0;
          while (pos < table.ids.size()) {
            const std::uint64_t code = compute_code(samplers_[i], (*points_)[table.ids[pos]], k);
            const auto* slot = table.buckets.find(code);
            write_pod(os, code);
            write_pod(os, slot->size);
            for (std::uint32_t j = 0; j < slot->size; ++j) write_pod(os, table.ids[pos + j]);
            pos += slot->size;
          }
        }
      }
    } else {
      for (const auto& rep : tries_) {
        for (auto id : rep.order) write_pod(os, id);
      }
    }
    if (!os) throw_io("index write failed");
  }

  /// Reads an index written by save(); `points` must be the set it was built on.
  static MultiLevelIndex load(std::istream& is, std::shared_ptr<const PointSet> points) {
    using detail::read_pod;
    char magic[sizeof(detail::kIndexMagic)];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, detail::kIndexMagic, sizeof(magic)) != 0) {
      throw_validation("not an adalsh index file");
    }
    if (read_pod<std::uint32_t>(is) != detail::kIndexVersion) throw_validation("unsupported index version");
    const auto d = read_pod<std::uint64_t>(is);
    const auto n = read_pod<std::uint64_t>(is);
    if (!points || points->dim() != d || points->size() != n) {
      throw_validation("index file does not match the point set (d/n differ)");
    }
    MultiLevelIndex index;
    index.points_ = std::move(points);
    const auto K = read_pod<std::uint64_t>(is);
    index.options_.L = read_pod<std::uint64_t>(is);
    index.options_.seed = read_pod<std::uint64_t>(is);
    const auto backend = read_pod<std::uint8_t>(is);
    const auto schedule = read_pod<std::uint8_t>(is);
    if (backend > 1 || schedule > 2) throw_validation("index file: bad backend or schedule tag");
    index.options_.backend = static_cast<Backend>(backend);
    index.options_.schedule = static_cast<Schedule>(schedule);
    index.options_.max_probes = read_pod<std::uint64_t>(is);
    const auto r = read_pod<std::uint64_t>(is);
    const auto has_c = read_pod<std::uint8_t>(is);
    const auto c = read_pod<double>(is);
    index.model_ = CollisionModel::make(d, r, has_c ? std::optional<double>(c) : std::nullopt);
    index.init_layout();
    if (index.K_ != K) throw_validation("index file: level count inconsistent with budget");
    if (read_pod<std::uint64_t>(is) != index.samplers_.size()) {
      throw_validation("index file: repetition count inconsistent with schedule");
    }
    for (auto expected : index.tables_at_) {
      if (read_pod<std::uint64_t>(is) != expected) throw_validation("index file: table counts inconsistent");
    }
    for (auto& s : index.samplers_) {
      s.coords.resize(K);
      for (auto& c_idx : s.coords) {
        c_idx = read_pod<std::uint32_t>(is);
        if (c_idx >= d) throw_validation("index file: sampler coordinate out of range");
      }
    }
    if (index.options_.backend == Backend::kHash) {
      index.tables_.assign(K + 1, {});
      for (std::size_t k = 0; k <= K; ++k) {
        index.tables_[k].resize(index.tables_at_[k]);
        for (auto& table : index.tables_[k]) {
          const auto buckets = read_pod<std::uint64_t>(is);
          if (buckets > n) throw_validation("index file: bucket count exceeds n");
          table.buckets.reserve(buckets);
          table.ids.reserve(n);
          for (std::uint64_t b = 0; b < buckets; ++b) {
            const auto code = read_pod<std::uint64_t>(is);
            const auto size = read_pod<std::uint32_t>(is);
            if (size == 0 || table.ids.size() + size > n) throw_validation("index file: bad bucket size");
            table.buckets.insert(code, static_cast<std::uint32_t>(table.ids.size()), size);
            for (std::uint32_t j = 0; j < size; ++j) {
              const auto id = read_pod<std::uint32_t>(is);
              if (id >= n) throw_validation("index file: point id out of range");
              table.ids.push_back(id);
            }
          }
          if (table.ids.size() != n) throw_validation("index file: table does not cover every point");
        }
      }
    } else {
      index.tries_.resize(index.samplers_.size());
      for (std::size_t i = 0; i < index.tries_.size(); ++i) {
        auto& rep = index.tries_[i];
        rep.order.resize(n);
        rep.codes.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
          rep.order[j] = read_pod<std::uint32_t>(is);
          if (rep.order[j] >= n) throw_validation("index file: point id out of range");
          rep.codes[j] = compute_code(index.samplers_[i], (*index.points_)[rep.order[j]], K);
        }
        for (std::size_t j = 1; j < n; ++j) {
          if (detail::reverse_bits(rep.codes[j - 1]) > detail::reverse_bits(rep.codes[j])) {
            throw_validation("index file: trie array not sorted");
          }
        }
        detail::build_trie(rep, K);
      }
    }
    return index;
  }

 private:
  MultiLevelIndex() = default;

  static std::uint64_t compute_code(const Sampler& s, const BitPoint& x, std::size_t k) noexcept {
    std::uint64_t code = 0;
    for (std::size_t j = 0; j < k; ++j) code |= static_cast<std::uint64_t>(x.test(s.coords[j])) << j;
    return code;
  }

  void check_table(std::size_t k, std::size_t i) const {
    if (k > K_) throw_validation("bucket lookup: level " + std::to_string(k) + " exceeds K");
    if (i >= tables_at_[k]) {
      throw_validation("bucket lookup: repetition " + std::to_string(i) + " not built at level " +
                       std::to_string(k));
    }
  }

  void init_layout() {
    K_ = max_level_for_budget(options_.L, model_.p1);
    tables_at_.assign(K_ + 1, 1);
    std::uint64_t most = 1;
    for (std::size_t k = 1; k <= K_; ++k) {
      tables_at_[k] = std::min(options_.L, scheduled_reps(options_.schedule, k, model_.p1, options_.max_probes));
      most = std::max(most, tables_at_[k]);
    }
    samplers_.assign(most, Sampler{});
  }

  void populate() {
    const std::size_t n = points_->size();
    std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed(n);
    std::vector<std::uint64_t> codes(n);

    if (options_.backend == Backend::kHash) {
      tables_.assign(K_ + 1, {});
      tables_[0].resize(1);
      auto& root = tables_[0][0];
      root.ids.resize(n);
      std::iota(root.ids.begin(), root.ids.end(), 0U);
      root.buckets.reserve(1);
      root.buckets.insert(0, 0, static_cast<std::uint32_t>(n));
      for (std::size_t k = 1; k <= K_; ++k) tables_[k].resize(tables_at_[k]);
    } else {
      tries_.resize(samplers_.size());
    }

    for (std::size_t i = 0; i < samplers_.size(); ++i) {
      for (std::uint32_t id = 0; id < n; ++id) {
        codes[id] = compute_code(samplers_[i], (*points_)[id], K_);
        keyed[id] = {detail::reverse_bits(codes[id]), id};
      }
      std::sort(keyed.begin(), keyed.end());

      if (options_.backend == Backend::kTrie) {
        auto& rep = tries_[i];
        rep.order.resize(n);
        rep.codes.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
          rep.order[j] = keyed[j].second;
          rep.codes[j] = codes[keyed[j].second];
        }
        detail::build_trie(rep, K_);
        continue;
      }

      for (std::size_t k = 1; k <= K_; ++k) {
        if (i >= tables_at_[k]) continue;
        auto& table = tables_[k][i];
        const std::uint64_t mask = level_mask(k);
        table.ids.resize(n);
        std::size_t distinct = 0;
        for (std::size_t j = 0; j < n; ++j) {
          table.ids[j] = keyed[j].second;
          if (j == 0 || ((codes[keyed[j].second] ^ codes[keyed[j - 1].second]) & mask) != 0) ++distinct;
        }
        table.buckets.reserve(distinct);
        std::size_t begin = 0;
        for (std::size_t j = 1; j <= n; ++j) {
          if (j == n || ((codes[keyed[j].second] ^ codes[keyed[begin].second]) & mask) != 0) {
            table.buckets.insert(codes[keyed[begin].second] & mask, static_cast<std::uint32_t>(begin),
                                 static_cast<std::uint32_t>(j - begin));
            begin = j;
          }
        }
      }
    }
  }

  std::shared_ptr<const PointSet> points_;
  CollisionModel model_;
  IndexOptions options_;
  std::size_t K_ = 0;
  std::vector<std::uint64_t> tables_at_;
  std::vector<Sampler> samplers_;
  std::vector<std::vector<detail::HashTable>> tables_;
  std::vector<detail::TrieRepetition> tries_;
};

inline MultiLevelIndex build_index(std::shared_ptr<const PointSet> points, const CollisionModel& model,
                                   const IndexOptions& options) {
  return MultiLevelIndex::build(std::move(points), model, options);
}

}  // namespace adalsh
