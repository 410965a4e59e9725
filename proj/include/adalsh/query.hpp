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
#include <queue>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "adalsh/collision.hpp"
#include "adalsh/error.hpp"
#include "adalsh/hamming.hpp"
#include "adalsh/index.hpp"
#include "adalsh/probing.hpp"

namespace adalsh {

enum class Engine { kScan, kNaive, kStatic, kSingle, kMulti };

inline std::string_view engine_name(Engine e) noexcept {
  switch (e) {
    case Engine::kScan: return "scan";
    case Engine::kNaive: return "naive";
    case Engine::kStatic: return "static";
    case Engine::kSingle: return "single";
    case Engine::kMulti: return "multi";
  }
  return "?";
}

inline Engine parse_engine(std::string_view name) {
  for (auto e : {Engine::kScan, Engine::kNaive, Engine::kStatic, Engine::kSingle, Engine::kMulti}) {
    if (engine_name(e) == name) return e;
  }
  throw_validation("unknown engine '" + std::string(name) + "'");
}

/// One (k, ell) cell evaluated by the multi-probe search.
struct CellTrace {
  std::size_t k = 0;
  std::uint64_t ell = 0;
  std::uint64_t reps = 0;
  std::uint64_t cost = 0;         // ell * reps_multi(k, ell), the queue priority
  std::uint64_t work = 0;         // maintained W_{k,ell}
  std::uint64_t best_before = 0;  // W_best when the cell was extracted
};

struct QueryReport {
  Engine engine = Engine::kScan;
  std::vector<std::uint32_t> ids;  // sorted, unique, all within r

  std::uint64_t buckets_probed = 0;         // every bucket lookup
  std::uint64_t loop_bucket_reads = 0;      // lookups spent choosing parameters
  std::uint64_t candidates_retrieved = 0;   // ids read at output, with multiplicity
  std::uint64_t distance_computations = 0;  // distinct candidates checked

  std::size_t k_best = 0;
  std::uint64_t ell_best = 1;
  std::uint64_t reps_used = 1;
  std::uint64_t w_best = 0;  // sum over the output cell of (1 + bucket size)

  std::size_t last_level = 0;  // last level examined by the parameter search
  std::uint64_t skipped_cells = 0;
  std::vector<std::size_t> exhausted_levels;
  std::vector<CellTrace> trace;
};

/// Ground truth: ids of every point within distance r of q.
inline std::vector<std::uint32_t> linear_scan(const PointSet& set, const BitPoint& q, std::size_t r) {
  if (q.dim() != set.dim()) throw_validation("linear_scan: dimension mismatch");
  std::vector<std::uint32_t> out;
  for (std::uint32_t id = 0; id < set.size(); ++id) {
    if (hamming_distance(q, set[id]) <= r) out.push_back(id);
  }
  return out;
}

inline QueryReport scan_query(const PointSet& set, const BitPoint& q, std::size_t r) {
  QueryReport report;
  report.engine = Engine::kScan;
  report.ids = linear_scan(set, q, r);
  report.buckets_probed = 1;
  report.candidates_retrieved = set.size();
  report.distance_computations = set.size();
  report.w_best = set.size() + 1;
  return report;
}

namespace detail {

/// Per-query cache of the query's full code under each repetition.
class QueryCodes {
 public:
  QueryCodes(const MultiLevelIndex& index, const BitPoint& q)
      : index_(index), q_(q), codes_(index.repetitions(), 0), known_(index.repetitions(), false) {}

  std::uint64_t at(std::size_t i, std::size_t k) {
    if (!known_[i]) {
      codes_[i] = index_.full_code(i, q_);
      known_[i] = true;
    }
    return codes_[i] & level_mask(k);
  }

 private:
  const MultiLevelIndex& index_;
  const BitPoint& q_;
  std::vector<std::uint64_t> codes_;
  std::vector<bool> known_;
};

/// Reads every bucket of the cell (k, reps, masks), then filters and dedupes.
inline void emit_cell(const MultiLevelIndex& index, QueryCodes& codes, const BitPoint& q, std::size_t r,
                      std::size_t k, std::uint64_t reps, std::span<const std::uint64_t> masks,
                      QueryReport& report) {
  std::vector<std::uint32_t> candidates;
  for (std::size_t i = 0; i < reps; ++i) {
    const std::uint64_t base = codes.at(i, k);
    for (auto mask : masks) {
      const auto bucket = index.bucket_points(k, i, base ^ mask);
      ++report.buckets_probed;
      report.candidates_retrieved += bucket.size();
      candidates.insert(candidates.end(), bucket.begin(), bucket.end());
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  report.distance_computations = candidates.size();
  const auto& set = index.points();
  for (auto id : candidates) {
    if (hamming_distance(q, set[id]) <= r) report.ids.push_back(id);
  }
  report.k_best = k;
  report.ell_best = masks.size();
  report.reps_used = reps;
  report.w_best = reps * masks.size() + report.candidates_retrieved;
}

inline void check_query(const MultiLevelIndex& index, const BitPoint& q) {
  if (q.dim() != index.model().d) throw_validation("query: dimension mismatch");
}

constexpr std::uint64_t kIdentityMask[1] = {0};

}  // namespace detail

/// Standard LSH: one level k = ceil(ln n / ln(1/p2)) (capped at K) probed in
/// ceil(3 p1^-k) repetitions (capped by the tables built at that level).
inline QueryReport naive_lsh_query(const MultiLevelIndex& index, const BitPoint& q, std::size_t r) {
  detail::check_query(index, q);
  const auto& model = index.model();
  if (!model.p2) throw_validation("naive query: collision model has no far radius (c)");
  const std::size_t n = index.size();
  std::size_t k = n > 1 ? standard_lsh_params(n, model.p1, *model.p2).k : 0;
  k = std::min(k, index.max_level());
  const std::uint64_t standard_reps =
      k == 0 ? 1 : static_cast<std::uint64_t>(stable_ceil(3.0 * std::pow(model.p1, -static_cast<double>(k))));
  const std::uint64_t reps = std::min(standard_reps, index.tables_at(k));

  QueryReport report;
  report.engine = Engine::kNaive;
  detail::QueryCodes codes(index, q);
  detail::emit_cell(index, codes, q, r, k, reps, detail::kIdentityMask, report);
  report.last_level = k;
  return report;
}

/// Level query for known output size t and far factor c:
/// k = ceil(ln(n/t) / ln(1/p2)) with ceil(p1^-k) repetitions.
inline QueryReport static_query(const MultiLevelIndex& index, const BitPoint& q, std::size_t r,
                                std::size_t t, double c) {
  detail::check_query(index, q);
  const std::size_t n = index.size();
  const std::size_t d = index.model().d;
  if (t < 1 || t > n) throw_validation("static query: need 1 <= t <= n");
  if (!(c >= 1.0)) throw_validation("static query: need c >= 1");
  if (r >= d || !(c * static_cast<double>(r) < static_cast<double>(d))) {
    throw_validation("static query: need c r < d");
  }
  const double p1 = 1.0 - static_cast<double>(r) / static_cast<double>(d);
  const double p2 = 1.0 - c * static_cast<double>(r) / static_cast<double>(d);
  const std::size_t k = t == n ? 0
                               : static_cast<std::size_t>(stable_ceil(
                                     std::log(static_cast<double>(n) / static_cast<double>(t)) /
                                     std::log(1.0 / p2)));
  if (k > index.max_level()) {
    throw_infeasible("static query: level " + std::to_string(k) + " exceeds K = " +
                     std::to_string(index.max_level()) + " (repetition budget too small)");
  }
  const std::uint64_t reps = reps_plain(k, p1);
  if (reps > index.tables_at(k)) {
    throw_infeasible("static query: level " + std::to_string(k) + " needs " + std::to_string(reps) +
                     " tables, index has " + std::to_string(index.tables_at(k)));
  }
  QueryReport report;
  report.engine = Engine::kStatic;
  detail::QueryCodes codes(index, q);
  detail::emit_cell(index, codes, q, r, k, reps, detail::kIdentityMask, report);
  report.last_level = k;
  return report;
}

/// Adaptive single-probe query. Scans levels 1, 2, ... summing stored bucket
/// sizes over reps_single(k) tables, keeps the cheapest level, and stops once
/// reps_single(k) alone exceeds min(L, best work). Level 0 (w = n + 1) is the
/// starting candidate.
inline QueryReport adaptive_single(const MultiLevelIndex& index, const BitPoint& q, std::size_t r) {
  detail::check_query(index, q);
  if (index.schedule() == Schedule::kPlain) {
    throw_validation("adaptive single-probe query needs an index built with the single or multi schedule");
  }
  const double p1 = index.model().p1;
  const std::uint64_t L = index.budget();
  const std::size_t K = index.max_level();

  QueryReport report;
  report.engine = Engine::kSingle;
  detail::QueryCodes codes(index, q);

  std::size_t k_best = 0;
  std::uint64_t w_best = index.size() + 1;
  for (std::size_t k = 1; k <= K; ++k) {
    const std::uint64_t reps = reps_single(k, p1);
    if (reps > std::min(L, w_best)) break;
    std::uint64_t w = 0;
    for (std::size_t i = 0; i < reps; ++i) w += 1 + index.bucket_size(k, i, codes.at(i, k));
    report.loop_bucket_reads += reps;
    report.last_level = k;
    if (w < w_best) {
      w_best = w;
      k_best = k;
    }
  }
  report.buckets_probed = report.loop_bucket_reads;
  detail::emit_cell(index, codes, q, r, k_best, reps_single(k_best, p1), detail::kIdentityMask, report);
  return report;
}

/// Adaptive multi-probe query: best-first search over cells (k, ell) ordered
/// by cost ell * reps_multi(k, ell), stopping when the cheapest remaining
/// cost reaches the best work found. Per-level work sums are maintained
/// incrementally as ell grows and the repetition count moves either way.
inline QueryReport adaptive_multi(const MultiLevelIndex& index, const BitPoint& q, std::size_t r,
                                  std::uint64_t max_probes) {
  detail::check_query(index, q);
  if (max_probes < 1) throw_validation("adaptive multi-probe query: max_probes must be >= 1");
  const double p1 = index.model().p1;
  if (!(p1 > 0.5)) throw_validation("adaptive multi-probe query: probing order needs p1 > 1/2");
  const std::size_t K = index.max_level();

  QueryReport report;
  report.engine = Engine::kMulti;
  detail::QueryCodes codes(index, q);

  struct LevelState {
    std::optional<ProbeSequence> sequence;
    std::vector<std::uint64_t> masks;
    std::uint64_t reps = 0;
    std::uint64_t ell = 0;
    std::uint64_t work = 0;
  };
  std::vector<LevelState> levels(K + 1);
  for (std::size_t k = 1; k <= K; ++k) levels[k].sequence.emplace(k, p1);

  auto mask_at = [&](std::size_t k, std::uint64_t j) {  // j is 1-based
    auto& st = levels[k];
    while (st.masks.size() < j) st.masks.push_back(st.sequence->next()->mask);
    return st.masks[j - 1];
  };
  auto read = [&](std::size_t k, std::size_t i, std::uint64_t j) {
    ++report.loop_bucket_reads;
    return 1 + index.bucket_size(k, i, codes.at(i, k) ^ mask_at(k, j));
  };
  auto advance = [&](std::size_t k, std::uint64_t reps, std::uint64_t ell) {
    auto& st = levels[k];
    for (std::uint64_t j = st.ell + 1; j <= ell; ++j) {
      for (std::size_t i = 0; i < st.reps; ++i) st.work += read(k, i, j);
    }
    st.ell = ell;
    for (std::size_t i = st.reps; i < reps; ++i) {
      for (std::uint64_t j = 1; j <= ell; ++j) st.work += read(k, i, j);
    }
    for (std::size_t i = reps; i < st.reps; ++i) {
      for (std::uint64_t j = 1; j <= ell; ++j) st.work -= read(k, i, j);
    }
    st.reps = reps;
    return st.work;
  };

  auto probe_limit = [&](std::size_t k) {
    return k >= 63 ? max_probes : std::min(max_probes, std::uint64_t{1} << k);
  };

  using Entry = std::tuple<std::uint64_t, std::size_t, std::uint64_t>;  // cost, k, ell
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  for (std::size_t k = 1; k <= K; ++k) queue.emplace(reps_multi(k, 1, p1), k, 1);

  std::uint64_t w_best = index.size() + 1;
  std::size_t k_best = 0;
  std::uint64_t ell_best = 1;
  std::uint64_t reps_best = 1;
  while (!queue.empty() && std::get<0>(queue.top()) < w_best) {
    const auto [cost, k, ell] = queue.top();
    queue.pop();
    if (ell + 1 <= probe_limit(k)) {
      queue.emplace((ell + 1) * reps_multi(k, ell + 1, p1), k, ell + 1);
    } else {
      report.exhausted_levels.push_back(k);
    }
    report.last_level = std::max(report.last_level, k);
    const std::uint64_t reps = reps_multi(k, ell, p1);
    if (reps > index.tables_at(k)) {
      ++report.skipped_cells;
      continue;
    }
    const std::uint64_t work = advance(k, reps, ell);
    report.trace.push_back(CellTrace{k, ell, reps, cost, work, w_best});
    if (work < w_best) {
      w_best = work;
      k_best = k;
      ell_best = ell;
      reps_best = reps;
    }
  }
  std::sort(report.exhausted_levels.begin(), report.exhausted_levels.end());

  report.buckets_probed = report.loop_bucket_reads;
  std::vector<std::uint64_t> masks(ell_best, 0);
  for (std::uint64_t j = 1; j <= ell_best && k_best > 0; ++j) masks[j - 1] = mask_at(k_best, j);
  detail::emit_cell(index, codes, q, r, k_best, reps_best, masks, report);
  return report;
}

struct EngineParams {
  std::size_t t = 1;
  double c = 2.0;
  std::uint64_t max_probes = 4096;
};

inline QueryReport run_engine(Engine engine, const MultiLevelIndex& index, const BitPoint& q, std::size_t r,
                              const EngineParams& params = {}) {
  switch (engine) {
    case Engine::kScan: return scan_query(index.points(), q, r);
    case Engine::kNaive: return naive_lsh_query(index, q, r);
    case Engine::kStatic: return static_query(index, q, r, params.t, params.c);
    case Engine::kSingle: return adaptive_single(index, q, r);
    case Engine::kMulti: return adaptive_multi(index, q, r, params.max_probes);
  }
  throw_validation("unknown engine");
}

}  // namespace adalsh
