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
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "adalsh/analysis.hpp"
#include "adalsh/collision.hpp"
#include "adalsh/error.hpp"
#include "adalsh/generators.hpp"
#include "adalsh/index.hpp"
#include "adalsh/query.hpp"

namespace adalsh {

struct BenchConfig {
  std::string family = "t-heavy";  // t-heavy | gap | uniform | growth
  std::size_t n = 1024;
  std::size_t d = 256;
  std::size_t r = 51;
  double c = 2.0;
  double growth_exp = 2.0;
  std::vector<std::size_t> t_grid = {16};
  std::vector<Engine> engines = {Engine::kSingle};
  std::size_t builds = 100;
  std::uint64_t max_probes = 4096;
  std::uint64_t L = 0;  // 0: sized so the standard LSH level exists
  Backend backend = Backend::kHash;
  std::uint64_t seed = 1;

  void validate() const {
    if (family != "t-heavy" && family != "gap" && family != "uniform" && family != "growth") {
      throw_validation("unknown instance family '" + family + "'");
    }
    if (builds < 1) throw_validation("builds per point must be >= 1");
    if (t_grid.empty()) throw_validation("t grid is empty");
    for (auto t : t_grid) {
      if (t > n) throw_validation("t grid value " + std::to_string(t) + " exceeds n");
    }
    if (engines.empty()) throw_validation("no engines selected");
    if (max_probes < 1) throw_validation("max probes must be >= 1");
  }
};

inline Instance make_instance(const BenchConfig& cfg, std::size_t t, std::uint64_t seed) {
  if (cfg.family == "t-heavy") return gen_t_heavy(cfg.n, t, cfg.d, cfg.r, cfg.c, seed);
  if (cfg.family == "gap") return gen_gap_instance(cfg.n, t, cfg.d, cfg.r, cfg.c, seed);
  if (cfg.family == "uniform") return gen_uniform_instance(cfg.n, cfg.d, cfg.r, seed);
  if (cfg.family == "growth") return gen_growth_restricted(cfg.n, cfg.d, cfg.growth_exp, cfg.r, seed);
  throw_validation("unknown instance family '" + cfg.family + "'");
}

/// Budget used when none is given: enough tables for the standard LSH level.
inline std::uint64_t auto_budget(std::size_t n, const CollisionModel& model) {
  if (!model.p2 || n < 2) return reps_single(1, model.p1);
  return std::max<std::uint64_t>(1, reps_single(standard_lsh_params(n, model.p1, *model.p2).k, model.p1));
}

inline std::uint64_t instance_seed(std::uint64_t root, std::size_t t) { return derive_seed(root, t); }
inline std::uint64_t build_seed(std::uint64_t root, std::size_t t, std::size_t build) {
  return derive_seed(derive_seed(root, t), 0x100000000ULL + build);
}

/// Index options a bench run uses for one build.
inline IndexOptions bench_index_options(const BenchConfig& cfg, const CollisionModel& model, std::size_t t,
                                        std::size_t build) {
  IndexOptions opt;
  opt.L = cfg.L != 0 ? cfg.L : auto_budget(cfg.n, model);
  opt.backend = cfg.backend;
  opt.schedule = std::find(cfg.engines.begin(), cfg.engines.end(), Engine::kMulti) != cfg.engines.end()
                     ? Schedule::kMulti
                     : Schedule::kSingle;
  opt.max_probes = cfg.max_probes;
  opt.seed = build_seed(cfg.seed, t, build);
  return opt;
}

struct SweepRow {
  std::string family;
  std::size_t n = 0;
  std::size_t t = 0;
  Engine engine = Engine::kScan;
  std::size_t builds = 0;
  double median_w_best = 0.0;
  double mean_candidates = 0.0;
  double recall = 0.0;
  std::size_t k_best_mode = 0;
  std::uint64_t ell_best_mode = 1;
  double w_single = 0.0;
  double w_multi = 0.0;
  double ref_static = 0.0;      // t (n/t)^rho
  double ref_naive = 0.0;       // t n^rho
  double ref_linear = 0.0;      // n
  double ref_multiprobe = 0.0;  // n^{rho(r,c)} with tau = ln t / ln n
  std::uint64_t seed = 0;
  double wall_time_ms = 0.0;
  std::string error;
};

inline double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

template <typename T>
T mode(const std::vector<T>& values) {
  std::map<T, std::size_t> freq;
  for (const auto& v : values) ++freq[v];
  T best{};
  std::size_t best_count = 0;
  for (const auto& [v, count] : freq) {
    if (count > best_count) {
      best = v;
      best_count = count;
    }
  }
  return best;
}

inline double recall_of(const std::vector<std::uint32_t>& found, const std::vector<std::uint32_t>& truth) {
  if (truth.empty()) return 1.0;
  std::size_t hit = 0;
  for (auto id : truth) hit += std::binary_search(found.begin(), found.end(), id) ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(truth.size());
}

namespace detail {

struct Reference {
  double w_single = std::numeric_limits<double>::quiet_NaN();
  double w_multi = std::numeric_limits<double>::quiet_NaN();
  double ref_static = std::numeric_limits<double>::quiet_NaN();
  double ref_naive = std::numeric_limits<double>::quiet_NaN();
  double ref_linear = std::numeric_limits<double>::quiet_NaN();
  double ref_multiprobe = std::numeric_limits<double>::quiet_NaN();
};

inline Reference reference_curves(const BenchConfig& cfg, const Instance& inst, const CollisionModel& model,
                                  std::size_t K, std::size_t t) {
  Reference ref;
  const auto hist = distance_histogram(inst.query, inst.set);
  const auto profile = work_profile(hist, model.p1, K, cfg.max_probes, false);
  ref.w_single = profile.single.value;
  ref.w_multi = profile.multi.value;
  const double n = static_cast<double>(cfg.n);
  ref.ref_linear = n;
  if (model.p2) {
    const double rh = rho(model.p1, *model.p2);
    const double tt = static_cast<double>(std::max<std::size_t>(t, 1));
    ref.ref_static = tt * std::pow(n / tt, rh);
    ref.ref_naive = tt * std::pow(n, rh);
    if (t >= 1 && t < cfg.n && cfg.n >= 2) {
      ref.ref_multiprobe = std::pow(n, exponent_params(model.p1, *model.p2, cfg.n, t).multiprobe);
    }
  }
  return ref;
}

}  // namespace detail

/// For each t and engine: fresh index builds, one query per build, medians
/// and means over builds, plus analytic reference curves.
inline std::vector<SweepRow> run_sweep(const BenchConfig& cfg) {
  cfg.validate();
  std::vector<SweepRow> rows;
  for (auto t : cfg.t_grid) {
    const std::uint64_t seed = instance_seed(cfg.seed, t);
    std::vector<SweepRow> block(cfg.engines.size());
    for (std::size_t e = 0; e < cfg.engines.size(); ++e) {
      block[e].family = cfg.family;
      block[e].n = cfg.n;
      block[e].t = t;
      block[e].engine = cfg.engines[e];
      block[e].seed = seed;
    }
    try {
      const Instance inst = make_instance(cfg, t, seed);
      auto points = std::make_shared<const PointSet>(inst.set);
      const auto model = CollisionModel::make(cfg.d, inst.r, cfg.c);
      const auto truth = linear_scan(inst.set, inst.query, inst.r);

      std::vector<std::vector<double>> w(cfg.engines.size()), cand(cfg.engines.size()), rec(cfg.engines.size());
      std::vector<std::vector<std::size_t>> kb(cfg.engines.size());
      std::vector<std::vector<std::uint64_t>> lb(cfg.engines.size());
      std::vector<double> wall(cfg.engines.size(), 0.0);
      std::size_t K = 0;
      const EngineParams params{std::max<std::size_t>(t, 1), cfg.c, cfg.max_probes};
      for (std::size_t b = 0; b < cfg.builds; ++b) {
        const auto index = build_index(points, model, bench_index_options(cfg, model, t, b));
        K = index.max_level();
        for (std::size_t e = 0; e < cfg.engines.size(); ++e) {
          const auto start = std::chrono::steady_clock::now();
          const auto report = run_engine(cfg.engines[e], index, inst.query, inst.r, params);
          wall[e] += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
          w[e].push_back(static_cast<double>(report.w_best));
          cand[e].push_back(static_cast<double>(report.candidates_retrieved));
          rec[e].push_back(recall_of(report.ids, truth));
          kb[e].push_back(report.k_best);
          lb[e].push_back(report.ell_best);
        }
      }
      const auto ref = detail::reference_curves(cfg, inst, model, K, t);
      for (std::size_t e = 0; e < cfg.engines.size(); ++e) {
        auto& row = block[e];
        row.builds = cfg.builds;
        row.median_w_best = median(w[e]);
        double sum = 0.0;
        for (auto v : cand[e]) sum += v;
        row.mean_candidates = sum / static_cast<double>(cfg.builds);
        sum = 0.0;
        for (auto v : rec[e]) sum += v;
        row.recall = sum / static_cast<double>(cfg.builds);
        row.k_best_mode = mode(kb[e]);
        row.ell_best_mode = mode(lb[e]);
        row.w_single = ref.w_single;
        row.w_multi = ref.w_multi;
        row.ref_static = ref.ref_static;
        row.ref_naive = ref.ref_naive;
        row.ref_linear = ref.ref_linear;
        row.ref_multiprobe = ref.ref_multiprobe;
        row.wall_time_ms = wall[e];
      }
    } catch (const Error& err) {
      for (auto& row : block) {
        row.error = err.what();
        row.median_w_best = row.mean_candidates = row.recall = std::numeric_limits<double>::quiet_NaN();
        row.w_single = row.w_multi = row.ref_static = row.ref_naive = row.ref_linear = row.ref_multiprobe =
            std::numeric_limits<double>::quiet_NaN();
      }
    }
    rows.insert(rows.end(), block.begin(), block.end());
  }
  return rows;
}

struct PointRecall {
  std::size_t t = 0;
  Engine engine = Engine::kScan;
  std::uint32_t id = 0;
  std::size_t distance = 0;
  double recall = 0.0;
};

struct RecallRow {
  std::string family;
  std::size_t n = 0;
  std::size_t t = 0;
  Engine engine = Engine::kScan;
  std::size_t builds = 0;
  std::size_t close_points = 0;
  double min_recall = 0.0;
  double mean_recall = 0.0;
  std::uint64_t seed = 0;
  std::string error;
};

struct RecallResult {
  std::vector<RecallRow> rows;
  std::vector<PointRecall> points;
};

/// Per close point, the fraction of independent builds whose query reports it.
inline RecallResult measure_recall(const BenchConfig& cfg) {
  cfg.validate();
  RecallResult result;
  for (auto t : cfg.t_grid) {
    const std::uint64_t seed = instance_seed(cfg.seed, t);
    std::vector<RecallRow> block(cfg.engines.size());
    for (std::size_t e = 0; e < cfg.engines.size(); ++e) {
      block[e] = RecallRow{cfg.family, cfg.n, t, cfg.engines[e], cfg.builds, 0, 0.0, 0.0, seed, {}};
    }
    try {
      const Instance inst = make_instance(cfg, t, seed);
      auto points = std::make_shared<const PointSet>(inst.set);
      const auto model = CollisionModel::make(cfg.d, inst.r, cfg.c);
      const auto truth = linear_scan(inst.set, inst.query, inst.r);
      std::vector<std::vector<std::size_t>> hits(cfg.engines.size(), std::vector<std::size_t>(truth.size(), 0));
      const EngineParams params{std::max<std::size_t>(t, 1), cfg.c, cfg.max_probes};
      for (std::size_t b = 0; b < cfg.builds; ++b) {
        const auto index = build_index(points, model, bench_index_options(cfg, model, t, b));
        for (std::size_t e = 0; e < cfg.engines.size(); ++e) {
          const auto report = run_engine(cfg.engines[e], index, inst.query, inst.r, params);
          for (std::size_t j = 0; j < truth.size(); ++j) {
            if (std::binary_search(report.ids.begin(), report.ids.end(), truth[j])) ++hits[e][j];
          }
        }
      }
      for (std::size_t e = 0; e < cfg.engines.size(); ++e) {
        auto& row = block[e];
        row.close_points = truth.size();
        double lowest = 1.0;
        double sum = 0.0;
        for (std::size_t j = 0; j < truth.size(); ++j) {
          const double rate = static_cast<double>(hits[e][j]) / static_cast<double>(cfg.builds);
          lowest = std::min(lowest, rate);
          sum += rate;
          result.points.push_back(
              PointRecall{t, cfg.engines[e], truth[j], hamming_distance(inst.query, inst.set[truth[j]]), rate});
        }
        row.min_recall = truth.empty() ? 1.0 : lowest;
        row.mean_recall = truth.empty() ? 1.0 : sum / static_cast<double>(truth.size());
      }
    } catch (const Error& err) {
      for (auto& row : block) {
        row.error = err.what();
        row.min_recall = row.mean_recall = std::numeric_limits<double>::quiet_NaN();
      }
    }
    result.rows.insert(result.rows.end(), block.begin(), block.end());
  }
  return result;
}

// CSV output. Numbers use %.10g; NaN prints as "nan". Text cells are quoted
// only when they contain a comma or quote.

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

inline std::string csv_text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + "\"";
}

inline constexpr const char* kSweepHeader =
    "family,n,t,engine,builds,median_w_best,mean_candidates,recall,k_best_mode,ell_best_mode,"
    "w_single,w_multi,ref_static,ref_naive,ref_linear,ref_multiprobe,seed,wall_time_ms,error";

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kSweepHeader << "\n";
  for (const auto& r : rows) {
    os << csv_text(r.family) << ',' << r.n << ',' << r.t << ',' << engine_name(r.engine) << ',' << r.builds
       << ',' << format_number(r.median_w_best) << ',' << format_number(r.mean_candidates) << ','
       << format_number(r.recall) << ',' << r.k_best_mode << ',' << r.ell_best_mode << ','
       << format_number(r.w_single) << ',' << format_number(r.w_multi) << ',' << format_number(r.ref_static)
       << ',' << format_number(r.ref_naive) << ',' << format_number(r.ref_linear) << ','
       << format_number(r.ref_multiprobe) << ',' << r.seed << ',' << format_number(r.wall_time_ms) << ','
       << csv_text(r.error) << "\n";
  }
}

inline constexpr const char* kRecallHeader =
    "family,n,t,engine,builds,close_points,min_recall,mean_recall,seed,error";

inline void write_recall_csv(std::ostream& os, const std::vector<RecallRow>& rows) {
  os << kRecallHeader << "\n";
  for (const auto& r : rows) {
    os << csv_text(r.family) << ',' << r.n << ',' << r.t << ',' << engine_name(r.engine) << ',' << r.builds
       << ',' << r.close_points << ',' << format_number(r.min_recall) << ',' << format_number(r.mean_recall)
       << ',' << r.seed << ',' << csv_text(r.error) << "\n";
  }
}

inline constexpr const char* kPointRecallHeader = "t,engine,id,distance,recall";

inline void write_point_recall_csv(std::ostream& os, const std::vector<PointRecall>& rows) {
  os << kPointRecallHeader << "\n";
  for (const auto& r : rows) {
    os << r.t << ',' << engine_name(r.engine) << ',' << r.id << ',' << r.distance << ','
       << format_number(r.recall) << "\n";
  }
}

}  // namespace adalsh
