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

// Acceptance checks. One line per criterion; exit status is nonzero when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "adalsh/adalsh.hpp"
#include "adalsh/cli.hpp"

namespace {

using namespace adalsh;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, double a) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), pattern, a);
  return buf;
}

// 1. Every engine returns a duplicate-free subset of the linear scan.
Outcome soundness() {
  struct Case {
    Instance inst;
    Backend backend;
  };
  std::vector<Case> cases;
  cases.push_back({gen_t_heavy(1024, 1, 256, 51, 2.0, 11), Backend::kHash});
  cases.push_back({gen_t_heavy(1024, 8, 256, 51, 2.0, 12), Backend::kTrie});
  cases.push_back({gen_t_heavy(4096, 64, 256, 51, 2.0, 13), Backend::kHash});
  cases.push_back({gen_gap_instance(1024, 4, 256, 32, 2.0, 14), Backend::kTrie});
  cases.push_back({gen_gap_instance(2048, 32, 256, 32, 2.0, 15), Backend::kHash});
  cases.push_back({gen_uniform_instance(2048, 64, 20, 16), Backend::kTrie});
  cases.push_back({gen_uniform_instance(512, 128, 48, 17), Backend::kHash});
  cases.push_back({gen_growth_restricted(1024, 256, 2.0, 12, 18), Backend::kTrie});

  const std::size_t per_case = 125;
  std::size_t queries = 0, checks = 0, static_skipped = 0, nonempty = 0;
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const auto& inst = cases[ci].inst;
    auto points = std::make_shared<const PointSet>(inst.set);
    const auto model = CollisionModel::make(inst.set.dim(), inst.r, 2.0);
    IndexOptions opt;
    opt.L = auto_budget(inst.set.size(), model);
    opt.backend = cases[ci].backend;
    opt.schedule = Schedule::kMulti;
    opt.max_probes = 64;
    opt.seed = derive_seed(1000, ci);
    const auto index = build_index(points, model, opt);

    Rng rng(derive_seed(2000, ci));
    for (std::size_t j = 0; j < per_case; ++j) {
      BitPoint q = j % 2 == 0 ? inst.query : inst.set[rng.uniform(inst.set.size())];
      const std::size_t flips = j == 0 ? 0 : rng.uniform(inst.r + 1);
      for (std::size_t f = 0; f < flips; ++f) q.flip(rng.uniform(q.dim()));
      const auto truth = linear_scan(inst.set, q, inst.r);
      nonempty += truth.empty() ? 0 : 1;
      ++queries;
      for (auto engine : {Engine::kScan, Engine::kNaive, Engine::kStatic, Engine::kSingle, Engine::kMulti}) {
        QueryReport rep;
        try {
          rep = run_engine(engine, index, q, inst.r, EngineParams{std::max<std::size_t>(1, truth.size()), 2.0, 64});
        } catch (const Error& e) {
          if (engine == Engine::kStatic && e.kind() == ErrorKind::kInfeasible) {
            ++static_skipped;
            continue;
          }
          return {false, std::string("engine ") + std::string(engine_name(engine)) + " threw: " + e.what()};
        }
        ++checks;
        if (std::adjacent_find(rep.ids.begin(), rep.ids.end(), std::greater_equal<>()) != rep.ids.end()) {
          return {false, std::string(engine_name(engine)) + " returned unsorted or duplicate ids"};
        }
        if (!std::includes(truth.begin(), truth.end(), rep.ids.begin(), rep.ids.end())) {
          return {false, std::string(engine_name(engine)) + " returned a point outside the range"};
        }
        if (engine == Engine::kScan && rep.ids != truth) return {false, "scan differs from ground truth"};
      }
    }
  }
  return {queries == 1000, std::to_string(queries) + " queries, " + std::to_string(checks) + " engine runs, " +
                               std::to_string(nonempty) + " with non-empty ranges, static infeasible on " +
                               std::to_string(static_skipped)};
}

// 2 and 3. Per-point recall over independent builds on t-heavy instances.
Outcome recall(Engine engine, double floor) {
  BenchConfig cfg;
  cfg.family = "t-heavy";
  cfg.n = 1024;
  cfg.d = 256;
  cfg.r = 51;
  cfg.c = 2.0;
  cfg.t_grid = {1, 4, 16};
  cfg.engines = {engine};
  cfg.builds = 300;
  cfg.max_probes = 64;
  cfg.seed = engine == Engine::kSingle ? 21 : 22;
  const auto result = measure_recall(cfg);
  double lowest = 1.0;
  std::size_t points = 0;
  for (const auto& row : result.rows) {
    if (!row.error.empty()) return {false, "t=" + std::to_string(row.t) + ": " + row.error};
  }
  for (const auto& p : result.points) {
    lowest = std::min(lowest, p.recall);
    ++points;
  }
  return {points > 0 && lowest >= floor,
          "min per-point recall " + fmt("%.4f", lowest) + " over " + std::to_string(points) +
              " close points, t in {1,4,16}, 300 builds (need >= " + fmt("%.2f", floor) + ")"};
}

struct SweepResult {
  std::vector<SweepRow> rows;
  const SweepRow& at(std::size_t t, Engine e) const {
    for (const auto& row : rows) {
      if (row.t == t && row.engine == e) return row;
    }
    throw std::runtime_error("missing sweep row");
  }
};

const SweepResult& t_heavy_sweep() {
  static const SweepResult result = [] {
    BenchConfig cfg;
    cfg.family = "t-heavy";
    cfg.n = 4096;
    cfg.d = 256;
    cfg.r = 51;
    cfg.c = 2.0;
    cfg.t_grid = {4, 16, 64, 256};
    cfg.engines = {Engine::kNaive, Engine::kSingle, Engine::kMulti};
    cfg.builds = 100;
    cfg.max_probes = 64;
    cfg.seed = 41;
    return SweepResult{run_sweep(cfg)};
  }();
  return result;
}

// 4. Realized work tracks W_single up to the log log factor.
Outcome output_sensitivity() {
  const auto& sweep = t_heavy_sweep();
  bool ok = true;
  std::ostringstream detail;
  for (std::size_t t : {4, 16, 64, 256}) {
    const auto& row = sweep.at(t, Engine::kSingle);
    if (!row.error.empty()) return {false, row.error};
    const double bound = 4.0 * row.w_single * (std::log(std::log(row.w_single)) + 2.0);
    ok = ok && row.median_w_best <= bound;
    detail << "t=" << t << ": " << row.median_w_best << "/" << fmt("%.0f", bound) << " ";
  }
  return {ok, "median w_best / bound: " + detail.str()};
}

// 5. Adaptive work falls behind naive LSH work as t grows.
Outcome separation() {
  const auto& sweep = t_heavy_sweep();
  std::vector<double> ratios;
  std::ostringstream detail;
  for (std::size_t t : {4, 16, 64, 256}) {
    const double ratio = sweep.at(t, Engine::kSingle).median_w_best / sweep.at(t, Engine::kNaive).median_w_best;
    ratios.push_back(ratio);
    detail << "t=" << t << ": " << fmt("%.3f", ratio) << " ";
  }
  bool ok = ratios.back() < 0.5;
  for (std::size_t i = 1; i < ratios.size(); ++i) ok = ok && ratios[i] <= ratios[i - 1];
  return {ok, "single/naive median ratio " + detail.str()};
}

// 6. W_multi never exceeds W_single; paired multi runs never do worse.
Outcome multi_dominance() {
  std::size_t histograms = 0;
  Rng rng(61);
  for (std::size_t trial = 0; trial < 300; ++trial) {
    const std::size_t d = 16 + rng.uniform(240);
    DistanceHistogram hist;
    hist.counts.assign(d + 1, 0);
    const std::size_t n = 1 + rng.uniform(5000);
    for (std::size_t i = 0; i < n; ++i) ++hist.counts[rng.uniform(d + 1)];
    const double p1 = 0.55 + 0.44 * rng.uniform_real();
    const std::size_t K = rng.uniform(25);
    const std::uint64_t budget = 1 + rng.uniform(512);
    const auto single = w_single(hist, p1, K);
    const auto multi = w_multi(hist, p1, K, budget);
    if (!(multi.value <= single.value)) return {false, "w_multi > w_single on a random histogram"};
    if (w_multi(hist, p1, K, 1).value != single.value) return {false, "budget 1 does not reproduce w_single"};
    ++histograms;
  }
  const auto& sweep = t_heavy_sweep();
  for (std::size_t t : {4, 16, 64, 256}) {
    const auto& row = sweep.at(t, Engine::kMulti);
    if (!(row.w_multi <= row.w_single)) return {false, "w_multi > w_single on the sweep instance"};
    ++histograms;
  }
  const double m = sweep.at(256, Engine::kMulti).median_w_best;
  const double s = sweep.at(256, Engine::kSingle).median_w_best;
  return {m <= s, std::to_string(histograms) + " histograms ok; t=256 medians multi " + fmt("%.1f", m) +
                      " vs single " + fmt("%.1f", s)};
}

// 7. Exponents.
Outcome exponents() {
  const double r = rho(0.8, 0.6);
  const auto m = multiprobe_exponent(1e-3, 0.8, 0.6);
  const bool ok = std::abs(r - 0.4368) <= 0.001 && std::abs(m.exponent - r) <= 0.01;
  return {ok, "rho(0.8,0.6)=" + fmt("%.6f", r) + ", exponent(1e-3)=" + fmt("%.6f", m.exponent)};
}

// 8. Probing sequence: a distribution, non-increasing, bijective.
Outcome probing() {
  double worst_sum = 0.0;
  for (double p : {0.51, 0.8, 0.9}) {
    for (std::size_t k = 0; k <= 16; ++k) {
      long double sum = 0.0L;  // wide accumulator so the check measures the terms, not the summation
      double prev = 2.0;
      const std::uint64_t total = std::uint64_t{1} << k;
      for (std::uint64_t ell = 1; ell <= total; ++ell) {
        const double pr = probe_prob(k, ell, p);
        if (pr > prev) return {false, "probe probabilities increase at k=" + std::to_string(k)};
        prev = pr;
        sum += pr;
      }
      worst_sum = std::max(worst_sum, static_cast<double>(std::abs(sum - 1.0L)));
    }
  }
  for (std::size_t k = 0; k <= 12; ++k) {
    const std::uint64_t total = std::uint64_t{1} << k;
    for (std::uint64_t base : {std::uint64_t{0}, total - 1, total / 3}) {
      std::vector<char> seen(total, 0);
      for (std::uint64_t ell = 1; ell <= total; ++ell) {
        const auto code = probe_code(HashCode{static_cast<std::uint32_t>(k), base}, ell);
        if (code.bits >= total || seen[code.bits]) return {false, "probe_code not bijective at k=" + std::to_string(k)};
        seen[code.bits] = 1;
      }
    }
  }
  return {worst_sum <= 1e-12, "max |sum - 1| = " + fmt("%.3g", worst_sum) + " for k <= 16, p in {0.51, 0.8, 0.9}; bijective for k <= 12"};
}

// 9. Trie and hash backends agree on every bucket size.
Outcome backend_equivalence() {
  std::size_t lookups = 0;
  for (std::size_t trial = 0; trial < 50; ++trial) {
    Rng rng(derive_seed(90, trial));
    const std::size_t n = 32 + rng.uniform(481);
    const std::size_t d = 32 + rng.uniform(97);
    const std::size_t r = 1 + rng.uniform(d / 4);
    const Instance inst = gen_uniform_instance(n, d, r, derive_seed(91, trial));
    auto points = std::make_shared<const PointSet>(inst.set);
    const auto model = CollisionModel::make(d, r, 2.0);
    IndexOptions opt;
    opt.L = 8 + rng.uniform(40);
    opt.schedule = trial % 2 == 0 ? Schedule::kSingle : Schedule::kPlain;
    opt.seed = derive_seed(92, trial);
    opt.backend = Backend::kHash;
    const auto hashed = build_index(points, model, opt);
    opt.backend = Backend::kTrie;
    const auto trie = build_index(points, model, opt);

    std::vector<BitPoint> queries(inst.set.begin(), inst.set.end());
    queries.push_back(inst.query);
    for (std::size_t j = 0; j < 32; ++j) queries.push_back(random_point(d, rng));
    for (std::size_t k = 0; k <= hashed.max_level(); ++k) {
      for (std::size_t i = 0; i < hashed.tables_at(k); ++i) {
        for (const auto& q : queries) {
          const auto code = hashed.hash_code(i, k, q).bits;
          ++lookups;
          if (hashed.bucket_size(k, i, code) != trie.bucket_size(k, i, code)) {
            return {false, "bucket sizes differ at trial " + std::to_string(trial)};
          }
        }
        if (k <= 8) {
          for (std::uint64_t code = 0; code < (std::uint64_t{1} << k); ++code) {
            ++lookups;
            if (hashed.bucket_size(k, i, code) != trie.bucket_size(k, i, code)) {
              return {false, "bucket sizes differ on an empty-code probe"};
            }
          }
        }
      }
    }
  }
  return {true, "50 instances, " + std::to_string(lookups) + " bucket-size lookups identical"};
}

// 10. Static query on gap instances.
Outcome gap_corollary() {
  const std::size_t n = 4096, d = 256, r = 32;
  const double c = 2.0;
  const auto model = CollisionModel::make(d, r, c);
  const double rh = rho(model.p1, *model.p2);
  const std::size_t standard_k = standard_lsh_params(n, model.p1, *model.p2).k;
  bool ok = true;
  std::ostringstream detail;
  for (std::size_t t : {8, 16, 32, 64, 128}) {
    const Instance inst = gen_gap_instance(n, t, d, r, c, derive_seed(100, t));
    auto points = std::make_shared<const PointSet>(inst.set);
    const std::size_t k = gap_k(n, t, d, r, c);
    std::vector<double> candidates;
    for (std::size_t b = 0; b < 30; ++b) {
      IndexOptions opt;
      opt.L = auto_budget(n, model);
      opt.schedule = Schedule::kPlain;
      opt.seed = derive_seed(derive_seed(101, t), b);
      const auto index = build_index(points, model, opt);
      const auto rep = static_query(index, inst.query, r, t, c);
      if (rep.k_best != k) return {false, "static_query level differs from gap_k"};
      candidates.push_back(static_cast<double>(rep.candidates_retrieved));
    }
    const double med = median(candidates);
    const double bound = 8.0 * static_cast<double>(t) * std::pow(static_cast<double>(n) / t, rh);
    ok = ok && med <= bound && k <= standard_k;
    detail << "t=" << t << " k=" << k << ": " << med << "/" << fmt("%.0f", bound) << " ";
  }
  return {ok, "median candidates / bound, standard k=" + std::to_string(standard_k) + ": " + detail.str()};
}

// 11. Prefix-sum lemma, checked in exact integer arithmetic.
Outcome prefix_lemma() {
  Rng rng(111);
  std::size_t sequences = 0;
  for (; sequences < 10000; ++sequences) {
    const std::size_t len = 2 + rng.uniform(63);
    std::vector<std::uint64_t> x(len);
    for (auto& v : x) v = rng.uniform(1000001);
    std::sort(x.begin(), x.end(), std::greater<>());
    if (x[0] == 0) x[0] = 1;
    std::vector<std::uint64_t> X(len + 1, 0);  // X[m] = x_1 + ... + x_m
    for (std::size_t m = 1; m <= len; ++m) X[m] = X[m - 1] + x[m - 1];
    for (std::size_t m = 1; m < len; ++m) {
      // m / X_m <= (m+1) / X_{m+1}
      if (static_cast<uint128_t>(m) * X[m + 1] > static_cast<uint128_t>(m + 1) * X[m]) {
        return {false, "first inequality fails"};
      }
    }
    for (std::size_t m = 1; m <= len; ++m) {
      // sum_{j<=m} 1/X_j <= H_m m / X_m, via the termwise bound j X_m <= m X_j
      for (std::size_t j = 1; j <= m; ++j) {
        if (static_cast<uint128_t>(j) * X[m] > static_cast<uint128_t>(m) * X[j]) {
          return {false, "second inequality fails"};
        }
      }
      long double lhs = 0.0L, harmonic = 0.0L;
      for (std::size_t j = 1; j <= m; ++j) {
        lhs += 1.0L / X[j];
        harmonic += 1.0L / j;
      }
      if (lhs > harmonic * m / X[m] * (1.0L + 1e-15L)) return {false, "second inequality fails numerically"};
    }
  }
  return {true, std::to_string(sequences) + " sequences"};
}

// 12. W_single grows like log n on growth-restricted inputs.
Outcome growth_scaling() {
  const std::size_t d = 256, r = 12;
  double C = 0.0;
  double last_ratio = 0.0;
  std::ostringstream detail;
  for (std::size_t e = 8; e <= 14; ++e) {
    const std::size_t n = std::size_t{1} << e;
    const Instance inst = gen_growth_restricted(n, d, 2.0, r, derive_seed(120, e));
    const auto model = CollisionModel::make(d, r);
    const auto best = w_single(distance_histogram(inst.query, inst.set), model.p1, kMaxLevel);
    const double per_log = best.value / std::log(static_cast<double>(n));
    if (e == 8) C = per_log;
    last_ratio = per_log / C;
    detail << "n=2^" << e << ": " << fmt("%.1f", best.value) << " ";
  }
  return {last_ratio <= 2.0, "W_single " + detail.str() + "; (W/ln n) at 2^14 over 2^8 = " + fmt("%.3f", last_ratio)};
}

// 13. Same seed, same bytes, wall-clock column aside.
std::string strip_wall_time(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::ostringstream out;
  long column = -1;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '{' && nlohmann::ordered_json::accept(line)) {
      auto j = nlohmann::ordered_json::parse(line);
      j.erase("wall_time_ms");
      out << j.dump() << "\n";
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i] == "wall_time_ms") column = static_cast<long>(i);
    }
    if (column >= 0 && static_cast<std::size_t>(column) < cells.size()) cells.erase(cells.begin() + column);
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << "\n";
  }
  return out.str();
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "adalsh_acceptance_determinism";
  fs::create_directories(dir);
  const std::string inst = (dir / "inst.txt").string();
  auto run = [](std::vector<std::string> args) {
    args.insert(args.begin(), "adalsh");
    std::ostringstream out, err;
    const int code = cli::run_cli(args, out, err);
    return std::to_string(code) + "\n" + out.str() + err.str();
  };
  auto file = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const std::vector<std::vector<std::string>> commands = {
      {"--seed", "5", "query", "--instance", inst, "--engine", "multi", "--trace", "--max-probes", "32"},
      {"--seed", "5", "query", "--instance", inst, "--engine", "single", "--backend", "trie"},
      {"--seed", "5", "query", "--instance", inst, "--engine", "static", "--t", "8", "--format", "csv"},
      {"analyze", "--instance", inst, "--max-probes", "64"},
      {"--format", "csv", "analyze", "--instance", inst},
      {"--seed", "9", "sweep", "--n", "512", "--t-grid", "2^1..2^5", "--builds", "3", "--max-probes", "16"},
      {"--seed", "9", "--format", "json", "sweep", "--family", "gap", "--n", "512", "--r", "32", "--t-grid", "4,16",
       "--builds", "3"},
      {"--seed", "9", "recall", "--n", "256", "--t-grid", "4", "--builds", "5", "--engines", "single,multi"},
  };
  std::size_t compared = 0;
  std::string first_gen, second_gen;
  for (int pass = 0; pass < 2; ++pass) {
    const auto code = run({"--seed", "3", "--out", inst, "gen", "--n", "512", "--t", "8"});
    if (code.rfind("0\n", 0) != 0) return {false, "gen failed: " + code};
    (pass == 0 ? first_gen : second_gen) = file(inst);
  }
  if (first_gen != second_gen) return {false, "gen output differs between runs"};
  ++compared;
  for (const auto& cmd : commands) {
    const auto a = run(cmd);
    const auto b = run(cmd);
    if (a.rfind("0\n", 0) != 0) return {false, "command failed: " + a};
    if (strip_wall_time(a) != strip_wall_time(b)) return {false, "output differs for " + cmd[cmd.size() > 2 ? 2 : 0]};
    ++compared;
  }
  fs::remove_all(dir);
  return {true, std::to_string(compared) + " invocations byte-identical across reruns"};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
  // Optional arguments select criteria by number.
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  const std::vector<Criterion> criteria = {
      {1, "soundness", 60, soundness},
      {2, "single-probe recall", 120, [] { return recall(Engine::kSingle, 0.45); }},
      {3, "multi-probe recall", 180, [] { return recall(Engine::kMulti, 0.25); }},
      {4, "output sensitivity", 300, output_sensitivity},
      {5, "naive vs adaptive separation", 300, separation},
      {6, "multi-probe dominance", 60, multi_dominance},
      {7, "rho reproduction", 1, exponents},
      {8, "probing sequence", 60, probing},
      {9, "backend equivalence", 60, backend_equivalence},
      {10, "gap corollary", 180, gap_corollary},
      {11, "prefix-sum lemma", 10, prefix_lemma},
      {12, "growth-restricted scaling", 120, growth_scaling},
      {13, "determinism", 60, determinism},
  };
  int failed = 0;
  std::size_t ran = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.limit_seconds;
    const bool pass = outcome.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("%s %2d %s: %s (%.1f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name, outcome.detail.c_str(), secs,
                in_time ? "" : ", over the time limit");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(ran) - failed, ran);
  return failed == 0 ? 0 : 1;
}
