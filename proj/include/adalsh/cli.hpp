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

// Command-line front end. Everything runs through run_cli so tests can drive
// the exact code path the binary uses.

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "adalsh/analysis.hpp"
#include "adalsh/bench.hpp"
#include "adalsh/collision.hpp"
#include "adalsh/error.hpp"
#include "adalsh/generators.hpp"
#include "adalsh/index.hpp"
#include "adalsh/instance_io.hpp"
#include "adalsh/query.hpp"

namespace adalsh::cli {

using json = nlohmann::ordered_json;

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

inline std::size_t parse_size(const std::string& s) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    if (!s.empty() && s[0] == '-') throw std::invalid_argument(s);
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    throw_validation("not a non-negative integer: '" + s + "'");
  }
  if (pos != s.size()) throw_validation("not a non-negative integer: '" + s + "'");
  return static_cast<std::size_t>(v);
}

inline double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw_validation("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw_validation("not a number: '" + s + "'");
  return v;
}

/// "4,16,64" or a power-of-two range "2^2..2^10".
inline std::vector<std::size_t> parse_t_grid(const std::string& s) {
  std::vector<std::size_t> out;
  for (const auto& item : split(s, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_size(item));
      continue;
    }
    const auto lo = trim(item.substr(0, dots));
    const auto hi = trim(item.substr(dots + 2));
    if (lo.rfind("2^", 0) != 0 || hi.rfind("2^", 0) != 0) throw_validation("bad t range '" + item + "'");
    const std::size_t a = parse_size(lo.substr(2));
    const std::size_t b = parse_size(hi.substr(2));
    if (a > b || b > 62) throw_validation("bad t range '" + item + "'");
    for (std::size_t e = a; e <= b; ++e) out.push_back(std::size_t{1} << e);
  }
  if (out.empty()) throw_validation("empty t grid");
  return out;
}

inline std::vector<Engine> parse_engines(const std::string& s) {
  std::vector<Engine> out;
  for (const auto& name : split(s, ',')) out.push_back(parse_engine(name));
  if (out.empty()) throw_validation("no engines given");
  return out;
}

inline Backend parse_backend(const std::string& s) {
  if (s == "hash") return Backend::kHash;
  if (s == "trie") return Backend::kTrie;
  throw_validation("unknown backend '" + s + "'");
}

inline Schedule parse_schedule(const std::string& s) {
  if (s == "plain") return Schedule::kPlain;
  if (s == "single") return Schedule::kSingle;
  if (s == "multi") return Schedule::kMulti;
  throw_validation("unknown schedule '" + s + "'");
}

inline const char* kSubcommands[] = {"gen", "build", "query", "analyze", "sweep", "recall"};

/// Splices `key=value` lines from --config into the argument list right
/// after the subcommand, skipping keys already given as flags.
inline std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw_io("cannot open config file " + path);

  auto given = [&](const std::string& key) {
    const std::string flag = "--" + key;
    return std::any_of(args.begin() + 1, args.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
  };
  std::vector<std::string> extra;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw_validation(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty() || key.find_first_of(" \t") != std::string::npos) {
      throw_validation(path + ":" + std::to_string(lineno) + ": bad key");
    }
    if (given(key)) continue;
    if (value == "true") {
      extra.push_back("--" + key);
    } else if (value != "false") {
      extra.push_back("--" + key);
      extra.push_back(value);
    }
  }
  auto at = args.end();
  for (auto it = args.begin() + 1; it != args.end(); ++it) {
    if (std::find(std::begin(kSubcommands), std::end(kSubcommands), *it) != std::end(kSubcommands)) {
      at = it + 1;
      break;
    }
  }
  args.insert(at, extra.begin(), extra.end());
  return args;
}

/// Writes to --out when given, otherwise to the caller's stream.
inline void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(fallback);
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw_io("cannot open " + path + " for writing");
  body(os);
  if (!os) throw_io("write failed: " + path);
}

inline json number_or_null(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

inline json report_json(const QueryReport& rep, bool with_trace) {
  json j;
  j["engine"] = std::string(engine_name(rep.engine));
  j["result_count"] = rep.ids.size();
  j["ids"] = rep.ids;
  j["buckets_probed"] = rep.buckets_probed;
  j["loop_bucket_reads"] = rep.loop_bucket_reads;
  j["candidates_retrieved"] = rep.candidates_retrieved;
  j["distance_computations"] = rep.distance_computations;
  j["k_best"] = rep.k_best;
  j["ell_best"] = rep.ell_best;
  j["reps_used"] = rep.reps_used;
  j["w_best"] = rep.w_best;
  j["last_level"] = rep.last_level;
  j["skipped_cells"] = rep.skipped_cells;
  j["exhausted_levels"] = rep.exhausted_levels;
  if (with_trace) {
    json trace = json::array();
    for (const auto& c : rep.trace) {
      trace.push_back({{"k", c.k}, {"ell", c.ell}, {"reps", c.reps}, {"cost", c.cost}, {"work", c.work},
                       {"best_before", c.best_before}});
    }
    j["trace"] = std::move(trace);
  }
  return j;
}

inline json sweep_json(const SweepRow& r) {
  return json{{"family", r.family},
              {"n", r.n},
              {"t", r.t},
              {"engine", std::string(engine_name(r.engine))},
              {"builds", r.builds},
              {"median_w_best", number_or_null(r.median_w_best)},
              {"mean_candidates", number_or_null(r.mean_candidates)},
              {"recall", number_or_null(r.recall)},
              {"k_best_mode", r.k_best_mode},
              {"ell_best_mode", r.ell_best_mode},
              {"w_single", number_or_null(r.w_single)},
              {"w_multi", number_or_null(r.w_multi)},
              {"ref_static", number_or_null(r.ref_static)},
              {"ref_naive", number_or_null(r.ref_naive)},
              {"ref_linear", number_or_null(r.ref_linear)},
              {"ref_multiprobe", number_or_null(r.ref_multiprobe)},
              {"seed", r.seed},
              {"wall_time_ms", r.wall_time_ms},
              {"error", r.error}};
}

inline json recall_json(const RecallRow& r) {
  return json{{"family", r.family},
              {"n", r.n},
              {"t", r.t},
              {"engine", std::string(engine_name(r.engine))},
              {"builds", r.builds},
              {"close_points", r.close_points},
              {"min_recall", number_or_null(r.min_recall)},
              {"mean_recall", number_or_null(r.mean_recall)},
              {"seed", r.seed},
              {"error", r.error}};
}

inline std::shared_ptr<const PointSet> shared_set(const Instance& inst) {
  return std::make_shared<const PointSet>(inst.set);
}

}  // namespace detail

/// Runs the command line; returns the process exit code.
inline int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  struct Globals {
    std::uint64_t seed = 1;
    std::string out;
    std::string format;
  } g;

  CLI::App app{"Output-sensitive range reporting in Hamming space with multi-level LSH", "adalsh"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_all_flag("--help-all", "Help for every subcommand");
  app.add_option("--seed", g.seed, "Root seed; every random choice derives from it");
  app.add_option("--out", g.out, "Output path (stdout when omitted)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--config", "Flat key=value file; flags override it");  // consumed by expand_config

  // gen
  struct {
    std::string family = "t-heavy";
    std::size_t n = 1024, t = 16, d = 256, r = 51;
    double c = 2.0, growth = 2.0;
  } gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate an instance file");
  gen_cmd->add_option("--family", gen.family)->check(CLI::IsMember({"t-heavy", "gap", "uniform", "growth"}));
  gen_cmd->add_option("--n", gen.n);
  gen_cmd->add_option("--t", gen.t);
  gen_cmd->add_option("--d", gen.d);
  gen_cmd->add_option("--r", gen.r);
  gen_cmd->add_option("--c", gen.c);
  gen_cmd->add_option("--growth", gen.growth, "Growth exponent g for the growth family");

  // build
  struct {
    std::string instance, backend = "hash", schedule = "multi";
    std::uint64_t L = 0, max_probes = 4096;
    double c = 2.0;
  } bld;
  auto* build_cmd = app.add_subcommand("build", "Build an index and persist it to --out");
  build_cmd->add_option("--instance", bld.instance)->required();
  build_cmd->add_option("--L", bld.L, "Table budget (0: sized for standard LSH)");
  build_cmd->add_option("--backend", bld.backend)->check(CLI::IsMember({"hash", "trie"}));
  build_cmd->add_option("--schedule", bld.schedule)->check(CLI::IsMember({"plain", "single", "multi"}));
  build_cmd->add_option("--max-probes", bld.max_probes);
  build_cmd->add_option("--c", bld.c);

  // query
  struct {
    std::string instance, index, engine = "single", backend = "hash", schedule = "multi";
    std::optional<std::size_t> r;
    std::size_t t = 1;
    std::uint64_t L = 0, max_probes = 4096;
    std::size_t repeats = 1;
    double c = 2.0;
    bool trace = false;
  } qry;
  auto* query_cmd = app.add_subcommand("query", "Run one engine on an instance's query point");
  query_cmd->add_option("--instance", qry.instance)->required();
  query_cmd->add_option("--index", qry.index, "Persisted index (built on the fly when omitted)");
  query_cmd->add_option("--engine", qry.engine)->check(CLI::IsMember({"scan", "naive", "static", "single", "multi"}));
  query_cmd->add_option("--r", qry.r, "Radius (defaults to the instance's)");
  query_cmd->add_option("--t", qry.t, "Output size hint for the static engine");
  query_cmd->add_option("--c", qry.c);
  query_cmd->add_option("--L", qry.L);
  query_cmd->add_option("--backend", qry.backend)->check(CLI::IsMember({"hash", "trie"}));
  query_cmd->add_option("--schedule", qry.schedule)->check(CLI::IsMember({"plain", "single", "multi"}));
  query_cmd->add_option("--max-probes", qry.max_probes);
  query_cmd->add_option("--repeats", qry.repeats, "Independent rebuilds, one record each");
  query_cmd->add_flag("--trace", qry.trace, "Include the multi-probe cell trace");

  // analyze
  struct {
    std::string instance, tau = "0.001,0.01,0.05,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
    std::string levels_csv, grid_csv;
    std::optional<std::size_t> K;
    std::uint64_t max_probes = 4096;
    double c = 2.0;
  } ana;
  auto* analyze_cmd = app.add_subcommand("analyze", "Exact expected-work analysis of an instance");
  analyze_cmd->add_option("--instance", ana.instance)->required();
  analyze_cmd->add_option("--K", ana.K, "Deepest level (defaults to the auto budget's)");
  analyze_cmd->add_option("--max-probes", ana.max_probes, "Probe budget for the multi-probe grid");
  analyze_cmd->add_option("--c", ana.c);
  analyze_cmd->add_option("--tau", ana.tau, "Comma list of tau values for the exponent curve");
  analyze_cmd->add_option("--levels-csv", ana.levels_csv, "Write (k, expected_work) here");
  analyze_cmd->add_option("--grid-csv", ana.grid_csv, "Write (k, ell, multi_work) here");

  // sweep / recall share the bench flags
  BenchConfig bench;
  std::string t_grid = "4,16,64,256", engines;
  std::string backend = "hash", points_csv;
  std::optional<std::size_t> builds;
  auto add_bench = [&](CLI::App* cmd) {
    cmd->add_option("--family", bench.family)->check(CLI::IsMember({"t-heavy", "gap", "uniform", "growth"}));
    cmd->add_option("--n", bench.n);
    cmd->add_option("--d", bench.d);
    cmd->add_option("--r", bench.r);
    cmd->add_option("--c", bench.c);
    cmd->add_option("--growth", bench.growth_exp);
    cmd->add_option("--t-grid", t_grid, "Comma list, or a range like 2^2..2^10");
    cmd->add_option("--engines", engines, "Comma list of scan,naive,static,single,multi");
    cmd->add_option("--builds", builds, "Independent index builds per grid point");
    cmd->add_option("--max-probes", bench.max_probes);
    cmd->add_option("--L", bench.L);
    cmd->add_option("--backend", backend)->check(CLI::IsMember({"hash", "trie"}));
  };
  auto* sweep_cmd = app.add_subcommand("sweep", "Work versus output size across a t grid");
  add_bench(sweep_cmd);
  auto* recall_cmd = app.add_subcommand("recall", "Per-point recall over independent builds");
  add_bench(recall_cmd);
  recall_cmd->add_option("--points", points_csv, "Also write per-point recall CSV here");

  try {
    const auto args = detail::expand_config(raw_args);
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) return app.exit(e, out, err);
      err << "error: " << e.what() << "\n";
      return static_cast<int>(ErrorKind::kValidation);
    }

    if (gen_cmd->parsed()) {
      Instance inst = [&] {
        if (gen.family == "t-heavy") return gen_t_heavy(gen.n, gen.t, gen.d, gen.r, gen.c, g.seed);
        if (gen.family == "gap") return gen_gap_instance(gen.n, gen.t, gen.d, gen.r, gen.c, g.seed);
        if (gen.family == "uniform") return gen_uniform_instance(gen.n, gen.d, gen.r, g.seed);
        return gen_growth_restricted(gen.n, gen.d, gen.growth, gen.r, g.seed);
      }();
      detail::emit(g.out, out, [&](std::ostream& os) { write_instance(os, inst); });
      return 0;
    }

    if (build_cmd->parsed()) {
      if (g.out.empty()) throw_validation("build: --out is required (index files are binary)");
      const Instance inst = load_instance(bld.instance);
      const auto model = CollisionModel::make(inst.set.dim(), inst.r, bld.c);
      IndexOptions opt;
      opt.L = bld.L != 0 ? bld.L : auto_budget(inst.set.size(), model);
      opt.backend = detail::parse_backend(bld.backend);
      opt.schedule = detail::parse_schedule(bld.schedule);
      opt.max_probes = bld.max_probes;
      opt.seed = g.seed;
      const auto index = build_index(detail::shared_set(inst), model, opt);
      detail::emit(g.out, out, [&](std::ostream& os) { index.save(os); });
      json summary{{"n", index.size()},          {"d", inst.set.dim()},
                   {"L", index.budget()},        {"K", index.max_level()},
                   {"repetitions", index.repetitions()},
                   {"stored_references", index.stored_references()},
                   {"seed", g.seed}};
      out << summary.dump() << "\n";
      return 0;
    }

    if (query_cmd->parsed()) {
      const Instance inst = load_instance(qry.instance);
      const std::size_t r = qry.r.value_or(inst.r);
      const auto points = detail::shared_set(inst);
      const auto model = CollisionModel::make(inst.set.dim(), inst.r, qry.c);
      if (qry.repeats < 1) throw_validation("query: --repeats must be >= 1");
      if (!qry.index.empty() && qry.repeats > 1) throw_validation("query: --repeats needs an on-the-fly index");
      const Engine engine = parse_engine(qry.engine);
      const EngineParams params{qry.t, qry.c, qry.max_probes};
      // A single run builds with the root seed; repeated runs derive one seed per build.
      auto run_seed = [&](std::size_t run) { return qry.repeats == 1 ? g.seed : derive_seed(g.seed, run); };
      auto run_once = [&](std::size_t run) {
        if (!qry.index.empty()) {
          std::ifstream is(qry.index, std::ios::binary);
          if (!is) throw_io("cannot open " + qry.index);
          return run_engine(engine, MultiLevelIndex::load(is, points), inst.query, r, params);
        }
        IndexOptions opt;
        opt.L = qry.L != 0 ? qry.L : auto_budget(inst.set.size(), model);
        opt.backend = detail::parse_backend(qry.backend);
        opt.schedule = detail::parse_schedule(qry.schedule);
        opt.max_probes = qry.max_probes;
        opt.seed = run_seed(run);
        return run_engine(engine, build_index(points, model, opt), inst.query, r, params);
      };
      detail::emit(g.out, out, [&](std::ostream& os) {
        if (g.format == "csv") {
          os << "engine,result_count,buckets_probed,loop_bucket_reads,candidates_retrieved,"
                "distance_computations,k_best,ell_best,reps_used,w_best,skipped_cells,run,seed\n";
        }
        for (std::size_t run = 0; run < qry.repeats; ++run) {
          const auto report = run_once(run);
          if (g.format == "csv") {
            os << engine_name(report.engine) << ',' << report.ids.size() << ',' << report.buckets_probed << ','
               << report.loop_bucket_reads << ',' << report.candidates_retrieved << ','
               << report.distance_computations << ',' << report.k_best << ',' << report.ell_best << ','
               << report.reps_used << ',' << report.w_best << ',' << report.skipped_cells << ',' << run << ','
               << run_seed(run) << "\n";
          } else {
            auto j = detail::report_json(report, qry.trace);
            j["run"] = run;
            j["seed"] = run_seed(run);
            os << j.dump() << "\n";
          }
        }
      });
      return 0;
    }

    if (analyze_cmd->parsed()) {
      const Instance inst = load_instance(ana.instance);
      const std::size_t n = inst.set.size();
      const auto model = CollisionModel::make(inst.set.dim(), inst.r, ana.c);
      const std::size_t K = ana.K.value_or(max_level_for_budget(auto_budget(n, model), model.p1));
      if (K > kMaxLevel) throw_validation("analyze: K must be <= 64");
      const auto hist = distance_histogram(inst.query, inst.set);
      const bool want_grid = !ana.grid_csv.empty();
      const auto profile = work_profile(hist, model.p1, K, ana.max_probes, want_grid);

      if (!ana.levels_csv.empty()) {
        detail::emit(ana.levels_csv, out, [&](std::ostream& os) {
          os << "k,expected_work\n";
          for (std::size_t k = 0; k < profile.level_work.size(); ++k) {
            os << k << ',' << format_number(profile.level_work[k]) << "\n";
          }
        });
      }
      if (want_grid) {
        detail::emit(ana.grid_csv, out, [&](std::ostream& os) {
          os << "k,ell,multi_work\n";
          for (const auto& cell : profile.grid) os << cell.k << ',' << cell.ell << ',' << format_number(cell.value) << "\n";
        });
      }

      json summary;
      summary["n"] = n;
      summary["d"] = inst.set.dim();
      summary["r"] = inst.r;
      summary["c"] = ana.c;
      summary["p1"] = model.p1;
      summary["p2"] = *model.p2;
      summary["rho"] = rho(model.p1, *model.p2);
      summary["K"] = K;
      summary["max_probes"] = ana.max_probes;
      summary["close_points"] = hist.within(inst.r);
      summary["expansion"] = expansion(hist, inst.r);
      summary["w_single"] = profile.single.value;
      summary["k_single"] = profile.single.k;
      summary["w_multi"] = profile.multi.value;
      summary["k_multi"] = profile.multi.k;
      summary["ell_multi"] = profile.multi.ell;
      summary["standard_k"] = standard_lsh_params(std::max<std::size_t>(n, 2), model.p1, *model.p2).k;
      summary["linear_time_threshold"] = linear_time_threshold(model.p1, *model.p2);
      summary["linear_time_threshold_alternate"] = alternate_threshold(model.p1, *model.p2);
      json curve = json::array();
      for (const auto& item : detail::split(ana.tau, ',')) {
        const double tau = detail::parse_double(item);
        try {
          const auto m = multiprobe_exponent(tau, model.p1, *model.p2);
          curve.push_back({{"tau", tau}, {"alpha", m.alpha}, {"exponent", m.exponent}});
        } catch (const Error& e) {
          curve.push_back({{"tau", tau}, {"alpha", nullptr}, {"exponent", nullptr}, {"error", e.what()}});
        }
      }
      summary["multiprobe_curve"] = std::move(curve);

      detail::emit(g.out, out, [&](std::ostream& os) {
        if (g.format == "csv") {
          os << "k,expected_work\n";
          for (std::size_t k = 0; k < profile.level_work.size(); ++k) {
            os << k << ',' << format_number(profile.level_work[k]) << "\n";
          }
        } else {
          os << summary.dump(2) << "\n";
        }
      });
      return 0;
    }

    // sweep or recall
    const bool is_recall = recall_cmd->parsed();
    bench.t_grid = detail::parse_t_grid(t_grid);
    bench.engines = detail::parse_engines(engines.empty() ? (is_recall ? "single" : "naive,single,multi") : engines);
    bench.builds = builds.value_or(is_recall ? 300 : 100);
    bench.backend = detail::parse_backend(backend);
    bench.seed = g.seed;
    const bool as_json = g.format == "json";

    if (!is_recall) {
      const auto rows = run_sweep(bench);
      detail::emit(g.out, out, [&](std::ostream& os) {
        if (as_json) {
          for (const auto& row : rows) os << detail::sweep_json(row).dump() << "\n";
        } else {
          write_sweep_csv(os, rows);
        }
      });
      return 0;
    }
    const auto result = measure_recall(bench);
    detail::emit(g.out, out, [&](std::ostream& os) {
      if (as_json) {
        for (const auto& row : result.rows) os << detail::recall_json(row).dump() << "\n";
      } else {
        write_recall_csv(os, result.rows);
      }
    });
    if (!points_csv.empty()) {
      detail::emit(points_csv, out, [&](std::ostream& os) { write_point_recall_csv(os, result.points); });
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run_cli(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace adalsh::cli
