// emopt command-line tool.
//
// Subcommands:
//   run      execute an optimization run (plain | wr | wr-sa) per config file
//   study    hyperparameter study: one varied parameter, shared seeds
//   sample   LHS feasibility statistics for a benchmark
//   repair   repair a CSV of designs onto the feasible two-decimal grid
//   metrics  hv / rhve / tradeoff / screen over result CSVs
//
// Exit codes: 0 success, 2 configuration or usage error, 3 runtime failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "emopt/artifacts.hpp"
#include "emopt/config.hpp"
#include "emopt/csv.hpp"
#include "emopt/ipm.hpp"
#include "emopt/metrics.hpp"
#include "emopt/nsga2.hpp"
#include "emopt/parallel.hpp"
#include "emopt/problem.hpp"
#include "emopt/saloop.hpp"
#include "emopt/sampling.hpp"

namespace fs = std::filesystem;
using namespace emopt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::string default_out_dir() {
  const char* env = std::getenv("EMOPT_OUT_DIR");
  return env && *env ? env : "emopt-out";
}

struct SeedRunResult {
  std::vector<ArchiveEntry> archive;
  std::vector<CycleLog> cycles;
  std::vector<ModelSelectionRow> model_rows;
};

SeedRunResult execute_one(const RunSpec& spec, std::uint64_t seed, int threads) {
  RunConfig cfg = spec.config;
  cfg.seed = seed;
  auto problem = make_problem(spec.problem);

  SeedRunResult out;
  if (spec.mode == "wr-sa") {
    SaResult r = run_sa(*problem, cfg, threads);
    out.archive = r.archive.entries();
    out.cycles = std::move(r.cycles);
    out.model_rows = std::move(r.model_rows);
  } else {
    EvaluationBudget budget(cfg.ese_max);
    const OptMode mode = spec.mode == "wr" ? OptMode::WithRepair : OptMode::Plain;
    RunResult r = nsga2_run(*problem, cfg, mode, budget, {}, threads);
    out.archive = std::move(r.archive);
  }
  return out;
}

void write_seed_artifacts(const fs::path& dir, const RunSpec& spec, std::uint64_t seed,
                          const SeedRunResult& result) {
  auto problem = make_problem(spec.problem);
  fs::create_directories(dir);
  write_archive_csv((dir / "archive.csv").string(), *problem, result.archive);

  const std::vector<FrontRow> front = pareto_front(result.archive, static_cast<int>(seed));
  write_front_csv((dir / "pareto.csv").string(), *problem, front);
  write_pcp_csv((dir / "pcp.csv").string(), *problem, front);

  if (spec.mode == "wr-sa") {
    write_cycles_csv((dir / "cycles.csv").string(), result.cycles);
    write_models_csv((dir / "models.csv").string(), result.model_rows);
  }
}

int cmd_run(const std::string& config_path, const std::string& out_dir_flag,
            const std::vector<std::uint64_t>& seed_override, const std::string& mode_override,
            const std::string& problem_override, int threads) {
  RunSpec spec = parse_run_spec(config_path);
  if (!seed_override.empty()) spec.seeds = seed_override;
  if (!mode_override.empty()) spec.mode = mode_override;
  if (!problem_override.empty()) spec.problem = problem_override;
  spec.validate();

  const fs::path out_dir = out_dir_flag.empty() ? default_out_dir() : out_dir_flag;
  fs::create_directories(out_dir);
  const std::string resolved = serialize_run_spec(spec);
  {
    std::ofstream cfg_out(out_dir / "config.resolved.cfg");
    cfg_out << resolved;
  }

  // one job per seed; a single-seed run parallelizes inside instead
  const int total_threads = threads > 0 ? threads : default_threads();
  const int inner_threads = spec.seeds.size() == 1 ? total_threads : 1;
  std::vector<SeedRunResult> results(spec.seeds.size());
  parallel_for(
      spec.seeds.size(),
      [&](std::size_t i) { results[i] = execute_one(spec, spec.seeds[i], inner_threads); },
      std::min<int>(total_threads, static_cast<int>(spec.seeds.size())));

  std::vector<FrontRow> combined;
  auto problem = make_problem(spec.problem);
  for (std::size_t i = 0; i < spec.seeds.size(); ++i) {
    write_seed_artifacts(out_dir / ("seed_" + std::to_string(spec.seeds[i])), spec,
                         spec.seeds[i], results[i]);
    for (FrontRow& r : pareto_front(results[i].archive, static_cast<int>(spec.seeds[i])))
      combined.push_back(std::move(r));
  }

  // cross-seed non-dominated filter for the combined front
  std::vector<FrontRow> combined_front;
  for (std::size_t i = 0; i < combined.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < combined.size() && !dominated; ++j) {
      if (i == j) continue;
      if (dominates(combined[j].entry.ind.f, combined[i].entry.ind.f)) dominated = true;
      if (j < i && combined[j].entry.ind.f == combined[i].entry.ind.f) dominated = true;
    }
    if (!dominated) combined_front.push_back(combined[i]);
  }
  write_front_csv((out_dir / "combined_front.csv").string(), *problem, combined_front);
  write_pcp_csv((out_dir / "combined_pcp.csv").string(), *problem, combined_front);

  // summary rows: each seed plus the combined set, normalized over the
  // combined front's own box
  std::vector<ObjectiveVector> combined_objs;
  for (const FrontRow& r : combined_front) combined_objs.push_back(r.entry.ind.f);
  const HvReference ref = combined_reference({combined_objs});

  std::vector<RunSummary> rows;
  std::vector<ArchiveEntry> all_entries;
  for (std::size_t i = 0; i < spec.seeds.size(); ++i) {
    rows.push_back(summarize("seed_" + std::to_string(spec.seeds[i]), results[i].archive, ref));
    all_entries.insert(all_entries.end(), results[i].archive.begin(), results[i].archive.end());
  }
  rows.push_back(summarize("combined", all_entries, ref));
  write_summary((out_dir / "summary.txt").string(), resolved, rows);

  std::cout << "wrote " << out_dir.string() << " (" << spec.seeds.size() << " run(s), mode "
            << spec.mode << ", problem " << spec.problem << ")\n";
  return kExitOk;
}

int cmd_study(const std::string& study_path, const std::string& out_dir_flag, int threads) {
  StudySpec study = parse_study_spec(study_path);
  const fs::path out_dir = out_dir_flag.empty() ? default_out_dir() : out_dir_flag;
  fs::create_directories(out_dir);

  auto problem = make_problem(study.base.problem);

  struct ConfigResult {
    std::string label;
    std::vector<SeedRunResult> per_seed;
  };
  std::vector<ConfigResult> configs(study.values.size());

  for (std::size_t v = 0; v < study.values.size(); ++v) {
    RunSpec spec = study.base;
    const long long value = study.values[v];
    if (study.vary == "n_infill") spec.config.n_infill = static_cast<int>(value);
    if (study.vary == "k") spec.config.k_surrogate_gens = static_cast<int>(value);
    if (study.vary == "n_doe") spec.config.n_doe = static_cast<int>(value);
    spec.validate();

    configs[v].label = study.vary + "=" + std::to_string(value);
    configs[v].per_seed.resize(spec.seeds.size());
    const int total_threads = threads > 0 ? threads : default_threads();
    const int inner_threads = spec.seeds.size() == 1 ? total_threads : 1;
    parallel_for(
        spec.seeds.size(),
        [&](std::size_t i) {
          configs[v].per_seed[i] = execute_one(spec, spec.seeds[i], inner_threads);
        },
        std::min<int>(total_threads, static_cast<int>(spec.seeds.size())));

    const fs::path cfg_dir = out_dir / configs[v].label;
    for (std::size_t i = 0; i < spec.seeds.size(); ++i) {
      const fs::path seed_dir = cfg_dir / ("seed_" + std::to_string(spec.seeds[i]));
      write_seed_artifacts(seed_dir, spec, spec.seeds[i], configs[v].per_seed[i]);
      // DOE rows doubled as their own artifact: byte-identical across
      // configurations that share seeds and n_doe
      std::vector<ArchiveEntry> doe(configs[v].per_seed[i].archive.begin(),
                                    configs[v].per_seed[i].archive.begin() +
                                        std::min<std::size_t>(spec.config.n_doe,
                                                              configs[v].per_seed[i].archive.size()));
      write_archive_csv((seed_dir / "doe.csv").string(), *problem, doe);
    }
  }

  // normalization box from the union of all configuration fronts
  std::vector<std::vector<ObjectiveVector>> all_fronts;
  for (const auto& cr : configs) {
    for (const auto& seed_result : cr.per_seed) {
      std::vector<ObjectiveVector> objs;
      for (const FrontRow& r : pareto_front(seed_result.archive, 0))
        objs.push_back(r.entry.ind.f);
      all_fronts.push_back(std::move(objs));
    }
  }
  const HvReference ref = combined_reference(all_fronts);

  std::ofstream summary_csv(out_dir / "study_summary.csv");
  CsvWriter w(summary_csv);
  w.header({"configuration", "n_nds", "hv"});
  for (const auto& cr : configs) {
    // combined front over this configuration's seeds
    std::vector<ArchiveEntry> all;
    std::vector<std::vector<std::pair<long long, double>>> traces;
    for (const auto& seed_result : cr.per_seed) {
      all.insert(all.end(), seed_result.archive.begin(), seed_result.archive.end());
      traces.push_back(rhve(seed_result.archive, ref, study.base.config.n_infill));
    }
    const RunSummary s = summarize(cr.label, all, ref);
    w.field(cr.label);
    w.field(s.non_dominated);
    w.field(s.hypervolume);
    w.end_row();

    // median RHVE trace (runs share the evaluation grid: same budget/stride)
    const auto median = median_trace(traces);
    std::ofstream trace_out(out_dir / (cr.label + "_rhve_median.csv"));
    CsvWriter tw(trace_out);
    tw.header({"evaluations", "hv"});
    for (const auto& [t, hv] : median) {
      tw.field(t);
      tw.field(hv);
      tw.end_row();
    }
  }

  std::cout << "wrote " << (out_dir / "study_summary.csv").string() << "\n";
  return kExitOk;
}

int cmd_bounds(const std::string& problem_name, const std::string& out_path) {
  auto problem = make_problem(problem_name);
  const BoundsSpec& b = problem->bounds();
  const bool is_machine = problem_name == "ipm-proxy-v1";

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    out = &file;
  }
  CsvWriter w(*out);
  if (is_machine)
    w.header({"variable", "lower", "upper", "reference"});
  else
    w.header({"variable", "lower", "upper"});
  for (int i = 0; i < problem->dimension(); ++i) {
    w.field("x" + std::to_string(i + 1));
    w.field(b.lower[i]);
    w.field(b.upper[i]);
    if (is_machine) w.field(ipm::reference_design()[i]);
    w.end_row();
  }
  return kExitOk;
}

int cmd_sample(const std::string& problem_name, int batches, int size, std::uint64_t seed,
               const std::string& out_path, int threads) {
  auto problem = make_problem(problem_name);
  const FeasibilityStats stats = feasibility_study(*problem, batches, size, seed, threads);

  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  CsvWriter w(out);
  w.header({"name", "value", "rank"});
  w.field(std::string("feasible_fraction"));
  w.field(stats.feasible_fraction);
  w.field(0);
  w.end_row();
  for (std::size_t j = 0; j < stats.violation_fraction.size(); ++j) {
    w.field("g" + std::to_string(j + 1));
    w.field(stats.violation_fraction[j]);
    w.field(stats.rank[j]);
    w.end_row();
  }
  std::cout << "feasible fraction " << stats.feasible_fraction << " over " << stats.total
            << " samples -> " << out_path << "\n";
  return kExitOk;
}

int cmd_repair(const std::string& in_path, const std::string& out_path,
               const std::string& problem_name, std::uint64_t seed, int threads) {
  auto problem = make_problem(problem_name);
  const CsvTable t = CsvTable::read_file(in_path);

  std::vector<int> x_cols;
  for (int i = 1; i <= problem->dimension(); ++i)
    x_cols.push_back(t.require_column("x" + std::to_string(i)));

  std::vector<DecisionVector> designs;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    DecisionVector x(problem->dimension());
    for (int i = 0; i < problem->dimension(); ++i) x[i] = t.number(r, x_cols[i]);
    designs.push_back(std::move(x));
  }

  RepairConfig cfg;
  const std::vector<RepairResult> results =
      repair_batch(designs, *problem, cfg, seed, /*tag=*/0, threads);

  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  CsvWriter w(out);
  std::vector<std::string> cols;
  for (int i = 1; i <= problem->dimension(); ++i) cols.push_back("x" + std::to_string(i));
  cols.push_back("status");
  cols.push_back("distance");
  w.header(cols);
  int repaired = 0, failed = 0;
  for (std::size_t r = 0; r < results.size(); ++r) {
    const RepairResult& res = results[r];
    const DecisionVector& x = res.ok() ? res.x : designs[r];
    for (double v : x) w.field(v);
    switch (res.status) {
      case RepairStatus::Unchanged: w.field(std::string("unchanged")); break;
      case RepairStatus::Repaired: w.field(std::string("repaired")); ++repaired; break;
      case RepairStatus::Failed: w.field(std::string("failed")); ++failed; break;
    }
    w.field(res.distance);
    w.end_row();
  }
  std::cout << results.size() << " designs: " << repaired << " repaired, " << failed
            << " failed -> " << out_path << "\n";
  return kExitOk;
}

std::vector<ObjectiveVector> front_objectives(const std::string& path, const Problem& problem) {
  std::vector<ObjectiveVector> objs;
  for (const FrontRow& r : read_front_csv(path, problem)) objs.push_back(r.entry.ind.f);
  return objs;
}

int cmd_metrics_hv(const std::vector<std::string>& fronts, const std::string& problem_name,
                   const std::string& out_path) {
  auto problem = make_problem(problem_name);
  std::vector<std::vector<ObjectiveVector>> sets;
  for (const std::string& path : fronts) sets.push_back(front_objectives(path, *problem));
  const HvReference ref = combined_reference(sets);

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    out = &file;
  }
  CsvWriter w(*out);
  w.header({"front", "points", "hv"});
  for (std::size_t i = 0; i < fronts.size(); ++i) {
    w.field(fronts[i]);
    w.field(static_cast<long long>(sets[i].size()));
    w.field(hypervolume2d(sets[i], ref));
    w.end_row();
  }
  return kExitOk;
}

int cmd_metrics_rhve(const std::string& archive_path, const std::string& problem_name,
                     long long stride, const std::string& out_path) {
  auto problem = make_problem(problem_name);
  const std::vector<ArchiveEntry> archive = read_archive_csv(archive_path, *problem);

  std::vector<ObjectiveVector> all;
  for (const ArchiveEntry& e : archive) all.push_back(e.ind.f);
  const HvReference ref = combined_reference({all});

  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  CsvWriter w(out);
  w.header({"evaluations", "hv"});
  for (const auto& [t, hv] : rhve(archive, ref, stride)) {
    w.field(t);
    w.field(hv);
    w.end_row();
  }
  return kExitOk;
}

int cmd_metrics_tradeoff(const std::string& front_path, const std::string& problem_name, int top,
                         const std::string& out_path) {
  auto problem = make_problem(problem_name);
  const std::vector<FrontRow> rows = read_front_csv(front_path, *problem);
  std::vector<ObjectiveVector> objs;
  for (const FrontRow& r : rows) objs.push_back(r.entry.ind.f);

  std::vector<TradeoffEntry> ranking = tradeoff(objs);
  if (top > 0 && static_cast<int>(ranking.size()) > top) ranking.resize(top);

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    out = &file;
  }
  CsvWriter w(*out);
  std::vector<std::string> cols = {"run", "eval_index", "tradeoff"};
  for (int m = 1; m <= problem->n_obj(); ++m) cols.push_back("f" + std::to_string(m) + "_raw");
  w.header(cols);
  for (const TradeoffEntry& e : ranking) {
    const FrontRow& r = rows[static_cast<std::size_t>(e.index)];
    w.field(r.run);
    w.field(r.entry.eval_index);
    w.field(e.value);
    const ObjectiveVector raw = to_raw_form(*problem, r.entry.ind.f);
    for (double v : raw) w.field(v);
    w.end_row();
  }
  return kExitOk;
}

// generic auxiliary-metric screen: keep rows whose column lies within bounds
int cmd_metrics_screen(const std::string& in_path, const std::string& column, double min_v,
                       double max_v, const std::string& out_path) {
  const CsvTable t = CsvTable::read_file(in_path);
  const int col = t.require_column(column);

  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  CsvWriter w(out);
  w.header(t.header);
  long long kept = 0;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double v = t.number(r, col);
    if (v < min_v || v > max_v) continue;
    for (const std::string& cell : t.rows[r]) w.field(cell);
    w.end_row();
    ++kept;
  }
  std::cout << "kept " << kept << "/" << t.rows.size() << " rows -> " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"constrained multi-objective machine-design optimization toolkit"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = all cores)")->capture_default_str();

  // run
  auto* run = app.add_subcommand("run", "execute an optimization run");
  std::string run_config, run_out, run_mode, run_problem;
  std::vector<std::uint64_t> run_seeds;
  run->add_option("--config", run_config, "run configuration file")->required();
  run->add_option("--out-dir", run_out, "output directory (default $EMOPT_OUT_DIR)");
  run->add_option("--seed", run_seeds, "override the seed list");
  run->add_option("--mode", run_mode, "override mode: plain | wr | wr-sa");
  run->add_option("--problem", run_problem, "override the benchmark name");

  // study
  auto* study = app.add_subcommand("study", "hyperparameter study");
  std::string study_config, study_out;
  study->add_option("--config", study_config, "study specification file")->required();
  study->add_option("--out-dir", study_out, "output directory");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "export variable bounds and reference design");
  std::string bounds_problem = "ipm-proxy-v1", bounds_out;
  bounds->add_option("--problem", bounds_problem, "benchmark name")->capture_default_str();
  bounds->add_option("--out", bounds_out, "output CSV (default stdout)");

  // sample
  auto* sample = app.add_subcommand("sample", "LHS feasibility statistics");
  std::string sample_problem = "ipm-proxy-v1", sample_out = "feasibility.csv";
  int sample_batches = 100, sample_size = 100;
  std::uint64_t sample_seed = 1;
  sample->add_option("--problem", sample_problem, "benchmark name")->capture_default_str();
  sample->add_option("--batches", sample_batches, "number of batches")->capture_default_str();
  sample->add_option("--size", sample_size, "samples per batch")->capture_default_str();
  sample->add_option("--seed", sample_seed, "rng seed")->capture_default_str();
  sample->add_option("--out", sample_out, "output CSV")->capture_default_str();

  // repair
  auto* rep = app.add_subcommand("repair", "repair a CSV of designs");
  std::string rep_in, rep_out, rep_problem = "ipm-proxy-v1";
  std::uint64_t rep_seed = 1;
  rep->add_option("--in", rep_in, "input CSV with x1..xN columns")->required();
  rep->add_option("--out", rep_out, "output CSV")->required();
  rep->add_option("--problem", rep_problem, "benchmark name")->capture_default_str();
  rep->add_option("--seed", rep_seed, "rng seed")->capture_default_str();

  // metrics
  auto* metrics = app.add_subcommand("metrics", "result analysis");
  metrics->require_subcommand(1);

  auto* hv = metrics->add_subcommand("hv", "normalized hypervolume of one or more fronts");
  std::vector<std::string> hv_fronts;
  std::string hv_problem = "ipm-proxy-v1", hv_out;
  hv->add_option("--front", hv_fronts, "front CSV (repeatable)")->required();
  hv->add_option("--problem", hv_problem, "benchmark name")->capture_default_str();
  hv->add_option("--out", hv_out, "output CSV (default stdout)");

  auto* rh = metrics->add_subcommand("rhve", "hypervolume-vs-evaluations trace");
  std::string rh_archive, rh_problem = "ipm-proxy-v1", rh_out = "rhve.csv";
  long long rh_stride = 10;
  rh->add_option("--archive", rh_archive, "archive CSV")->required();
  rh->add_option("--problem", rh_problem, "benchmark name")->capture_default_str();
  rh->add_option("--stride", rh_stride, "evaluations per trace point")->capture_default_str();
  rh->add_option("--out", rh_out, "output CSV")->capture_default_str();

  auto* to = metrics->add_subcommand("tradeoff", "trade-off ranking of a front");
  std::string to_front, to_problem = "ipm-proxy-v1", to_out;
  int to_top = 0;
  to->add_option("--front", to_front, "front CSV")->required();
  to->add_option("--problem", to_problem, "benchmark name")->capture_default_str();
  to->add_option("--top", to_top, "keep only the top-n rows (0 = all)")->capture_default_str();
  to->add_option("--out", to_out, "output CSV (default stdout)");

  auto* screen = metrics->add_subcommand("screen", "filter rows by a numeric column");
  std::string sc_in, sc_col, sc_out;
  double sc_min = -1e300, sc_max = 1e300;
  screen->add_option("--in", sc_in, "input CSV")->required();
  screen->add_option("--column", sc_col, "column to filter on")->required();
  screen->add_option("--min", sc_min, "minimum value");
  screen->add_option("--max", sc_max, "maximum value");
  screen->add_option("--out", sc_out, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (threads > 0) set_default_threads(threads);

  try {
    if (run->parsed())
      return cmd_run(run_config, run_out, run_seeds, run_mode, run_problem, threads);
    if (study->parsed()) return cmd_study(study_config, study_out, threads);
    if (bounds->parsed()) return cmd_bounds(bounds_problem, bounds_out);
    if (sample->parsed())
      return cmd_sample(sample_problem, sample_batches, sample_size, sample_seed, sample_out,
                        threads);
    if (rep->parsed()) return cmd_repair(rep_in, rep_out, rep_problem, rep_seed, threads);
    if (metrics->parsed()) {
      if (hv->parsed()) return cmd_metrics_hv(hv_fronts, hv_problem, hv_out);
      if (rh->parsed()) return cmd_metrics_rhve(rh_archive, rh_problem, rh_stride, rh_out);
      if (to->parsed()) return cmd_metrics_tradeoff(to_front, to_problem, to_top, to_out);
      if (screen->parsed()) return cmd_metrics_screen(sc_in, sc_col, sc_min, sc_max, sc_out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}
