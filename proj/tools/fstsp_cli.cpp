// Command-line front end: solve / emit / oracle / bench.
// Exit codes: 0 ok, 2 usage, 3 data, 4 size cap.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "fstsp/errors.hpp"
#include "fstsp/instance.hpp"
#include "fstsp/mip.hpp"
#include "fstsp/oracle.hpp"
#include "fstsp/search.hpp"
#include "fstsp/solution.hpp"

namespace {

using namespace fstsp;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitSize = 4;

constexpr const char* kCsvHeader =
    "instance,variant,seed,best,avg,time_ms,gap_pct,tsp_seed_time_ms,"
    "best_raw,avg_raw\n";

void apply_variant(Instance& inst, const std::string& variant) {
  if (variant == "ponza")
    inst.variant = VariantConfig::ponza();
  else if (variant == "murray")
    inst.variant = VariantConfig::murray();
  else if (variant == "tspd")
    inst.variant = VariantConfig::tspd(inst.variant.alpha);
  else
    throw DataError(fmt::format("unknown variant '{}'", variant));
}

struct CsvRow {
  std::string instance;
  std::string variant;
  uint64_t seed = 0;
  double best = 0.0;
  double avg = 0.0;
  double time_ms = 0.0;
  std::optional<double> gap_pct;
  double tsp_seed_time_ms = 0.0;
};

std::string format_row(const CsvRow& r, bool stable) {
  const double tm = stable ? 0.0 : r.time_ms;
  const double sm = stable ? 0.0 : r.tsp_seed_time_ms;
  std::string gap = r.gap_pct ? fmt::format("{:.2f}", *r.gap_pct) : "";
  return fmt::format("{},{},{},{:.2f},{:.2f},{:.2f},{},{:.2f},{},{}\n",
                     r.instance, r.variant, r.seed, r.best, r.avg, tm, gap, sm,
                     r.best, r.avg);
}

// Opens for append, writing the header first when the file is empty or new.
class CsvSink {
 public:
  CsvSink(const std::string& path, bool stable) : stable_(stable) {
    if (path.empty()) return;
    const bool fresh =
        !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
    out_.open(path, std::ios::app);
    if (!out_) throw IoError(fmt::format("cannot open '{}' for writing", path));
    if (fresh) out_ << kCsvHeader;
  }

  void put(const CsvRow& r) {
    if (out_.is_open()) {
      out_ << format_row(r, stable_);
    } else {
      if (!stdout_header_done_) {
        std::cout << kCsvHeader;
        stdout_header_done_ = true;
      }
      std::cout << format_row(r, stable_);
    }
  }

 private:
  std::ofstream out_;
  bool stable_;
  bool stdout_header_done_ = false;
};

// "name value" pairs, '#' comments; names match the CSV instance column.
std::map<std::string, double> load_bks(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open BKS file '{}'", path));
  std::map<std::string, double> bks;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string name;
    double value = 0.0;
    if (!(ls >> name)) continue;
    if (!(ls >> value))
      throw ParseError(
          fmt::format("{}:{}: expected '<name> <value>'", path, lineno));
    bks[name] = value;
  }
  return bks;
}

std::string instance_label(const Instance& inst, const std::string& path) {
  if (!inst.name.empty()) return inst.name;
  return std::filesystem::path(path).filename().string();
}

int thread_budget() {
  if (const char* env = std::getenv("FSTSP_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : int(hw);
}

struct RunAggregate {
  double best = 0.0;
  double avg = 0.0;
  double mean_time_ms = 0.0;
  double mean_seed_ms = 0.0;
  std::vector<SearchStats> runs;
  Solution best_sol;
};

RunAggregate run_many(const Instance& inst, uint64_t seed0, int runs,
                      std::optional<double> time_limit_s, int k_max) {
  RunAggregate agg;
  double sum = 0.0, sum_t = 0.0, sum_s = 0.0;
  for (int r = 0; r < runs; ++r) {
    SearchParams params;
    params.seed = seed0 + uint64_t(r);
    params.k_max = k_max;
    params.time_limit_s = time_limit_s;
    GvnsResult res = gvns(inst, params);
    sum += res.stats.best_objective;
    sum_t += res.stats.time_ms;
    sum_s += res.stats.tsp_seed_time_ms;
    if (r == 0 || res.stats.best_objective < agg.best) {
      agg.best = res.stats.best_objective;
      agg.best_sol = res.best;
    }
    agg.runs.push_back(res.stats);
  }
  agg.avg = sum / runs;
  agg.mean_time_ms = sum_t / runs;
  agg.mean_seed_ms = sum_s / runs;
  return agg;
}

struct SolveArgs {
  std::string instance_path;
  std::string variant;
  uint64_t seed = 1;
  int runs = 1;
  int k_max = 0;  // 0 = default rule
  std::optional<double> time_limit_s;
  std::string out_path;
  std::string csv_path;
  std::optional<double> bks;
  bool stable_csv = false;
};

int cmd_solve(const SolveArgs& a) {
  Instance inst = load_auto(a.instance_path);
  apply_variant(inst, a.variant);
  const std::string label = instance_label(inst, a.instance_path);

  CsvSink sink(a.csv_path, a.stable_csv);
  RunAggregate agg;
  double sum = 0.0;
  for (int r = 0; r < a.runs; ++r) {
    SearchParams params;
    params.seed = a.seed + uint64_t(r);
    params.k_max = a.k_max;
    params.time_limit_s = a.time_limit_s;
    GvnsResult res = gvns(inst, params);
    sum += res.stats.best_objective;
    if (r == 0 || res.stats.best_objective < agg.best) {
      agg.best = res.stats.best_objective;
      agg.best_sol = res.best;
    }
    CsvRow row;
    row.instance = label;
    row.variant = a.variant;
    row.seed = res.stats.seed;
    row.best = res.stats.best_objective;
    row.avg = sum / (r + 1);  // running mean, mirrors report tables
    row.time_ms = res.stats.time_ms;
    row.tsp_seed_time_ms = res.stats.tsp_seed_time_ms;
    if (a.bks)
      row.gap_pct = 100.0 * (res.stats.best_objective - *a.bks) / *a.bks;
    if (!a.csv_path.empty()) sink.put(row);
  }

  if (!a.out_path.empty()) save_solution(agg.best_sol, a.out_path);
  std::cout << fmt::format(
      "{{\"instance\":\"{}\",\"variant\":\"{}\",\"runs\":{},\"best\":{},"
      "\"avg\":{}}}\n",
      label, a.variant, a.runs, agg.best, sum / a.runs);
  return kExitOk;
}

struct EmitArgs {
  std::string instance_path;
  std::string variant;
  std::string fmt = "lp";
  std::string out_path;
};

int cmd_emit(const EmitArgs& a) {
  Instance inst = load_auto(a.instance_path);
  apply_variant(inst, a.variant);
  Model model = build_model(inst);
  if (a.variant == "murray") model = adapt_murray(std::move(model), inst);
  if (a.fmt == "lp")
    emit_lp(model, a.out_path);
  else
    emit_mps(model, a.out_path);
  const ModelStats s = model_stats(model);
  std::cout << fmt::format(
      "{{\"n\":{},\"n_vars\":{},\"n_constrs\":{},\"n_binaries\":{},"
      "\"file\":\"{}\"}}\n",
      model.n, s.n_vars, s.n_constrs, s.n_binaries, a.out_path);
  return kExitOk;
}

int cmd_oracle(const std::string& instance_path) {
  const Instance inst = load_auto(instance_path);
  const Solution opt = brute_force_optimum(inst);
  std::cout << to_solution_json(opt) << "\n";
  return kExitOk;
}

struct BenchArgs {
  std::string dir;
  std::string variant;
  uint64_t seed = 1;
  int runs = 1;
  int k_max = 0;  // 0 = default rule
  std::optional<double> time_limit_s;
  std::string csv_path;
  std::string bks_path;
  bool stable_csv = false;
};

int cmd_bench(const BenchArgs& a) {
  std::vector<std::string> paths;
  if (!std::filesystem::is_directory(a.dir))
    throw IoError(fmt::format("'{}' is not a directory", a.dir));
  for (const auto& entry : std::filesystem::directory_iterator(a.dir))
    if (entry.is_regular_file()) paths.push_back(entry.path().string());
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) throw DataError(fmt::format("no files in '{}'", a.dir));

  std::map<std::string, double> bks;
  if (!a.bks_path.empty()) bks = load_bks(a.bks_path);

  struct Outcome {
    CsvRow row;
    std::string error;  // nonempty -> skipped file
  };
  std::vector<Outcome> results(paths.size());
  std::atomic<size_t> next{0};

  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= paths.size()) return;
      Outcome& out = results[i];
      try {
        Instance inst = load_auto(paths[i]);
        apply_variant(inst, a.variant);
        const RunAggregate agg =
            run_many(inst, a.seed, a.runs, a.time_limit_s, a.k_max);
        CsvRow& row = out.row;
        row.instance = instance_label(inst, paths[i]);
        row.variant = a.variant;
        row.seed = a.seed;
        row.best = agg.best;
        row.avg = agg.avg;
        row.time_ms = agg.mean_time_ms;
        row.tsp_seed_time_ms = agg.mean_seed_ms;
        if (const auto it = bks.find(row.instance); it != bks.end())
          row.gap_pct = 100.0 * (agg.best - it->second) / it->second;
      } catch (const Error& e) {
        out.error = e.what();
      }
    }
  };

  const int budget = std::min<int>(thread_budget(), int(paths.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < budget; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  CsvSink sink(a.csv_path, a.stable_csv);
  int failures = 0;
  for (size_t i = 0; i < paths.size(); ++i) {
    if (!results[i].error.empty()) {
      std::cerr << fmt::format("bench: skipping {}: {}\n", paths[i],
                               results[i].error);
      ++failures;
      continue;
    }
    sink.put(results[i].row);
  }
  if (failures == int(paths.size()))
    throw DataError("no instance in the directory could be processed");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FSTSP / TSP-D solver engine"};
  app.require_subcommand(1);

  SolveArgs sa;
  CLI::App* solve = app.add_subcommand("solve", "Run the GVNS heuristic");
  solve->add_option("--instance", sa.instance_path, "instance file")
      ->required();
  solve->add_option("--variant", sa.variant, "ponza|murray|tspd")
      ->required()
      ->check(CLI::IsMember({"ponza", "murray", "tspd"}));
  solve->add_option("--seed", sa.seed, "base RNG seed (run r uses seed+r)");
  solve->add_option("--runs", sa.runs, "independent runs")
      ->check(CLI::PositiveNumber);
  solve->add_option("--k-max", sa.k_max,
                    "outer-loop budget per restart (0 = size-based default)")
      ->check(CLI::NonNegativeNumber);
  double sa_tl = 0.0;
  CLI::Option* sa_tl_opt =
      solve->add_option("--time-limit", sa_tl, "wall-clock seconds per run");
  solve->add_option("--out", sa.out_path, "write best solution JSON here");
  solve->add_option("--csv", sa.csv_path, "append per-run rows here");
  double sa_bks = 0.0;
  CLI::Option* sa_bks_opt =
      solve->add_option("--bks", sa_bks, "best-known value for the gap column");
  solve->add_flag("--stable-csv", sa.stable_csv,
                  "zero the time columns (reproducible output)");

  EmitArgs ea;
  CLI::App* emit = app.add_subcommand("emit", "Write the MIP model file");
  emit->add_option("--instance", ea.instance_path, "instance file")->required();
  emit->add_option("--variant", ea.variant, "ponza|murray")
      ->required()
      ->check(CLI::IsMember({"ponza", "murray", "tspd"}));
  emit->add_option("--format", ea.fmt, "lp|mps (default lp)")
      ->check(CLI::IsMember({"lp", "mps"}));
  emit->add_option("--out", ea.out_path, "output model file")->required();

  std::string oracle_path;
  CLI::App* oracle = app.add_subcommand("oracle", "Exact optimum (n <= 8)");
  oracle->add_option("--instance", oracle_path, "instance file")->required();

  BenchArgs ba;
  CLI::App* bench = app.add_subcommand("bench", "Batch-run a directory");
  bench->add_option("--dir", ba.dir, "directory of instance files")
      ->required();
  bench->add_option("--variant", ba.variant, "ponza|murray|tspd")
      ->required()
      ->check(CLI::IsMember({"ponza", "murray", "tspd"}));
  bench->add_option("--seed", ba.seed, "base RNG seed");
  bench->add_option("--runs", ba.runs, "runs per instance")
      ->check(CLI::PositiveNumber);
  bench->add_option("--k-max", ba.k_max,
                    "outer-loop budget per restart (0 = size-based default)")
      ->check(CLI::NonNegativeNumber);
  double ba_tl = 0.0;
  CLI::Option* ba_tl_opt =
      bench->add_option("--time-limit", ba_tl, "wall-clock seconds per run");
  bench->add_option("--csv", ba.csv_path, "append aggregate rows here");
  bench->add_option("--bks", ba.bks_path,
                    "best-known values file: '<instance> <value>' lines");
  bench->add_flag("--stable-csv", ba.stable_csv,
                  "zero the time columns (reproducible output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*solve) {
      if (*sa_tl_opt) sa.time_limit_s = sa_tl;
      if (*sa_bks_opt) sa.bks = sa_bks;
      return cmd_solve(sa);
    }
    if (*emit) {
      if (ea.variant == "tspd") {
        std::cerr << "emit: the model targets the endurance-limited problem; "
                     "tspd is not supported\n";
        return kExitUsage;
      }
      return cmd_emit(ea);
    }
    if (*oracle) return cmd_oracle(oracle_path);
    if (*bench) {
      if (*ba_tl_opt) ba.time_limit_s = ba_tl;
      return cmd_bench(ba);
    }
  } catch (const SizeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSize;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
