#include "cli.h"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "locaray/anneal.h"
#include "locaray/array_io.h"
#include "locaray/bench.h"
#include "locaray/cost.h"
#include "locaray/model.h"
#include "locaray/search.h"
#include "locaray/verify.h"

namespace locaray::cli {
namespace {

constexpr int kShownCollisions = 20;

// Annealing knobs shared by generate and bench.
struct AnnealFlags {
  double weight = 4.0;
  double t_init = 0.5;
  std::int64_t k_max = 2048;
  double cooling = 0.999;
  int max_retries = 3;
  std::string strategy = "proposed";

  void Register(CLI::App& app) {
    app.add_option("--weight", weight, "Weight of uncovered interactions")
        ->capture_default_str();
    app.add_option("--t-init", t_init, "Initial temperature")
        ->capture_default_str();
    app.add_option("--k-max", k_max, "Iterations per annealing run")
        ->capture_default_str();
    app.add_option("--cooling", cooling, "Geometric cooling rate")
        ->capture_default_str();
    app.add_option("--max-retries", max_retries,
                   "Consecutive failures before shrinking stops")
        ->capture_default_str();
    app.add_option("--strategy", strategy, "Neighbor selection")
        ->check(CLI::IsMember({"proposed", "baseline"}))
        ->capture_default_str();
  }

  AnnealParams Params() const {
    AnnealParams p;
    p.weight = weight;
    p.t_init = t_init;
    p.k_max = k_max;
    p.cooling = cooling;
    p.strategy = ParseStrategy(strategy);
    p.memory_budget = MemoryBudgetFromEnv();
    return p;
  }
};

// Parses "4,5,10" (1-based) into a row set for an array of `rows` rows.
RowSet ParseFailing(const std::string& text, int rows) {
  std::vector<int> members;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    const auto first = token.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    std::size_t used = 0;
    int row = 0;
    try {
      row = std::stoi(token, &used);
    } catch (const std::exception&) {
      throw ParseError("bad row index '" + token + "'");
    }
    if (token.find_first_not_of(" \t", used) != std::string::npos) {
      throw ParseError("bad row index '" + token + "'");
    }
    if (row < 1 || row > rows) {
      throw DomainError("failing row " + std::to_string(row) +
                        " is outside 1.." + std::to_string(rows));
    }
    members.push_back(row - 1);
  }
  return RowSet(rows, members);
}

void PrintReport(std::ostream& out, const VerifyReport& r, int rows,
                 int factors) {
  out << "rows=" << rows << '\n'
      << "factors=" << factors << '\n'
      << "strength=" << r.strength << '\n'
      << "interactions=" << r.num_interactions << '\n'
      << "is_covering=" << (r.is_covering ? "true" : "false") << '\n'
      << "is_locating_exact1=" << (r.is_locating_exact1 ? "true" : "false")
      << '\n'
      << "is_locating_1bar=" << (r.is_locating_1bar ? "true" : "false") << '\n'
      << "uncovered=" << r.uncovered.size() << '\n'
      << "collisions=" << r.collision_count() << '\n';

  out << "# " << (r.is_locating_1bar ? "locating" : "NOT locating")
      << " at strength " << r.strength << ": " << r.uncovered.size()
      << " uncovered, " << r.collision_count() << " colliding pairs\n";
  for (std::size_t i = 0; i < r.uncovered.size() && i < kShownCollisions; ++i) {
    out << "# uncovered " << r.uncovered[i].ToString() << '\n';
  }
  for (const auto& c : r.Collisions(kShownCollisions)) {
    out << "# collision " << c.first.ToString() << ' ' << c.second.ToString()
        << " rows {" << c.rows.ToString() << "}\n";
  }
  if (r.collision_count() > kShownCollisions) {
    out << "# ... " << r.collision_count() - kShownCollisions
        << " more collisions\n";
  }
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Build and check (1-bar, t)-locating arrays", "locaray"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "Construct a locating array");
  std::string gen_model;
  int gen_strength = 2;
  std::uint64_t gen_seed = 1;
  double gen_timeout = 3600;
  int gen_workers = 1;
  std::string gen_out;
  AnnealFlags gen_flags;
  generate->add_option("--model", gen_model, "Model, e.g. \"2^13 4^5\"")
      ->required();
  generate->add_option("--strength", gen_strength, "Interaction strength t")
      ->required();
  generate->add_option("--seed", gen_seed, "Root seed")->capture_default_str();
  generate->add_option("--timeout", gen_timeout, "Wall-clock seconds")
      ->capture_default_str();
  generate->add_option("--workers", gen_workers, "Independent parallel searches")
      ->capture_default_str();
  generate->add_option("--out", gen_out, "Array file to write")->required();
  gen_flags.Register(*generate);

  // verify
  auto* verify = app.add_subcommand("verify", "Check the locating property");
  std::string ver_array;
  std::optional<int> ver_strength;
  verify->add_option("--array", ver_array, "Array file")->required();
  verify->add_option("--strength", ver_strength,
                     "Strength (defaults to the file's)");

  // bound
  auto* bound = app.add_subcommand("bound", "Print the initial size bounds");
  std::string bound_model;
  int bound_strength = 2;
  bound->add_option("--model", bound_model, "Model spec")->required();
  bound->add_option("--strength", bound_strength, "Interaction strength t")
      ->required();

  // locate
  auto* locate = app.add_subcommand("locate", "Find the faulty interaction");
  std::string loc_array;
  std::string loc_failing;
  std::optional<int> loc_strength;
  locate->add_option("--array", loc_array, "Array file")->required();
  locate->add_option("--failing", loc_failing,
                     "Failing rows, 1-based, comma separated")
      ->required();
  locate->add_option("--strength", loc_strength,
                     "Strength (defaults to the file's)");

  // bench
  auto* bench = app.add_subcommand("bench", "Run a suite of instances");
  std::string bench_suite;
  int bench_runs = 5;
  double bench_timeout = 3600;
  int bench_strength = 2;
  std::uint64_t bench_seed = 1;
  int bench_workers = 1;
  std::string bench_out;
  std::string bench_log;
  AnnealFlags bench_flags;
  bench->add_option("--suite", bench_suite, "File of name,model lines")
      ->required();
  bench->add_option("--runs", bench_runs, "Runs per instance")
      ->capture_default_str();
  bench->add_option("--timeout", bench_timeout, "Seconds per run")
      ->capture_default_str();
  bench->add_option("--strength", bench_strength, "Interaction strength t")
      ->capture_default_str();
  bench->add_option("--seed", bench_seed, "Seed of run 0")
      ->capture_default_str();
  bench->add_option("--workers", bench_workers, "Parallel runs")
      ->capture_default_str();
  bench->add_option("--out", bench_out, "CSV path (default: stdout)");
  bench->add_option("--log", bench_log,
                    "Per-run log (default: <out>.runs.log, or stderr)");
  bench_flags.Register(*bench);

  std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*generate) {
      const SutModel model = ParseModel(gen_model);
      AnnealParams params = gen_flags.Params();
      SearchBudget budget;
      budget.max_failures = gen_flags.max_retries;
      budget.timeout = std::chrono::duration<double>(gen_timeout);
      budget.seed = gen_seed;
      budget.workers = gen_workers;
      SearchResult result = Construct(model, gen_strength, params, budget);
      out << "model=" << model.ToSpec() << '\n'
          << "strength=" << gen_strength << '\n'
          << "seed=" << gen_seed << '\n'
          << "strategy=" << StrategyName(params.strategy) << '\n'
          << "weight=" << params.weight << '\n'
          << "t_init=" << params.t_init << '\n'
          << "k_max=" << params.k_max << '\n'
          << "cooling=" << params.cooling << '\n'
          << "max_retries=" << budget.max_failures << '\n'
          << "workers=" << budget.workers << '\n'
          << "timed_out=" << (result.timed_out ? "true" : "false") << '\n'
          << "elapsed_s=" << std::fixed << std::setprecision(1)
          << result.elapsed_s << '\n'
          << "probes=" << result.history.size() << '\n';
      if (!result.array) {
        out << "rows=none\n";
        err << "no locating array found within " << gen_timeout << " s\n";
        return kExitNoArray;
      }
      WriteArrayFile(gen_out, ArrayFile{*result.array, gen_strength});
      out << "rows=" << result.rows() << '\n' << "out=" << gen_out << '\n';
      return kExitOk;
    }

    if (*verify) {
      ArrayFile file = ReadArrayFile(ver_array);
      const int t = ver_strength.value_or(file.strength);
      VerifyReport report = Verify(file.array, t);
      PrintReport(out, report, file.array.num_rows(),
                  file.array.num_factors());
      return report.is_locating_1bar ? kExitOk : kExitPropertyFails;
    }

    if (*bound) {
      const SizeBounds b = InitialBounds(ParseModel(bound_model), bound_strength);
      out << "low=" << b.low << " high=" << b.high << '\n';
      return kExitOk;
    }

    if (*locate) {
      ArrayFile file = ReadArrayFile(loc_array);
      const int t = loc_strength.value_or(file.strength);
      const RowSet failing = ParseFailing(loc_failing, file.array.num_rows());
      const auto faults = LocateFault(file.array, failing, t);
      if (faults.empty()) out << "none\n";
      for (const Interaction& f : faults) out << f.ToString() << '\n';
      return kExitOk;
    }

    if (*bench) {
      BenchConfig config;
      config.runs = bench_runs;
      config.strength = bench_strength;
      config.timeout_s = bench_timeout;
      config.seed = bench_seed;
      config.workers = bench_workers;
      config.params = bench_flags.Params();
      config.max_failures = bench_flags.max_retries;
      if (config.runs < 0) throw DomainError("--runs must be non-negative");
      const auto suite = ReadSuiteFile(bench_suite);

      std::ofstream log_file;
      std::ostream* log = &err;
      std::string log_path = bench_log;
      if (log_path.empty() && !bench_out.empty()) {
        log_path = bench_out + ".runs.log";
      }
      if (!log_path.empty()) {
        log_file.open(log_path, std::ios::binary);
        if (!log_file) throw ParseError("cannot write " + log_path);
        log = &log_file;
      }
      const auto records = RunBench(suite, config, log);
      if (bench_out.empty()) {
        WriteBenchCsv(out, records);
      } else {
        std::ofstream csv(bench_out, std::ios::binary);
        if (!csv) throw ParseError("cannot write " + bench_out);
        WriteBenchCsv(csv, records);
      }
      return kExitOk;
    }
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << '\n'
        << "interactions=" << e.num_interactions() << '\n';
    return kExitCapacity;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace locaray::cli
