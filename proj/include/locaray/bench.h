#ifndef LOCARAY_BENCH_H_
#define LOCARAY_BENCH_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "locaray/anneal.h"
#include "locaray/search.h"

namespace locaray {

struct SuiteEntry {
  std::string name;
  std::string model_spec;
};

// One "name,model" per line; blank lines and '#' comments are skipped. The
// model is everything after the first comma.
std::vector<SuiteEntry> ReadSuite(std::istream& in);
std::vector<SuiteEntry> ReadSuiteFile(const std::filesystem::path& path);

struct BenchRun {
  int run = 0;
  std::uint64_t seed = 0;
  bool finished = false;  // completed before the timeout
  std::optional<int> rows;
  double total_s = 0;
  double best_found_s = 0;
};

// Per-instance summary. x counts finished runs and y counts runs that found
// at least one locating array, so x <= y <= runs. Time and row statistics
// are taken over the y runs, with time measured to the last array found.
struct BenchRecord {
  std::string name;
  std::string model_spec;
  int runs = 0;
  int x = 0;
  int y = 0;
  std::optional<double> mean_time_s;
  std::optional<double> mean_rows;
  std::optional<int> min_rows;
  std::vector<BenchRun> details;
};

struct BenchConfig {
  int runs = 5;
  int strength = 2;
  double timeout_s = 3600;
  std::uint64_t seed = 1;
  int workers = 1;  // parallel runs of one instance
  AnnealParams params;
  int max_failures = 3;
};

// Runs every instance `runs` times; run r uses seed (config.seed + r).
// `log`, when given, receives one line per run as it completes.
std::vector<BenchRecord> RunBench(const std::vector<SuiteEntry>& suite,
                                  const BenchConfig& config,
                                  std::ostream* log = nullptr);

inline constexpr const char* kBenchCsvHeader =
    "name,model,x,y,runs,mean_time_s,mean_rows,min_rows";

// Header line plus one line per record, LF endings; missing statistics are
// left empty.
void WriteBenchCsv(std::ostream& out, const std::vector<BenchRecord>& records);
void WriteBenchRunLog(std::ostream& out, const BenchRecord& record);

}  // namespace locaray

#endif  // LOCARAY_BENCH_H_
