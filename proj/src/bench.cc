#include "locaray/bench.h"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace locaray {
namespace {

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string OneDecimal(double x) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(1) << x;
  return os.str();
}

BenchRun RunOnce(const SutModel& model, const BenchConfig& config, int run) {
  SearchBudget budget;
  budget.max_failures = config.max_failures;
  budget.timeout = std::chrono::duration<double>(config.timeout_s);
  budget.seed = config.seed + static_cast<std::uint64_t>(run);
  SearchResult r = Construct(model, config.strength, config.params, budget);
  BenchRun out;
  out.run = run;
  out.seed = budget.seed;
  out.finished = !r.timed_out;
  if (r.array) out.rows = r.rows();
  out.total_s = r.elapsed_s;
  out.best_found_s = r.best_found_s;
  return out;
}

}  // namespace

std::vector<SuiteEntry> ReadSuite(std::istream& in) {
  std::vector<SuiteEntry> suite;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto comma = trimmed.find(',');
    if (comma == std::string::npos) {
      throw ParseError("suite line " + std::to_string(line_no) +
                       ": expected 'name,model'");
    }
    SuiteEntry entry{Trim(trimmed.substr(0, comma)),
                     Trim(trimmed.substr(comma + 1))};
    ParseModel(entry.model_spec);  // reject bad models up front
    suite.push_back(std::move(entry));
  }
  return suite;
}

std::vector<SuiteEntry> ReadSuiteFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read suite file " + path.string());
  return ReadSuite(in);
}

std::vector<BenchRecord> RunBench(const std::vector<SuiteEntry>& suite,
                                  const BenchConfig& config,
                                  std::ostream* log) {
  std::vector<BenchRecord> records;
  std::mutex log_mutex;
  for (const SuiteEntry& entry : suite) {
    const SutModel model = ParseModel(entry.model_spec);
    BenchRecord record;
    record.name = entry.name;
    record.model_spec = model.ToSpec();
    record.runs = config.runs;
    record.details.resize(config.runs);

    auto work = [&](int run) {
      record.details[run] = RunOnce(model, config, run);
      if (log) {
        std::lock_guard lock(log_mutex);
        BenchRecord single;
        single.name = record.name;
        single.details = {record.details[run]};
        WriteBenchRunLog(*log, single);
      }
    };
    const int workers = std::max(1, std::min(config.workers, config.runs));
    if (workers == 1) {
      for (int run = 0; run < config.runs; ++run) work(run);
    } else {
      std::vector<std::exception_ptr> errors(config.runs);
      std::atomic<int> next{0};
      {
        std::vector<std::jthread> threads;
        for (int w = 0; w < workers; ++w) {
          threads.emplace_back([&] {
            for (int run; (run = next++) < config.runs;) {
              try {
                work(run);
              } catch (...) {
                errors[run] = std::current_exception();
              }
            }
          });
        }
      }
      for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }

    double time_sum = 0;
    double rows_sum = 0;
    for (const BenchRun& r : record.details) {
      if (r.finished) ++record.x;
      if (!r.rows) continue;
      ++record.y;
      time_sum += r.best_found_s;
      rows_sum += *r.rows;
      record.min_rows =
          record.min_rows ? std::min(*record.min_rows, *r.rows) : *r.rows;
    }
    if (record.y > 0) {
      record.mean_time_s = time_sum / record.y;
      record.mean_rows = rows_sum / record.y;
    }
    records.push_back(std::move(record));
  }
  return records;
}

void WriteBenchCsv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << kBenchCsvHeader << '\n';
  for (const BenchRecord& r : records) {
    out << CsvField(r.name) << ',' << CsvField(r.model_spec) << ',' << r.x
        << ',' << r.y << ',' << r.runs << ','
        << (r.mean_time_s ? OneDecimal(*r.mean_time_s) : "") << ','
        << (r.mean_rows ? OneDecimal(*r.mean_rows) : "") << ','
        << (r.min_rows ? std::to_string(*r.min_rows) : "") << '\n';
  }
}

void WriteBenchRunLog(std::ostream& out, const BenchRecord& record) {
  for (const BenchRun& r : record.details) {
    out << "instance=" << record.name << " run=" << r.run << " seed=" << r.seed
        << " finished=" << (r.finished ? 1 : 0)
        << " rows=" << (r.rows ? std::to_string(*r.rows) : "-")
        << " total_s=" << OneDecimal(r.total_s)
        << " best_found_s=" << OneDecimal(r.best_found_s) << '\n';
  }
  out.flush();
}

}  // namespace locaray
