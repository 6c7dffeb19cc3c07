#ifndef LOCARAY_SEARCH_H_
#define LOCARAY_SEARCH_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "locaray/anneal.h"
#include "locaray/model.h"

namespace locaray {

// Lower bound on the size of a (1-bar, t)-locating array with k factors of
// v values each:
//   min( ceil(2 C v^t / (1 + C)),
//        ceil(-3/2 - C + sqrt(C^2 + (3 + 6 v^t) C + 9/4)) ),  C = binom(k, t).
// Evaluated in exact integer arithmetic. Throws DomainError on invalid
// arguments or when the terms overflow 128 bits.
std::int64_t LocatingLowerBound(int k, int t, int v);

struct SizeBounds {
  std::int64_t low = 0;
  std::int64_t high = 0;
};

// low from the smallest domain size, high from the largest plus one. The
// high value is a heuristic and may undershoot the true optimum.
SizeBounds InitialBounds(const SutModel& model, int strength);

struct SearchBudget {
  int max_failures = 3;  // consecutive Phase 2 failures before stopping
  std::chrono::duration<double> timeout = std::chrono::seconds(3600);
  std::uint64_t seed = 1;
  int workers = 1;

  void Validate() const;
};

enum class Phase { kBinarySearch, kShrink };

struct ProbeRecord {
  int rows = 0;
  bool success = false;
  bool timed_out = false;
  Phase phase = Phase::kBinarySearch;
  double elapsed_s = 0;  // since the start of the search
};

// One annealing attempt at a fixed size.
struct ProbeResult {
  std::optional<TestArray> array;
  bool timed_out = false;
};
using SizeProbe = std::function<ProbeResult(int rows)>;

struct BinarySearchResult {
  std::optional<TestArray> array;  // smallest found
  bool timed_out = false;
  std::vector<int> probed;         // sizes in probe order
};

// Halving search over [low, high]: probe floor((low + high) / 2), then move
// high below it on success or low above it on failure. Stops early when a
// probe reports a timeout.
BinarySearchResult BinarySearch(std::int64_t low, std::int64_t high,
                                const SizeProbe& probe);

struct SearchResult {
  std::optional<TestArray> array;
  std::vector<ProbeRecord> history;
  bool timed_out = false;
  double elapsed_s = 0;          // total wall time
  double best_found_s = 0;       // when the returned array was found
  int worker = 0;                // worker that produced `array`

  int rows() const { return array ? array->num_rows() : 0; }
};

// Repeats binary search until an array is found, doubling `high` after each
// fully failed pass (Phase 1), then tries one row fewer at a time until
// `max_failures` consecutive failures or `low` is reached (Phase 2).
// `elapsed` reports seconds since the search began.
SearchResult RunTwoPhase(SizeBounds bounds, const SizeProbe& probe,
                         int max_failures,
                         const std::function<double()>& elapsed);

// Seed of the n-th annealing run of a worker: std::seed_seq over the two
// 32-bit halves of the root seed, the worker index, and n.
std::mt19937_64 RunRng(std::uint64_t root_seed, int worker,
                       std::uint64_t run_index);

// Full construction with timeout. With several workers, each runs an
// independent search and the smallest array wins, ties to the lowest
// worker index. Propagates CapacityError.
SearchResult Construct(const SutModel& model, int strength,
                       const AnnealParams& params, const SearchBudget& budget);

}  // namespace locaray

#endif  // LOCARAY_SEARCH_H_
