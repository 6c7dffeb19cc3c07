#ifndef LOCARAY_ANNEAL_H_
#define LOCARAY_ANNEAL_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string_view>

#include "locaray/cost.h"
#include "locaray/model.h"

namespace locaray {

using Clock = std::chrono::steady_clock;

enum class Strategy { kBaseline, kProposed };

std::string_view StrategyName(Strategy strategy);
// "baseline" or "proposed"; throws ParseError otherwise.
Strategy ParseStrategy(std::string_view name);

struct AnnealParams {
  double weight = 4.0;
  double t_init = 0.5;
  std::int64_t k_max = 2048;
  double cooling = 0.999;
  Strategy strategy = Strategy::kProposed;
  std::size_t memory_budget = kDefaultMemoryBudget;

  // Throws DomainError if a field is out of range.
  void Validate() const;
};

// The array has no rows, so it has no neighbors.
class NoNeighborError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Uniform entry, then a uniform different value for it.
Move SelectNeighborBaseline(const TestArray& array, std::mt19937_64& rng);

// Targets an uncovered interaction when one exists, otherwise one that
// shares its row set with another interaction. Throws std::logic_error if
// the index is already locating (f1 = f2 = 0).
Move SelectNeighborProposed(const CoverageIndex& index, std::mt19937_64& rng);

// Metropolis rule: improvements and ties are always taken; otherwise the
// move is taken when `uniform01` < exp(-delta / temperature).
bool AcceptMove(double delta, double temperature, double uniform01);

struct IterationTrace {
  std::int64_t iteration = 0;
  double temperature = 0;
  double delta = 0;
  bool accepted = false;
  double cost = 0;  // after the accept/reject decision
};

using IterationObserver = std::function<void(const IterationTrace&)>;

struct AnnealOutcome {
  std::optional<TestArray> array;  // locating, exactly `rows` rows
  bool timed_out = false;
  std::int64_t iterations = 0;
};

// Simulated annealing for a (1-bar, t)-locating array of `rows` rows.
// Starts from a random array, tries at most k_max neighbors, and returns as
// soon as the cost reaches zero. The deadline is checked once per iteration.
AnnealOutcome Anneal(const SutModel& model, int strength, int rows,
                     const AnnealParams& params, std::mt19937_64& rng,
                     Clock::time_point deadline = Clock::time_point::max(),
                     const IterationObserver& observer = nullptr);

}  // namespace locaray

#endif  // LOCARAY_ANNEAL_H_
