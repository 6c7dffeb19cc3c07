#include "locaray/anneal.h"

#include <cmath>
#include <string>

namespace locaray {
namespace {

template <typename T>
T Uniform(std::mt19937_64& rng, T lo, T hi) {
  return std::uniform_int_distribution<T>(lo, hi)(rng);
}

bool IsLocating(const CoverageIndex& index) {
  return index.f1() == 0 && index.f2() == 0;
}

}  // namespace

std::string_view StrategyName(Strategy strategy) {
  return strategy == Strategy::kBaseline ? "baseline" : "proposed";
}

Strategy ParseStrategy(std::string_view name) {
  if (name == "baseline") return Strategy::kBaseline;
  if (name == "proposed") return Strategy::kProposed;
  throw ParseError("unknown strategy '" + std::string(name) +
                   "', expected baseline or proposed");
}

void AnnealParams::Validate() const {
  if (!(weight >= 0) || !std::isfinite(weight)) {
    throw DomainError("weight must be a finite non-negative number");
  }
  if (!(t_init > 0) || !std::isfinite(t_init)) {
    throw DomainError("initial temperature must be positive");
  }
  if (k_max < 1) throw DomainError("k_max must be at least 1");
  if (!(cooling > 0 && cooling < 1)) {
    throw DomainError("cooling rate must lie strictly between 0 and 1");
  }
}

Move SelectNeighborBaseline(const TestArray& array, std::mt19937_64& rng) {
  if (array.num_rows() == 0) throw NoNeighborError("array has no rows");
  const int row = Uniform(rng, 0, array.num_rows() - 1);
  const int factor = Uniform(rng, 0, array.num_factors() - 1);
  const int current = array.at(row, factor);
  int value = Uniform(rng, 0, array.model().levels(factor) - 2);
  if (value >= current) ++value;
  return Move::SetEntry(row, factor, value);
}

Move SelectNeighborProposed(const CoverageIndex& index, std::mt19937_64& rng) {
  const int m = index.num_rows();
  if (m == 0) throw NoNeighborError("array has no rows");
  const auto& catalog = index.catalog();

  if (index.f1() > 0) {
    auto uncovered = index.uncovered();
    const std::int32_t t =
        uncovered[Uniform<std::size_t>(rng, 0, uncovered.size() - 1)];
    const int row = Uniform(rng, 0, m - 1);
    return Move::OverwriteRow(row, catalog.At(t));
  }

  auto colliding = index.colliding();
  if (colliding.empty()) {
    throw std::logic_error("array is already locating; no neighbor to pick");
  }
  const std::int32_t t =
      colliding[Uniform<std::size_t>(rng, 0, colliding.size() - 1)];
  const int covered = index.RowCount(t);
  // When every row covers T there is no row to overwrite, so alter instead.
  bool alter = covered == m;
  if (!alter && covered > 1) alter = Uniform(rng, 0, 1) == 1;
  if (alter) {
    const int row = index.NthRow(t, Uniform(rng, 0, covered - 1));
    const Interaction interaction = catalog.At(t);
    const FactorValue pick =
        interaction.pairs()[Uniform(rng, 0, interaction.strength() - 1)];
    int value = Uniform(rng, 0, index.array().model().levels(pick.factor) - 2);
    if (value >= pick.value) ++value;
    return Move::SetEntry(row, pick.factor, value);
  }
  const int row = index.NthRowOutside(t, Uniform(rng, 0, m - covered - 1));
  return Move::OverwriteRow(row, catalog.At(t));
}

bool AcceptMove(double delta, double temperature, double uniform01) {
  if (delta <= 0) return true;
  return uniform01 < std::exp(-delta / temperature);
}

AnnealOutcome Anneal(const SutModel& model, int strength, int rows,
                     const AnnealParams& params, std::mt19937_64& rng,
                     Clock::time_point deadline,
                     const IterationObserver& observer) {
  params.Validate();
  if (strength < 1 || strength > model.num_factors()) {
    throw DomainError("strength " + std::to_string(strength) +
                      " is outside 1.." + std::to_string(model.num_factors()));
  }
  if (rows < 0) throw DomainError("row count must be non-negative");

  AnnealOutcome out;
  if (Clock::now() >= deadline) {
    out.timed_out = true;
    return out;
  }
  // No rows cover nothing, and there is no neighbor to move to.
  if (rows == 0) return out;

  CoverageIndex index(RandomArray(model, rows, rng), strength,
                      params.memory_budget);
  if (IsLocating(index)) {
    out.array = index.array();
    return out;
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double temperature = params.t_init;
  for (std::int64_t i = 0; i < params.k_max; ++i) {
    if (Clock::now() >= deadline) {
      out.timed_out = true;
      return out;
    }
    Move move = params.strategy == Strategy::kBaseline
                    ? SelectNeighborBaseline(index.array(), rng)
                    : SelectNeighborProposed(index, rng);
    const double delta = index.Apply(move, params.weight);
    out.iterations = i + 1;
    if (IsLocating(index)) {
      if (observer) {
        observer({i, temperature, delta, true, 0.0});
      }
      out.array = index.array();
      return out;
    }
    const bool accepted =
        delta <= 0 || AcceptMove(delta, temperature, unit(rng));
    if (!accepted) index.Undo(move);
    if (observer) {
      observer({i, temperature, delta, accepted, index.Cost(params.weight)});
    }
    temperature *= params.cooling;
  }
  return out;
}

}  // namespace locaray
