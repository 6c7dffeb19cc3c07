#include "locaray/search.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

namespace locaray {
namespace {

using u128 = unsigned __int128;

// Terms are kept below 2^126 so squares of their roots stay representable.
constexpr u128 kTermLimit = u128{1} << 126;

u128 CheckedMul(u128 a, u128 b) {
  if (a != 0 && b > kTermLimit / a) {
    throw DomainError("bound terms overflow 128-bit arithmetic");
  }
  return a * b;
}

u128 CheckedAdd(u128 a, u128 b) {
  if (a > kTermLimit - b) {
    throw DomainError("bound terms overflow 128-bit arithmetic");
  }
  return a + b;
}

u128 Binomial(int n, int r) {
  u128 c = 1;
  for (int i = 1; i <= r; ++i) {
    c = CheckedMul(c, static_cast<u128>(n - r + i)) / static_cast<u128>(i);
  }
  return c;
}

u128 ISqrt(u128 x) {
  u128 s = static_cast<u128>(std::sqrt(static_cast<long double>(x)));
  while (s * s > x) --s;
  while ((s + 1) * (s + 1) <= x) ++s;
  return s;
}

std::int64_t ToInt64(u128 x) {
  if (x > static_cast<u128>(std::numeric_limits<std::int64_t>::max())) {
    throw DomainError("bound does not fit in 64 bits");
  }
  return static_cast<std::int64_t>(x);
}

}  // namespace

std::int64_t LocatingLowerBound(int k, int t, int v) {
  if (t < 1 || t > k) {
    throw DomainError("strength " + std::to_string(t) + " is outside 1.." +
                      std::to_string(k));
  }
  if (v < 2) throw DomainError("domain size must be at least 2");

  const u128 c = Binomial(k, t);
  u128 vt = 1;
  for (int i = 0; i < t; ++i) vt = CheckedMul(vt, static_cast<u128>(v));

  // ceil(2 C v^t / (1 + C))
  const u128 num = CheckedMul(CheckedMul(2, c), vt);
  const u128 den = c + 1;
  const u128 first = (num + den - 1) / den;

  // ceil(-3/2 - C + sqrt(C^2 + (3 + 6 v^t) C + 9/4)), doubled inside the
  // root: ceil((sqrt(D) - 3 - 2C) / 2) with D = 4C^2 + (12 + 24 v^t) C + 9.
  // D exceeds (2C + 3)^2, so the numerator is positive.
  const u128 d =
      CheckedAdd(CheckedAdd(CheckedMul(4, CheckedMul(c, c)),
                            CheckedMul(CheckedAdd(12, CheckedMul(24, vt)), c)),
                 9);
  u128 root = ISqrt(d);
  if (root * root != d) ++root;  // smallest integer at least sqrt(D)
  const u128 second = (root - 3 - 2 * c + 1) / 2;

  return ToInt64(std::min(first, second));
}

SizeBounds InitialBounds(const SutModel& model, int strength) {
  const int k = model.num_factors();
  return {LocatingLowerBound(k, strength, model.min_levels()),
          LocatingLowerBound(k, strength, model.max_levels() + 1)};
}

void SearchBudget::Validate() const {
  if (max_failures < 1) throw DomainError("max retries must be at least 1");
  if (!(timeout.count() > 0)) throw DomainError("timeout must be positive");
  if (workers < 1) throw DomainError("workers must be at least 1");
}

BinarySearchResult BinarySearch(std::int64_t low, std::int64_t high,
                                const SizeProbe& probe) {
  BinarySearchResult result;
  while (low <= high) {
    const std::int64_t size = low + (high - low) / 2;
    result.probed.push_back(static_cast<int>(size));
    ProbeResult p = probe(static_cast<int>(size));
    if (p.array) {
      result.array = std::move(p.array);
      high = size - 1;
    } else {
      low = size + 1;
    }
    if (p.timed_out) {
      result.timed_out = true;
      break;
    }
  }
  return result;
}

SearchResult RunTwoPhase(SizeBounds bounds, const SizeProbe& probe,
                         int max_failures,
                         const std::function<double()>& elapsed) {
  SearchResult result;
  auto recorded = [&](Phase phase) {
    return [&, phase](int rows) {
      ProbeResult p = probe(rows);
      const double now = elapsed();
      result.history.push_back(
          {rows, p.array.has_value(), p.timed_out, phase, now});
      if (p.array) result.best_found_s = now;
      return p;
    };
  };

  constexpr std::int64_t kMaxRows = std::numeric_limits<int>::max() / 2;
  const std::int64_t low = std::max<std::int64_t>(bounds.low, 1);
  std::int64_t high = std::min(bounds.high, kMaxRows);

  while (!result.array) {
    BinarySearchResult pass = BinarySearch(low, high, recorded(Phase::kBinarySearch));
    result.array = std::move(pass.array);
    if (pass.timed_out) {
      result.timed_out = true;
      result.elapsed_s = elapsed();
      return result;
    }
    if (!result.array) {
      if (high >= kMaxRows) break;
      high = std::min(std::max<std::int64_t>(2 * high, 1), kMaxRows);
    }
  }

  if (result.array) {
    auto shrink = recorded(Phase::kShrink);
    int failures = 0;
    std::int64_t size = result.array->num_rows() - 1;
    while (failures < max_failures && low <= size) {
      ProbeResult p = shrink(static_cast<int>(size));
      if (p.array) {
        result.array = std::move(p.array);
        failures = 0;
        --size;
      } else if (p.timed_out) {
        result.timed_out = true;
        break;
      } else {
        ++failures;
      }
    }
  }
  result.elapsed_s = elapsed();
  return result;
}

std::mt19937_64 RunRng(std::uint64_t root_seed, int worker,
                       std::uint64_t run_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(root_seed),
                    static_cast<std::uint32_t>(root_seed >> 32),
                    static_cast<std::uint32_t>(worker),
                    static_cast<std::uint32_t>(run_index),
                    static_cast<std::uint32_t>(run_index >> 32)};
  return std::mt19937_64(seq);
}

namespace {

SearchResult ConstructOne(const SutModel& model, int strength,
                          const AnnealParams& params,
                          const SearchBudget& budget, int worker,
                          Clock::time_point start) {
  const auto deadline =
      start + std::chrono::duration_cast<Clock::duration>(budget.timeout);
  std::uint64_t run = 0;
  SizeProbe probe = [&](int rows) {
    std::mt19937_64 rng = RunRng(budget.seed, worker, run++);
    AnnealOutcome outcome = Anneal(model, strength, rows, params, rng, deadline);
    return ProbeResult{std::move(outcome.array), outcome.timed_out};
  };
  auto elapsed = [start] {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };
  SearchResult result = RunTwoPhase(InitialBounds(model, strength), probe,
                                    budget.max_failures, elapsed);
  result.worker = worker;
  return result;
}

}  // namespace

SearchResult Construct(const SutModel& model, int strength,
                       const AnnealParams& params, const SearchBudget& budget) {
  params.Validate();
  budget.Validate();
  if (strength < 1 || strength > model.num_factors()) {
    throw DomainError("strength " + std::to_string(strength) +
                      " is outside 1.." + std::to_string(model.num_factors()));
  }
  const Clock::time_point start = Clock::now();
  if (budget.workers == 1) {
    return ConstructOne(model, strength, params, budget, 0, start);
  }

  std::vector<SearchResult> results(budget.workers);
  std::vector<std::exception_ptr> errors(budget.workers);
  {
    std::vector<std::jthread> threads;
    for (int w = 0; w < budget.workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          results[w] = ConstructOne(model, strength, params, budget, w, start);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  int best = -1;
  for (int w = 0; w < budget.workers; ++w) {
    if (!results[w].array) continue;
    if (best < 0 || results[w].rows() < results[best].rows()) best = w;
  }
  SearchResult merged = std::move(results[best < 0 ? 0 : best]);
  for (const SearchResult& r : results) {
    merged.timed_out = merged.timed_out || r.timed_out;
    merged.elapsed_s = std::max(merged.elapsed_s, r.elapsed_s);
  }
  return merged;
}

}  // namespace locaray
