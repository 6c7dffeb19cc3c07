#include "locaray/verify.h"

#include <map>

namespace locaray {
namespace {

void CheckStrength(const TestArray& array, int strength) {
  if (strength < 1 || strength > array.num_factors()) {
    throw DomainError("strength " + std::to_string(strength) +
                      " is outside 1.." + std::to_string(array.num_factors()));
  }
}

// Calls fn(interaction) for every strength-t interaction in canonical order,
// built by plain nested enumeration rather than the catalog.
template <typename Fn>
void ForEachInteraction(const SutModel& model, int strength, Fn&& fn) {
  const int k = model.num_factors();
  std::vector<int> factors(strength);
  for (int i = 0; i < strength; ++i) factors[i] = i;
  while (true) {
    std::vector<int> values(strength, 0);
    while (true) {
      std::vector<FactorValue> pairs;
      for (int i = 0; i < strength; ++i) pairs.push_back({factors[i], values[i]});
      fn(Interaction(std::move(pairs)));
      int i = strength - 1;
      while (i >= 0 && values[i] == model.levels(factors[i]) - 1) {
        values[i] = 0;
        --i;
      }
      if (i < 0) break;
      ++values[i];
    }
    int i = strength - 1;
    while (i >= 0 && factors[i] == k - strength + i) --i;
    if (i < 0) break;
    ++factors[i];
    for (int j = i + 1; j < strength; ++j) factors[j] = factors[j - 1] + 1;
  }
}

}  // namespace

std::int64_t VerifyReport::collision_count() const {
  std::int64_t n = 0;
  for (const CollisionGroup& g : collision_groups) {
    const auto s = static_cast<std::int64_t>(g.members.size());
    n += s * (s - 1) / 2;
  }
  return n;
}

std::vector<VerifyReport::Collision> VerifyReport::Collisions(
    std::int64_t limit) const {
  std::vector<Collision> out;
  for (const CollisionGroup& g : collision_groups) {
    for (std::size_t a = 0; a < g.members.size(); ++a) {
      for (std::size_t b = a + 1; b < g.members.size(); ++b) {
        if (static_cast<std::int64_t>(out.size()) >= limit) return out;
        out.push_back({g.members[a], g.members[b], g.rows});
      }
    }
  }
  return out;
}

VerifyReport Verify(const TestArray& array, int strength) {
  CheckStrength(array, strength);
  VerifyReport report;
  report.strength = strength;

  std::map<RowSet, std::vector<Interaction>> by_rows;
  ForEachInteraction(array.model(), strength, [&](Interaction t) {
    ++report.num_interactions;
    RowSet rows = Rho(array, t);
    if (rows.empty()) report.uncovered.push_back(t);
    by_rows[std::move(rows)].push_back(std::move(t));
  });

  for (auto& [rows, members] : by_rows) {
    if (members.size() >= 2) {
      report.collision_groups.push_back({rows, std::move(members)});
    }
  }
  report.is_covering = report.uncovered.empty();
  report.is_locating_exact1 = report.collision_groups.empty();
  report.is_locating_1bar = report.is_covering && report.is_locating_exact1;
  return report;
}

std::vector<Interaction> LocateFault(const TestArray& array,
                                     const RowSet& failing, int strength) {
  CheckStrength(array, strength);
  if (failing.capacity() != array.num_rows()) {
    throw DomainError("failing set sized for " +
                      std::to_string(failing.capacity()) + " rows, array has " +
                      std::to_string(array.num_rows()));
  }
  std::vector<Interaction> out;
  if (failing.empty()) return out;
  ForEachInteraction(array.model(), strength, [&](Interaction t) {
    if (Rho(array, t) == failing) out.push_back(std::move(t));
  });
  return out;
}

}  // namespace locaray
