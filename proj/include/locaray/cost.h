#ifndef LOCARAY_COST_H_
#define LOCARAY_COST_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "locaray/model.h"

namespace locaray {

inline constexpr std::size_t kDefaultMemoryBudget = std::size_t{512} << 20;

// The coverage index for an instance would exceed the memory budget.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(std::int64_t num_interactions, std::size_t estimated_bytes,
                std::size_t budget_bytes);

  std::int64_t num_interactions() const { return num_interactions_; }
  std::size_t estimated_bytes() const { return estimated_bytes_; }

 private:
  std::int64_t num_interactions_;
  std::size_t estimated_bytes_;
};

// Reads LOCARAY_MEM_BUDGET_MB; falls back to kDefaultMemoryBudget.
std::size_t MemoryBudgetFromEnv();

// Rough footprint of a CoverageIndex over `rows` rows.
std::size_t EstimateIndexBytes(std::int64_t num_interactions,
                               std::int64_t num_subsets, int rows);

// A neighbor move. SetEntry assigns one entry; OverwriteRow writes the pairs
// of an interaction into one row and leaves its other entries alone.
struct Move {
  enum class Kind { kSetEntry, kOverwriteRow };

  Kind kind = Kind::kSetEntry;
  int row = 0;
  std::vector<FactorValue> assignments;
  // Filled by CoverageIndex::Apply with the overwritten values, for Undo.
  std::vector<int> previous;

  static Move SetEntry(int row, int factor, int value) {
    return Move{Kind::kSetEntry, row, {{factor, value}}, {}};
  }
  static Move OverwriteRow(int row, const Interaction& interaction) {
    return Move{Kind::kOverwriteRow, row,
                {interaction.pairs().begin(), interaction.pairs().end()},
                {}};
  }

  friend bool operator==(const Move&, const Move&) = default;
};

// Row sets of every strength-t interaction of one array, grouped by equal
// row set, with the counts
//   f1 = #{T : rho(T) empty}
//   f2 = #{T : some T' != T has rho(T') == rho(T), nonempty}
// kept current under moves. Owns the array it indexes.
class CoverageIndex {
 public:
  // Throws DomainError unless 1 <= t <= k, CapacityError over budget.
  CoverageIndex(TestArray array, int strength,
                std::size_t memory_budget = kDefaultMemoryBudget);

  const TestArray& array() const { return array_; }
  const InteractionCatalog& catalog() const { return catalog_; }
  int strength() const { return catalog_.strength(); }
  int num_rows() const { return array_.num_rows(); }

  std::int64_t f1() const { return static_cast<std::int64_t>(uncovered_.size()); }
  std::int64_t f2() const { return static_cast<std::int64_t>(colliding_.size()); }
  double Cost(double weight) const {
    return weight * static_cast<double>(f1()) + static_cast<double>(f2());
  }

  // Interactions with an empty row set, in no particular order.
  std::span<const std::int32_t> uncovered() const { return uncovered_; }
  // Interactions counted by f2, in no particular order.
  std::span<const std::int32_t> colliding() const { return colliding_; }

  RowSet Rows(std::int64_t interaction) const;
  int RowCount(std::int64_t interaction) const;
  // The n-th (0-based) row of an interaction's row set, ascending.
  int NthRow(std::int64_t interaction, int n) const;
  // The n-th row not in an interaction's row set, ascending.
  int NthRowOutside(std::int64_t interaction, int n) const;

  // Applies the move to the array and the index and returns the change in
  // Cost(weight). Records the overwritten entries in move.previous.
  double Apply(Move& move, double weight);
  // Reverts a move previously returned from Apply; must be the latest one.
  void Undo(const Move& move);

  // Same array, row sets, counters, and grouping as `other`.
  bool EquivalentTo(const CoverageIndex& other) const;
  // Recomputes everything from the array and compares.
  bool ConsistentWithRebuild() const;

 private:
  struct Group {
    std::vector<std::int32_t> members;
    std::int32_t next_same_hash = -1;
  };

  std::span<const std::uint64_t> words(std::int64_t t) const {
    return {rowsets_.data() + t * words_per_set_,
            static_cast<std::size_t>(words_per_set_)};
  }
  std::span<std::uint64_t> words(std::int64_t t) {
    return {rowsets_.data() + t * words_per_set_,
            static_cast<std::size_t>(words_per_set_)};
  }
  std::span<const std::uint64_t> group_words(std::int32_t g) const {
    return {group_keys_.data() + static_cast<std::size_t>(g) * words_per_set_,
            static_cast<std::size_t>(words_per_set_)};
  }
  std::uint64_t HashOf(std::span<const std::uint64_t> w) const;
  bool IsEmptySet(std::int64_t t) const;

  void SetCell(int row, int factor, int value);
  void Attach(std::int32_t t);
  void Detach(std::int32_t t);
  std::int32_t FindOrCreateGroup(std::span<const std::uint64_t> key);
  void ReleaseGroup(std::int32_t g);

  static void AddTo(std::vector<std::int32_t>& set,
                    std::vector<std::int32_t>& pos, std::int32_t t);
  static void RemoveFrom(std::vector<std::int32_t>& set,
                         std::vector<std::int32_t>& pos, std::int32_t t);

  TestArray array_;
  InteractionCatalog catalog_;
  int words_per_set_;
  std::vector<std::uint64_t> rowsets_;

  std::vector<std::int32_t> uncovered_;
  std::vector<std::int32_t> uncovered_pos_;
  std::vector<std::int32_t> colliding_;
  std::vector<std::int32_t> colliding_pos_;

  std::vector<std::int32_t> group_of_;      // -1 when uncovered
  std::vector<std::int32_t> pos_in_group_;
  std::vector<Group> groups_;
  std::vector<std::uint64_t> group_keys_;   // words of each group's row set
  std::vector<std::int32_t> free_groups_;
  std::unordered_map<std::uint64_t, std::int32_t> group_by_hash_;
};

}  // namespace locaray

#endif  // LOCARAY_COST_H_
