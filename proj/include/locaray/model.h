#ifndef LOCARAY_MODEL_H_
#define LOCARAY_MODEL_H_

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace locaray {

// Malformed model specs, array files, and other text input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Per-factor domain sizes (v_1, ..., v_k) of the system under test.
class SutModel {
 public:
  // Throws DomainError unless k >= 1 and every v_i >= 2.
  explicit SutModel(std::vector<int> values);

  int num_factors() const { return static_cast<int>(values_.size()); }
  int levels(int factor) const { return values_[factor]; }
  std::span<const int> values() const { return values_; }
  int min_levels() const;
  int max_levels() const;

  // Run-length exponent form, e.g. "2^13 4^5".
  std::string ToSpec() const;

  friend bool operator==(const SutModel&, const SutModel&) = default;

 private:
  std::vector<int> values_;
};

// Accepts "2^13 4^5", "2,2,2,3" and mixtures. A bare integer n means n^1.
SutModel ParseModel(std::string_view spec);

struct FactorValue {
  int factor = 0;  // 0-based
  int value = 0;

  friend auto operator<=>(const FactorValue&, const FactorValue&) = default;
};

// A set of factor-value pairs with distinct factors, kept sorted by factor.
class Interaction {
 public:
  Interaction() = default;
  // Sorts the pairs; throws DomainError on a repeated factor.
  explicit Interaction(std::vector<FactorValue> pairs);

  int strength() const { return static_cast<int>(pairs_.size()); }
  std::span<const FactorValue> pairs() const { return pairs_; }
  bool empty() const { return pairs_.empty(); }
  bool ValidFor(const SutModel& model) const;

  // Set notation with 1-based factors: {(2,1),(3,1)}.
  std::string ToString() const;

  // Canonical order: factor tuple first, then value tuple.
  friend std::strong_ordering operator<=>(const Interaction& a,
                                          const Interaction& b);
  friend bool operator==(const Interaction&, const Interaction&) = default;

 private:
  std::vector<FactorValue> pairs_;
};

// m x k matrix of factor values; each row is one test.
class TestArray {
 public:
  explicit TestArray(SutModel model, int rows = 0);
  // Throws DomainError if any row has the wrong width or an entry out of range.
  TestArray(SutModel model, const std::vector<std::vector<int>>& rows);

  const SutModel& model() const { return model_; }
  int num_rows() const { return rows_; }
  int num_factors() const { return model_.num_factors(); }

  int at(int row, int factor) const {
    return cells_[static_cast<std::size_t>(row) * model_.num_factors() + factor];
  }
  void set(int row, int factor, int value) {
    cells_[static_cast<std::size_t>(row) * model_.num_factors() + factor] =
        value;
  }
  std::span<const int> row(int row) const {
    return std::span<const int>(cells_).subspan(
        static_cast<std::size_t>(row) * model_.num_factors(),
        model_.num_factors());
  }

  friend bool operator==(const TestArray&, const TestArray&) = default;

 private:
  SutModel model_;
  int rows_ = 0;
  std::vector<int> cells_;
};

// Fixed-capacity bit set over the rows of one array (0-based internally).
class RowSet {
 public:
  RowSet() = default;
  explicit RowSet(int num_rows);
  // `members` are 0-based row indices; throws DomainError if out of range.
  RowSet(int num_rows, std::span<const int> members);

  int capacity() const { return num_rows_; }
  bool contains(int row) const {
    return (words_[row >> 6] >> (row & 63)) & 1u;
  }
  void insert(int row) { words_[row >> 6] |= std::uint64_t{1} << (row & 63); }
  void erase(int row) { words_[row >> 6] &= ~(std::uint64_t{1} << (row & 63)); }
  int count() const;
  bool empty() const { return count() == 0; }
  std::vector<int> members() const;
  std::span<const std::uint64_t> words() const { return words_; }

  // 1-based, comma separated: "4,5,10".
  std::string ToString() const;

  friend bool operator==(const RowSet&, const RowSet&) = default;
  friend auto operator<=>(const RowSet&, const RowSet&) = default;

 private:
  int num_rows_ = 0;
  std::vector<std::uint64_t> words_;
};

inline int WordsForRows(int rows) { return (rows + 63) / 64; }

bool Covers(std::span<const int> row, const Interaction& interaction);

RowSet Rho(const TestArray& array, const Interaction& interaction);

// Every strength-t interaction of a model, densely indexed in canonical
// order: factor subsets in lexicographic order, and within one subset the
// value tuples in lexicographic order (first factor most significant).
class InteractionCatalog {
 public:
  // Throws DomainError if t is outside [0, k] or |I_t| overflows 63 bits.
  InteractionCatalog(SutModel model, int strength);

  const SutModel& model() const { return model_; }
  int strength() const { return strength_; }
  std::int64_t size() const { return offsets_.back(); }
  std::int64_t num_subsets() const {
    return static_cast<std::int64_t>(offsets_.size()) - 1;
  }

  Interaction At(std::int64_t index) const;
  // Throws DomainError if the interaction is not of this catalog's strength
  // or is invalid for the model.
  std::int64_t IndexOf(const Interaction& interaction) const;

  std::span<const int> subset(std::int64_t subset_id) const {
    return std::span<const int>(subsets_).subspan(subset_id * strength_,
                                                  strength_);
  }
  // Index of the interaction of `subset_id` projected from `row`.
  std::int64_t IndexForRow(std::int64_t subset_id,
                           std::span<const int> row) const;
  // Ids of every subset that contains `factor`, ascending.
  std::span<const std::int32_t> subsets_with(int factor) const {
    return subsets_by_factor_[factor];
  }

 private:
  SutModel model_;
  int strength_;
  std::vector<int> subsets_;           // num_subsets * strength
  std::vector<std::int64_t> offsets_;  // num_subsets + 1
  std::vector<std::vector<std::int32_t>> subsets_by_factor_;
};

// Sum over t-subsets S of prod_{j in S} v_j. Throws DomainError on overflow
// of 63 bits or t outside [0, k].
std::int64_t CountInteractions(const SutModel& model, int strength);

// Entries drawn independently and uniformly per factor.
TestArray RandomArray(const SutModel& model, int rows, std::mt19937_64& rng);

}  // namespace locaray

#endif  // LOCARAY_MODEL_H_
