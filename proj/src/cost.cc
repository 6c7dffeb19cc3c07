#include "locaray/cost.h"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <limits>

namespace locaray {
namespace {

std::uint64_t Mix(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

std::int64_t CountSubsets(int k, int t) {
  unsigned __int128 c = 1;
  for (int i = 1; i <= t; ++i) {
    c = c * static_cast<unsigned>(k - t + i) / static_cast<unsigned>(i);
    if (c > static_cast<unsigned __int128>(
                std::numeric_limits<std::int64_t>::max())) {
      return std::numeric_limits<std::int64_t>::max();
    }
  }
  return static_cast<std::int64_t>(c);
}

// Index of the n-th set bit among `words`, or -1.
int NthSetBit(std::span<const std::uint64_t> words, int n, bool complement,
              int num_rows) {
  for (std::size_t w = 0; w < words.size(); ++w) {
    std::uint64_t bits = complement ? ~words[w] : words[w];
    const int base = static_cast<int>(w) * 64;
    if (base + 64 > num_rows) {
      const int valid = num_rows - base;
      bits &= valid >= 64 ? ~std::uint64_t{0}
                          : (std::uint64_t{1} << valid) - 1;
    }
    const int c = std::popcount(bits);
    if (n < c) {
      for (int i = 0; i < n; ++i) bits &= bits - 1;
      return base + std::countr_zero(bits);
    }
    n -= c;
  }
  return -1;
}

}  // namespace

CapacityError::CapacityError(std::int64_t num_interactions,
                             std::size_t estimated_bytes,
                             std::size_t budget_bytes)
    : std::runtime_error(
          "coverage index for |I_t| = " + std::to_string(num_interactions) +
          " interactions needs about " +
          std::to_string(estimated_bytes >> 20) + " MiB, budget is " +
          std::to_string(budget_bytes >> 20) + " MiB"),
      num_interactions_(num_interactions),
      estimated_bytes_(estimated_bytes) {}

std::size_t MemoryBudgetFromEnv() {
  const char* env = std::getenv("LOCARAY_MEM_BUDGET_MB");
  if (env == nullptr || *env == '\0') return kDefaultMemoryBudget;
  char* end = nullptr;
  const unsigned long long mb = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0' || mb == 0) return kDefaultMemoryBudget;
  return static_cast<std::size_t>(mb) << 20;
}

std::size_t EstimateIndexBytes(std::int64_t num_interactions,
                               std::int64_t num_subsets, int rows) {
  const double words = WordsForRows(std::max(rows, 1));
  // Row set plus group key words, five int32 bookkeeping slots, and a share
  // of group and hash-table overhead per interaction.
  const double per_interaction = 2 * 8 * words + 5 * 4 + 48;
  const double total = static_cast<double>(num_interactions) * per_interaction +
                       static_cast<double>(num_subsets) * 16;
  if (total >= static_cast<double>(std::numeric_limits<std::size_t>::max())) {
    return std::numeric_limits<std::size_t>::max();
  }
  return static_cast<std::size_t>(total);
}

CoverageIndex::CoverageIndex(TestArray array, int strength,
                             std::size_t memory_budget)
    : array_(std::move(array)),
      catalog_([&] {
        const SutModel& model = array_.model();
        if (strength < 1 || strength > model.num_factors()) {
          throw DomainError("strength " + std::to_string(strength) +
                            " is outside 1.." +
                            std::to_string(model.num_factors()));
        }
        const std::int64_t n = CountInteractions(model, strength);
        const std::size_t bytes = EstimateIndexBytes(
            n, CountSubsets(model.num_factors(), strength), array_.num_rows());
        if (bytes > memory_budget ||
            n > std::numeric_limits<std::int32_t>::max()) {
          throw CapacityError(n, bytes, memory_budget);
        }
        return InteractionCatalog(model, strength);
      }()),
      words_per_set_(WordsForRows(std::max(array_.num_rows(), 1))) {
  const std::int64_t n = catalog_.size();
  rowsets_.assign(static_cast<std::size_t>(n * words_per_set_), 0);
  for (std::int64_t s = 0; s < catalog_.num_subsets(); ++s) {
    for (int i = 0; i < array_.num_rows(); ++i) {
      const std::int64_t t = catalog_.IndexForRow(s, array_.row(i));
      words(t)[i >> 6] |= std::uint64_t{1} << (i & 63);
    }
  }
  uncovered_pos_.assign(n, -1);
  colliding_pos_.assign(n, -1);
  group_of_.assign(n, -1);
  pos_in_group_.assign(n, -1);
  group_by_hash_.reserve(static_cast<std::size_t>(n));
  for (std::int64_t t = 0; t < n; ++t) Attach(static_cast<std::int32_t>(t));
}

std::uint64_t CoverageIndex::HashOf(std::span<const std::uint64_t> w) const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (std::uint64_t x : w) h = Mix(h ^ x);
  return h;
}

bool CoverageIndex::IsEmptySet(std::int64_t t) const {
  for (std::uint64_t x : words(t)) {
    if (x) return false;
  }
  return true;
}

RowSet CoverageIndex::Rows(std::int64_t interaction) const {
  RowSet rows(array_.num_rows());
  for (int i = 0; i < array_.num_rows(); ++i) {
    if ((words(interaction)[i >> 6] >> (i & 63)) & 1u) rows.insert(i);
  }
  return rows;
}

int CoverageIndex::RowCount(std::int64_t interaction) const {
  int n = 0;
  for (std::uint64_t x : words(interaction)) n += std::popcount(x);
  return n;
}

int CoverageIndex::NthRow(std::int64_t interaction, int n) const {
  return NthSetBit(words(interaction), n, false, array_.num_rows());
}

int CoverageIndex::NthRowOutside(std::int64_t interaction, int n) const {
  return NthSetBit(words(interaction), n, true, array_.num_rows());
}

void CoverageIndex::AddTo(std::vector<std::int32_t>& set,
                          std::vector<std::int32_t>& pos, std::int32_t t) {
  pos[t] = static_cast<std::int32_t>(set.size());
  set.push_back(t);
}

void CoverageIndex::RemoveFrom(std::vector<std::int32_t>& set,
                               std::vector<std::int32_t>& pos,
                               std::int32_t t) {
  const std::int32_t p = pos[t];
  const std::int32_t last = set.back();
  set[p] = last;
  pos[last] = p;
  set.pop_back();
  pos[t] = -1;
}

std::int32_t CoverageIndex::FindOrCreateGroup(
    std::span<const std::uint64_t> key) {
  const std::uint64_t h = HashOf(key);
  auto it = group_by_hash_.find(h);
  std::int32_t head = -1;
  if (it != group_by_hash_.end()) {
    head = it->second;
    for (std::int32_t g = head; g != -1; g = groups_[g].next_same_hash) {
      if (std::equal(key.begin(), key.end(), group_words(g).begin())) return g;
    }
  }
  std::int32_t g;
  if (!free_groups_.empty()) {
    g = free_groups_.back();
    free_groups_.pop_back();
  } else {
    g = static_cast<std::int32_t>(groups_.size());
    groups_.emplace_back();
    group_keys_.resize(group_keys_.size() + words_per_set_);
  }
  std::copy(key.begin(), key.end(),
            group_keys_.begin() + static_cast<std::size_t>(g) * words_per_set_);
  groups_[g].next_same_hash = head;
  if (it != group_by_hash_.end()) {
    it->second = g;
  } else {
    group_by_hash_.emplace(h, g);
  }
  return g;
}

void CoverageIndex::ReleaseGroup(std::int32_t g) {
  const std::uint64_t h = HashOf(group_words(g));
  auto it = group_by_hash_.find(h);
  if (it->second == g) {
    if (groups_[g].next_same_hash == -1) {
      group_by_hash_.erase(it);
    } else {
      it->second = groups_[g].next_same_hash;
    }
  } else {
    std::int32_t prev = it->second;
    while (groups_[prev].next_same_hash != g) prev = groups_[prev].next_same_hash;
    groups_[prev].next_same_hash = groups_[g].next_same_hash;
  }
  groups_[g].next_same_hash = -1;
  free_groups_.push_back(g);
}

void CoverageIndex::Attach(std::int32_t t) {
  if (IsEmptySet(t)) {
    group_of_[t] = -1;
    AddTo(uncovered_, uncovered_pos_, t);
    return;
  }
  const std::int32_t g = FindOrCreateGroup(words(t));
  std::vector<std::int32_t>& members = groups_[g].members;
  group_of_[t] = g;
  pos_in_group_[t] = static_cast<std::int32_t>(members.size());
  members.push_back(t);
  if (members.size() == 2) {
    AddTo(colliding_, colliding_pos_, members[0]);
    AddTo(colliding_, colliding_pos_, t);
  } else if (members.size() > 2) {
    AddTo(colliding_, colliding_pos_, t);
  }
}

void CoverageIndex::Detach(std::int32_t t) {
  const std::int32_t g = group_of_[t];
  if (g == -1) {
    RemoveFrom(uncovered_, uncovered_pos_, t);
    return;
  }
  std::vector<std::int32_t>& members = groups_[g].members;
  const std::size_t before = members.size();
  RemoveFrom(members, pos_in_group_, t);
  if (before == 2) {
    RemoveFrom(colliding_, colliding_pos_, t);
    RemoveFrom(colliding_, colliding_pos_, members[0]);
  } else if (before > 2) {
    RemoveFrom(colliding_, colliding_pos_, t);
  }
  if (members.empty()) ReleaseGroup(g);
  group_of_[t] = -1;
}

void CoverageIndex::SetCell(int row, int factor, int value) {
  const std::uint64_t bit = std::uint64_t{1} << (row & 63);
  const int word = row >> 6;
  for (std::int32_t s : catalog_.subsets_with(factor)) {
    const auto t =
        static_cast<std::int32_t>(catalog_.IndexForRow(s, array_.row(row)));
    Detach(t);
    words(t)[word] &= ~bit;
    Attach(t);
  }
  array_.set(row, factor, value);
  for (std::int32_t s : catalog_.subsets_with(factor)) {
    const auto t =
        static_cast<std::int32_t>(catalog_.IndexForRow(s, array_.row(row)));
    Detach(t);
    words(t)[word] |= bit;
    Attach(t);
  }
}

double CoverageIndex::Apply(Move& move, double weight) {
  const std::int64_t f1_before = f1();
  const std::int64_t f2_before = f2();
  move.previous.clear();
  for (const FactorValue& a : move.assignments) {
    const int old = array_.at(move.row, a.factor);
    move.previous.push_back(old);
    if (old != a.value) SetCell(move.row, a.factor, a.value);
  }
  return weight * static_cast<double>(f1() - f1_before) +
         static_cast<double>(f2() - f2_before);
}

void CoverageIndex::Undo(const Move& move) {
  for (std::size_t i = move.assignments.size(); i-- > 0;) {
    const int factor = move.assignments[i].factor;
    if (array_.at(move.row, factor) != move.previous[i]) {
      SetCell(move.row, factor, move.previous[i]);
    }
  }
}

bool CoverageIndex::EquivalentTo(const CoverageIndex& other) const {
  if (!(array_ == other.array_) || strength() != other.strength()) return false;
  if (rowsets_ != other.rowsets_) return false;
  auto sorted = [](std::span<const std::int32_t> s) {
    std::vector<std::int32_t> v(s.begin(), s.end());
    std::sort(v.begin(), v.end());
    return v;
  };
  if (sorted(uncovered_) != sorted(other.uncovered_)) return false;
  if (sorted(colliding_) != sorted(other.colliding_)) return false;
  // Grouping: members of a group share one row set equal to its key, and
  // every covered interaction sits in the group its row set hashes to.
  for (std::int64_t t = 0; t < catalog_.size(); ++t) {
    const std::int32_t g = group_of_[t];
    if (IsEmptySet(t)) {
      if (g != -1 || uncovered_pos_[t] < 0) return false;
      continue;
    }
    if (g < 0 || groups_[g].members[pos_in_group_[t]] != t) return false;
    if (!std::ranges::equal(group_words(g), words(t))) return false;
    const bool collides = groups_[g].members.size() >= 2;
    if (collides != (colliding_pos_[t] >= 0)) return false;
  }
  return true;
}

bool CoverageIndex::ConsistentWithRebuild() const {
  CoverageIndex fresh(array_, strength(), std::numeric_limits<std::size_t>::max());
  return EquivalentTo(fresh) && fresh.EquivalentTo(*this);
}

}  // namespace locaray
