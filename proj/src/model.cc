#include "locaray/model.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <limits>
#include <sstream>

namespace locaray {
namespace {

int ParseCount(std::string_view text, std::string_view token) {
  int value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ParseError("malformed model token '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

SutModel::SutModel(std::vector<int> values) : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("model needs at least one factor");
  for (int v : values_) {
    if (v < 2) {
      throw DomainError("every factor needs at least 2 values, got " +
                        std::to_string(v));
    }
  }
}

int SutModel::min_levels() const {
  return *std::min_element(values_.begin(), values_.end());
}

int SutModel::max_levels() const {
  return *std::max_element(values_.begin(), values_.end());
}

std::string SutModel::ToSpec() const {
  std::string out;
  for (std::size_t i = 0; i < values_.size();) {
    std::size_t j = i;
    while (j < values_.size() && values_[j] == values_[i]) ++j;
    if (!out.empty()) out += ' ';
    out += std::to_string(values_[i]) + '^' + std::to_string(j - i);
    i = j;
  }
  return out;
}

SutModel ParseModel(std::string_view spec) {
  std::vector<int> values;
  std::size_t pos = 0;
  auto is_sep = [](char c) {
    return c == ',' || c == ' ' || c == '\t' || c == '\r' || c == '\n';
  };
  while (pos < spec.size()) {
    while (pos < spec.size() && is_sep(spec[pos])) ++pos;
    std::size_t start = pos;
    while (pos < spec.size() && !is_sep(spec[pos])) ++pos;
    if (start == pos) break;
    std::string_view token = spec.substr(start, pos - start);
    std::size_t caret = token.find('^');
    int base = 0;
    int exponent = 1;
    if (caret == std::string_view::npos) {
      base = ParseCount(token, token);
    } else {
      base = ParseCount(token.substr(0, caret), token);
      exponent = ParseCount(token.substr(caret + 1), token);
    }
    if (base < 2) {
      throw ParseError("model token '" + std::string(token) +
                       "' has fewer than 2 values");
    }
    if (exponent < 1) {
      throw ParseError("model token '" + std::string(token) +
                       "' needs an exponent of at least 1");
    }
    if (values.size() + exponent > 1'000'000) {
      throw ParseError("model token '" + std::string(token) +
                       "' makes the model too large");
    }
    values.insert(values.end(), exponent, base);
  }
  if (values.empty()) throw ParseError("empty model spec");
  return SutModel(std::move(values));
}

Interaction::Interaction(std::vector<FactorValue> pairs)
    : pairs_(std::move(pairs)) {
  std::sort(pairs_.begin(), pairs_.end());
  for (std::size_t i = 1; i < pairs_.size(); ++i) {
    if (pairs_[i].factor == pairs_[i - 1].factor) {
      throw DomainError("interaction repeats factor " +
                        std::to_string(pairs_[i].factor + 1));
    }
  }
}

bool Interaction::ValidFor(const SutModel& model) const {
  for (const FactorValue& p : pairs_) {
    if (p.factor < 0 || p.factor >= model.num_factors()) return false;
    if (p.value < 0 || p.value >= model.levels(p.factor)) return false;
  }
  return true;
}

std::string Interaction::ToString() const {
  std::string out = "{";
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    if (i) out += ',';
    out += '(' + std::to_string(pairs_[i].factor + 1) + ',' +
           std::to_string(pairs_[i].value) + ')';
  }
  return out + '}';
}

std::strong_ordering operator<=>(const Interaction& a, const Interaction& b) {
  const std::size_t n = std::min(a.pairs_.size(), b.pairs_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a.pairs_[i].factor <=> b.pairs_[i].factor; c != 0) return c;
  }
  if (auto c = a.pairs_.size() <=> b.pairs_.size(); c != 0) return c;
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a.pairs_[i].value <=> b.pairs_[i].value; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

TestArray::TestArray(SutModel model, int rows)
    : model_(std::move(model)), rows_(rows) {
  if (rows < 0) throw DomainError("row count must be non-negative");
  cells_.assign(static_cast<std::size_t>(rows) * model_.num_factors(), 0);
}

TestArray::TestArray(SutModel model, const std::vector<std::vector<int>>& rows)
    : TestArray(std::move(model), static_cast<int>(rows.size())) {
  const int k = model_.num_factors();
  for (int i = 0; i < rows_; ++i) {
    if (static_cast<int>(rows[i].size()) != k) {
      throw DomainError("row " + std::to_string(i + 1) + " has " +
                        std::to_string(rows[i].size()) + " entries, expected " +
                        std::to_string(k));
    }
    for (int j = 0; j < k; ++j) {
      if (rows[i][j] < 0 || rows[i][j] >= model_.levels(j)) {
        throw DomainError("entry (" + std::to_string(i + 1) + "," +
                          std::to_string(j + 1) + ") = " +
                          std::to_string(rows[i][j]) + " is out of range");
      }
      set(i, j, rows[i][j]);
    }
  }
}

RowSet::RowSet(int num_rows)
    : num_rows_(num_rows), words_(WordsForRows(num_rows), 0) {}

RowSet::RowSet(int num_rows, std::span<const int> members) : RowSet(num_rows) {
  for (int r : members) {
    if (r < 0 || r >= num_rows) {
      throw DomainError("row " + std::to_string(r + 1) + " is outside 1.." +
                        std::to_string(num_rows));
    }
    insert(r);
  }
}

int RowSet::count() const {
  int n = 0;
  for (std::uint64_t w : words_) n += std::popcount(w);
  return n;
}

std::vector<int> RowSet::members() const {
  std::vector<int> out;
  for (int r = 0; r < num_rows_; ++r) {
    if (contains(r)) out.push_back(r);
  }
  return out;
}

std::string RowSet::ToString() const {
  std::string out;
  for (int r : members()) {
    if (!out.empty()) out += ',';
    out += std::to_string(r + 1);
  }
  return out;
}

bool Covers(std::span<const int> row, const Interaction& interaction) {
  for (const FactorValue& p : interaction.pairs()) {
    if (row[p.factor] != p.value) return false;
  }
  return true;
}

RowSet Rho(const TestArray& array, const Interaction& interaction) {
  RowSet rows(array.num_rows());
  for (int i = 0; i < array.num_rows(); ++i) {
    if (Covers(array.row(i), interaction)) rows.insert(i);
  }
  return rows;
}

std::int64_t CountInteractions(const SutModel& model, int strength) {
  const int k = model.num_factors();
  if (strength < 0 || strength > k) {
    throw DomainError("strength " + std::to_string(strength) +
                      " is outside 0.." + std::to_string(k));
  }
  // counts[s] = sum over s-subsets of the first j factors of the products.
  constexpr auto kLimit =
      static_cast<unsigned __int128>(std::numeric_limits<std::int64_t>::max());
  std::vector<unsigned __int128> counts(strength + 1, 0);
  counts[0] = 1;
  for (int j = 0; j < k; ++j) {
    for (int s = std::min(strength, j + 1); s >= 1; --s) {
      counts[s] += counts[s - 1] * static_cast<unsigned>(model.levels(j));
      if (counts[s] > kLimit) {
        throw DomainError("interaction count overflows at strength " +
                          std::to_string(strength));
      }
    }
  }
  return static_cast<std::int64_t>(counts[strength]);
}

InteractionCatalog::InteractionCatalog(SutModel model, int strength)
    : model_(std::move(model)), strength_(strength) {
  const int k = model_.num_factors();
  CountInteractions(model_, strength);  // validates range and overflow
  subsets_by_factor_.resize(k);
  offsets_.push_back(0);
  std::vector<int> combo(strength);
  for (int i = 0; i < strength; ++i) combo[i] = i;
  std::int32_t id = 0;
  while (true) {
    std::int64_t product = 1;
    for (int f : combo) {
      product *= model_.levels(f);
      subsets_by_factor_[f].push_back(id);
    }
    subsets_.insert(subsets_.end(), combo.begin(), combo.end());
    offsets_.push_back(offsets_.back() + product);
    ++id;
    int i = strength - 1;
    while (i >= 0 && combo[i] == k - strength + i) --i;
    if (i < 0) break;
    ++combo[i];
    for (int j = i + 1; j < strength; ++j) combo[j] = combo[j - 1] + 1;
  }
}

Interaction InteractionCatalog::At(std::int64_t index) const {
  if (index < 0 || index >= size()) {
    throw DomainError("interaction index " + std::to_string(index) +
                      " out of range");
  }
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), index);
  const std::int64_t subset_id = (it - offsets_.begin()) - 1;
  std::int64_t rem = index - offsets_[subset_id];
  auto factors = subset(subset_id);
  std::vector<FactorValue> pairs(strength_);
  for (int i = strength_ - 1; i >= 0; --i) {
    const int v = model_.levels(factors[i]);
    pairs[i] = {factors[i], static_cast<int>(rem % v)};
    rem /= v;
  }
  return Interaction(std::move(pairs));
}

std::int64_t InteractionCatalog::IndexOf(const Interaction& interaction) const {
  if (interaction.strength() != strength_ || !interaction.ValidFor(model_)) {
    throw DomainError("interaction " + interaction.ToString() +
                      " does not belong to this catalog");
  }
  // Rank of the factor subset among the lexicographic t-subsets of k.
  const int k = model_.num_factors();
  auto binom = [](int n, int r) -> std::int64_t {
    if (r < 0 || r > n) return 0;
    std::int64_t c = 1;
    for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
    return c;
  };
  std::int64_t rank = 0;
  int prev = -1;
  auto pairs = interaction.pairs();
  for (int i = 0; i < strength_; ++i) {
    for (int f = prev + 1; f < pairs[i].factor; ++f) {
      rank += binom(k - f - 1, strength_ - i - 1);
    }
    prev = pairs[i].factor;
  }
  std::int64_t value_index = 0;
  for (const FactorValue& p : pairs) {
    value_index = value_index * model_.levels(p.factor) + p.value;
  }
  return offsets_[rank] + value_index;
}

std::int64_t InteractionCatalog::IndexForRow(std::int64_t subset_id,
                                             std::span<const int> row) const {
  std::int64_t value_index = 0;
  for (int f : subset(subset_id)) {
    value_index = value_index * model_.levels(f) + row[f];
  }
  return offsets_[subset_id] + value_index;
}

TestArray RandomArray(const SutModel& model, int rows, std::mt19937_64& rng) {
  TestArray array(model, rows);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < model.num_factors(); ++j) {
      std::uniform_int_distribution<int> pick(0, model.levels(j) - 1);
      array.set(i, j, pick(rng));
    }
  }
  return array;
}

}  // namespace locaray
