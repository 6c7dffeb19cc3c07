#include "locaray/model.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace locaray {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;

const SutModel kPrinter({2, 2, 2, 3});

TestArray PrinterLocatingArray() {
  return TestArray(kPrinter, {{0, 0, 0, 0},
                              {0, 0, 0, 2},
                              {0, 0, 1, 1},
                              {0, 1, 1, 0},
                              {0, 1, 1, 2},
                              {1, 0, 0, 0},
                              {1, 0, 0, 1},
                              {1, 0, 1, 2},
                              {1, 1, 0, 0},
                              {1, 1, 1, 1}});
}

// Every strength-t interaction by subset bitmask and odometer, independent
// of the catalog's combination walk.
std::set<std::vector<std::pair<int, int>>> BruteForceInteractions(
    const SutModel& model, int t) {
  std::set<std::vector<std::pair<int, int>>> out;
  const int k = model.num_factors();
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    if (std::popcount(mask) != t) continue;
    std::vector<int> factors;
    for (int j = 0; j < k; ++j) {
      if (mask >> j & 1) factors.push_back(j);
    }
    int total = 1;
    for (int f : factors) total *= model.levels(f);
    for (int code = 0; code < total; ++code) {
      std::vector<std::pair<int, int>> pairs;
      int rem = code;
      for (int f : factors) {
        pairs.push_back({f, rem % model.levels(f)});
        rem /= model.levels(f);
      }
      out.insert(pairs);
    }
  }
  return out;
}

SutModel RandomModel(std::mt19937_64& rng, int max_k, int max_v) {
  const int k = std::uniform_int_distribution<int>(1, max_k)(rng);
  std::vector<int> v(k);
  for (int& x : v) x = std::uniform_int_distribution<int>(2, max_v)(rng);
  return SutModel(v);
}

TEST(ParseModelTest, ExponentForm) {
  SutModel m = ParseModel("2^13 4^5");
  ASSERT_EQ(m.num_factors(), 18);
  for (int j = 0; j < 13; ++j) EXPECT_EQ(m.levels(j), 2);
  for (int j = 13; j < 18; ++j) EXPECT_EQ(m.levels(j), 4);
  EXPECT_EQ(m.ToSpec(), "2^13 4^5");
}

TEST(ParseModelTest, CommaFormAndBareIntegers) {
  EXPECT_EQ(ParseModel("2,2,2,3"), kPrinter);
  EXPECT_EQ(ParseModel("2^3, 3"), kPrinter);
  EXPECT_EQ(ParseModel(" 2 2\t2 3\n"), kPrinter);
  EXPECT_EQ(kPrinter.ToSpec(), "2^3 3^1");
}

TEST(ParseModelTest, RejectsBadTokens) {
  EXPECT_THROW(ParseModel("2^0"), ParseError);
  EXPECT_THROW(ParseModel("1^4"), ParseError);
  EXPECT_THROW(ParseModel(""), ParseError);
  EXPECT_THROW(ParseModel(" , "), ParseError);
  EXPECT_THROW(ParseModel("2^"), ParseError);
  EXPECT_THROW(ParseModel("-3"), ParseError);
  try {
    ParseModel("2^3 x^2");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_THAT(e.what(), HasSubstr("x^2"));
  }
}

TEST(SutModelTest, RequiresTwoValuesPerFactor) {
  EXPECT_THROW(SutModel({}), DomainError);
  EXPECT_THROW(SutModel({2, 1}), DomainError);
}

TEST(InteractionTest, SortsAndRejectsRepeatedFactors) {
  Interaction t({{2, 1}, {0, 1}});
  const std::vector<FactorValue> pairs(t.pairs().begin(), t.pairs().end());
  EXPECT_THAT(pairs, ElementsAre(FactorValue{0, 1}, FactorValue{2, 1}));
  EXPECT_EQ(t.ToString(), "{(1,1),(3,1)}");
  EXPECT_THROW(Interaction({{1, 0}, {1, 1}}), DomainError);
}

TEST(InteractionCatalogTest, CountsMatchBruteForce) {
  EXPECT_EQ(CountInteractions(SutModel({2, 2, 2}), 2), 12);
  // {1,2}:4 {1,3}:4 {1,4}:6 {2,3}:4 {2,4}:6 {3,4}:6
  EXPECT_EQ(BruteForceInteractions(kPrinter, 2).size(), 30u);
  EXPECT_EQ(CountInteractions(kPrinter, 2), 30);
  EXPECT_EQ(InteractionCatalog(kPrinter, 2).size(), 30);
}

TEST(InteractionCatalogTest, StrengthZeroIsTheEmptyInteraction) {
  InteractionCatalog catalog(kPrinter, 0);
  ASSERT_EQ(catalog.size(), 1);
  EXPECT_TRUE(catalog.At(0).empty());
  EXPECT_EQ(catalog.IndexOf(Interaction()), 0);
}

TEST(InteractionCatalogTest, RejectsStrengthAboveFactorCount) {
  EXPECT_THROW(InteractionCatalog(kPrinter, 5), DomainError);
  EXPECT_THROW(CountInteractions(kPrinter, -1), DomainError);
}

TEST(InteractionCatalogTest, MatchesBruteForceOnRandomModels) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const SutModel model = RandomModel(rng, 6, 4);
    for (int t = 0; t <= model.num_factors(); ++t) {
      InteractionCatalog catalog(model, t);
      auto expected = BruteForceInteractions(model, t);
      ASSERT_EQ(catalog.size(), static_cast<std::int64_t>(expected.size()));
      std::set<std::vector<std::pair<int, int>>> seen;
      for (std::int64_t i = 0; i < catalog.size(); ++i) {
        const Interaction it = catalog.At(i);
        ASSERT_EQ(it.strength(), t);
        ASSERT_TRUE(it.ValidFor(model));
        ASSERT_EQ(catalog.IndexOf(it), i);
        if (i > 0) ASSERT_LT(catalog.At(i - 1), it);  // canonical and sorted
        std::vector<std::pair<int, int>> pairs;
        for (auto p : it.pairs()) pairs.push_back({p.factor, p.value});
        seen.insert(pairs);
      }
      EXPECT_EQ(seen, expected);
    }
  }
}

TEST(InteractionCatalogTest, IndexForRowAgreesWithIndexOf) {
  InteractionCatalog catalog(kPrinter, 2);
  TestArray a = PrinterLocatingArray();
  for (int i = 0; i < a.num_rows(); ++i) {
    for (std::int64_t s = 0; s < catalog.num_subsets(); ++s) {
      std::vector<FactorValue> pairs;
      for (int f : catalog.subset(s)) pairs.push_back({f, a.at(i, f)});
      EXPECT_EQ(catalog.IndexForRow(s, a.row(i)),
                catalog.IndexOf(Interaction(pairs)));
    }
  }
}

TEST(CoversTest, Examples) {
  TestArray a = PrinterLocatingArray();
  EXPECT_TRUE(Covers(a.row(3), Interaction({{1, 1}, {2, 1}})));
  EXPECT_TRUE(Covers(a.row(3), Interaction()));
  const std::vector<int> zeros = {0, 0, 0, 0};
  EXPECT_FALSE(Covers(zeros, Interaction({{0, 1}})));
}

TEST(RhoTest, PrinterFailingRows) {
  RowSet rows = Rho(PrinterLocatingArray(), Interaction({{1, 1}, {2, 1}}));
  EXPECT_THAT(rows.members(), ElementsAre(3, 4, 9));
  EXPECT_EQ(rows.ToString(), "4,5,10");
}

TEST(RhoTest, EmptyArrayAndEmptyInteraction) {
  EXPECT_TRUE(Rho(TestArray(kPrinter, 0), Interaction({{0, 0}})).empty());
  EXPECT_EQ(Rho(PrinterLocatingArray(), Interaction()).count(), 10);
}

TEST(RhoTest, AgreesWithCoversForEveryInteraction) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const SutModel model = RandomModel(rng, 5, 3);
    TestArray a = RandomArray(model, 7, rng);
    for (int t = 0; t <= model.num_factors(); ++t) {
      InteractionCatalog catalog(model, t);
      for (std::int64_t i = 0; i < catalog.size(); ++i) {
        const Interaction it = catalog.At(i);
        const RowSet rows = Rho(a, it);
        for (int r = 0; r < a.num_rows(); ++r) {
          ASSERT_EQ(rows.contains(r), Covers(a.row(r), it));
        }
      }
    }
  }
}

TEST(RowSetTest, RejectsOutOfRangeMembers) {
  const std::vector<int> bad = {10};
  EXPECT_THROW(RowSet(10, bad), DomainError);
  const std::vector<int> wide = {0, 64, 129};
  RowSet ok(130, wide);
  EXPECT_EQ(ok.count(), 3);
  EXPECT_THAT(ok.members(), ElementsAre(0, 64, 129));
}

TEST(TestArrayTest, RejectsOutOfRangeEntries) {
  EXPECT_THROW(TestArray(kPrinter, {{0, 0, 0, 3}}), DomainError);
  EXPECT_THROW(TestArray(kPrinter, {{0, 0, 0}}), DomainError);
}

TEST(RandomArrayTest, EmptyAndDeterministic) {
  std::mt19937_64 rng(3);
  EXPECT_EQ(RandomArray(kPrinter, 0, rng).num_rows(), 0);
  std::mt19937_64 a(42), b(42);
  EXPECT_EQ(RandomArray(kPrinter, 20, a), RandomArray(kPrinter, 20, b));
}

TEST(RandomArrayTest, UniformWithinFiveSigma) {
  std::mt19937_64 rng(2024);
  TestArray a = RandomArray(SutModel({5}), 10000, rng);
  std::vector<int> counts(5, 0);
  for (int i = 0; i < a.num_rows(); ++i) ++counts[a.at(i, 0)];
  const double sigma = std::sqrt(10000 * 0.2 * 0.8);  // 40
  for (int c : counts) EXPECT_LE(std::abs(c - 2000), 5 * sigma);
}

}  // namespace
}  // namespace locaray
