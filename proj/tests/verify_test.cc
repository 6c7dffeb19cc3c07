#include "locaray/verify.h"

#include <random>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "locaray/array_io.h"

namespace locaray {
namespace {

using ::testing::ElementsAre;
using ::testing::IsEmpty;

ArrayFile Fixture(const char* name) {
  return ReadArrayFile(std::string(LOCARAY_DATA_DIR) + "/" + name);
}

RowSet Rows(int m, std::vector<int> one_based) {
  for (int& r : one_based) --r;
  return RowSet(m, one_based);
}

TEST(VerifyTest, PrinterArrayIsLocating) {
  ArrayFile la = Fixture("printer_la.txt");
  VerifyReport r = Verify(la.array, 2);
  EXPECT_EQ(r.num_interactions, 30);
  EXPECT_TRUE(r.is_covering);
  EXPECT_TRUE(r.is_locating_exact1);
  EXPECT_TRUE(r.is_locating_1bar);
  EXPECT_THAT(r.uncovered, IsEmpty());
  EXPECT_EQ(r.collision_count(), 0);
}

TEST(VerifyTest, CoveringArrayIsNotLocating) {
  ArrayFile ca = Fixture("printer_ca.txt");
  VerifyReport r = Verify(ca.array, 2);
  EXPECT_TRUE(r.is_covering);
  EXPECT_FALSE(r.is_locating_exact1);
  EXPECT_FALSE(r.is_locating_1bar);
  // Brute-force pair scan over the 30 interactions: 36 colliding pairs.
  EXPECT_EQ(r.collision_count(), 36);
  EXPECT_EQ(r.Collisions().size(), 36u);

  // {A4, OneSide} and {Yes, OneSide} are both covered only by row 1.
  const Interaction a4_oneside({{1, 0}, {3, 0}});
  const Interaction yes_oneside({{2, 0}, {3, 0}});
  bool found = false;
  for (const auto& c : r.Collisions()) {
    EXPECT_LT(c.first, c.second);
    if (c.first == a4_oneside && c.second == yes_oneside) {
      EXPECT_EQ(c.rows.ToString(), "1");
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(VerifyTest, EmptyArray) {
  VerifyReport r = Verify(TestArray(SutModel({2, 2, 2}), 0), 2);
  EXPECT_FALSE(r.is_covering);
  EXPECT_FALSE(r.is_locating_1bar);
  EXPECT_EQ(r.uncovered.size(), 12u);
  // The 12 uncovered interactions all share the empty row set.
  EXPECT_EQ(r.collision_count(), 66);
}

TEST(VerifyTest, CollisionsCanBeTruncated) {
  VerifyReport r = Verify(TestArray(SutModel({2, 2, 2}), 0), 2);
  EXPECT_EQ(r.Collisions(20).size(), 20u);
  EXPECT_EQ(r.collision_count(), 66);
}

TEST(VerifyTest, RejectsBadStrength) {
  TestArray a(SutModel({2, 2}), 1);
  EXPECT_THROW(Verify(a, 0), DomainError);
  EXPECT_THROW(Verify(a, 3), DomainError);
}

TEST(VerifyTest, ReportInvariantsOnRandomArrays) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = std::uniform_int_distribution<int>(2, 5)(rng);
    std::vector<int> v(k);
    for (int& x : v) x = std::uniform_int_distribution<int>(2, 3)(rng);
    const SutModel model(v);
    const int m = std::uniform_int_distribution<int>(0, 12)(rng);
    const int t = std::uniform_int_distribution<int>(1, std::min(k, 3))(rng);
    VerifyReport r = Verify(RandomArray(model, m, rng), t);
    EXPECT_EQ(r.is_locating_1bar, r.uncovered.empty() && r.collision_count() == 0);
    if (r.is_locating_1bar) EXPECT_TRUE(r.is_covering);
    for (const auto& g : r.collision_groups) {
      ASSERT_GE(g.members.size(), 2u);
      for (std::size_t i = 1; i < g.members.size(); ++i) {
        EXPECT_LT(g.members[i - 1], g.members[i]);
      }
    }
  }
}

TEST(LocateFaultTest, PrinterFailingTests) {
  ArrayFile la = Fixture("printer_la.txt");
  const auto faults = LocateFault(la.array, Rows(10, {4, 5, 10}), 2);
  // size = A5, color = No
  EXPECT_THAT(faults, ElementsAre(Interaction({{1, 1}, {2, 1}})));
}

TEST(LocateFaultTest, NoFailingTestsMeansNoFault) {
  ArrayFile la = Fixture("printer_la.txt");
  EXPECT_THAT(LocateFault(la.array, RowSet(10), 2), IsEmpty());
}

TEST(LocateFaultTest, UnmatchedFailingSet) {
  ArrayFile la = Fixture("printer_la.txt");
  // Brute force: no strength-2 interaction is covered by row 1 alone.
  EXPECT_THAT(LocateFault(la.array, Rows(10, {1}), 2), IsEmpty());
}

TEST(LocateFaultTest, RejectsMismatchedRowSet) {
  ArrayFile la = Fixture("printer_la.txt");
  EXPECT_THROW(LocateFault(la.array, RowSet(9), 2), DomainError);
}

TEST(LocateFaultTest, RecoversEveryInteractionOfALocatingArray) {
  ArrayFile la = Fixture("printer_la.txt");
  InteractionCatalog catalog(la.array.model(), 2);
  for (std::int64_t i = 0; i < catalog.size(); ++i) {
    const Interaction t = catalog.At(i);
    EXPECT_THAT(LocateFault(la.array, Rho(la.array, t), 2), ElementsAre(t));
  }
}

}  // namespace
}  // namespace locaray
