#include "locaray/bench.h"

#include <sstream>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace locaray {
namespace {

using ::testing::HasSubstr;

std::vector<SuiteEntry> Suite(const std::string& text) {
  std::istringstream in(text);
  return ReadSuite(in);
}

TEST(ReadSuiteTest, SkipsCommentsAndSplitsOnFirstComma) {
  auto suite = Suite(
      "# name,model\n"
      "\n"
      "spin-s, 2^13 4^5\n"
      "printer,2,2,2,3\r\n");
  ASSERT_EQ(suite.size(), 2u);
  EXPECT_EQ(suite[0].name, "spin-s");
  EXPECT_EQ(suite[0].model_spec, "2^13 4^5");
  EXPECT_EQ(suite[1].model_spec, "2,2,2,3");
}

TEST(ReadSuiteTest, RejectsBadLines) {
  EXPECT_THROW(Suite("no comma here\n"), ParseError);
  EXPECT_THROW(Suite("x,2^0\n"), ParseError);
}

TEST(ReadSuiteTest, ShippedSuiteHasAllInstances) {
  auto suite =
      ReadSuiteFile(std::string(LOCARAY_DATA_DIR) + "/table2_suite.csv");
  EXPECT_EQ(suite.size(), 35u);
  EXPECT_EQ(suite.front().name, "apache");
}

TEST(WriteBenchCsvTest, EmptySuiteGivesHeaderOnly) {
  std::ostringstream out;
  WriteBenchCsv(out, {});
  EXPECT_EQ(out.str(), std::string(kBenchCsvHeader) + "\n");
}

TEST(WriteBenchCsvTest, MissingStatisticsAreEmpty) {
  BenchRecord r;
  r.name = "hard";
  r.model_spec = "3^4";
  r.runs = 2;
  std::ostringstream out;
  WriteBenchCsv(out, {r});
  EXPECT_THAT(out.str(), HasSubstr("\nhard,3^4,0,0,2,,,\n"));
}

TEST(WriteBenchCsvTest, OneDecimalStatistics) {
  BenchRecord r;
  r.name = "a";
  r.model_spec = "2^3";
  r.runs = 3;
  r.x = 3;
  r.y = 3;
  r.mean_time_s = 0.04;
  r.mean_rows = 6.0 + 1.0 / 3.0;
  r.min_rows = 6;
  std::ostringstream out;
  WriteBenchCsv(out, {r});
  EXPECT_THAT(out.str(), HasSubstr("\na,2^3,3,3,3,0.0,6.3,6\n"));
}

TEST(RunBenchTest, SmallSuite) {
  BenchConfig config;
  config.runs = 3;
  config.timeout_s = 60;
  std::ostringstream log;
  auto records = RunBench(Suite("tiny,2^3\nfour,2^4\n"), config, &log);
  ASSERT_EQ(records.size(), 2u);
  for (const auto& r : records) {
    EXPECT_EQ(r.runs, 3);
    EXPECT_LE(r.x, r.y);
    EXPECT_LE(r.y, r.runs);
    ASSERT_TRUE(r.min_rows);
    ASSERT_EQ(r.details.size(), 3u);
    for (std::size_t i = 0; i < r.details.size(); ++i) {
      EXPECT_EQ(r.details[i].seed, config.seed + i);
    }
  }
  EXPECT_EQ(*records[0].min_rows, 6);
  EXPECT_EQ(*records[1].min_rows, 7);
  EXPECT_THAT(log.str(), HasSubstr("instance=four run=2 seed=3 finished=1"));
}

TEST(RunBenchTest, ParallelRunsMatchSequentialSizes) {
  BenchConfig config;
  config.runs = 4;
  auto sequential = RunBench(Suite("x,2^5\n"), config);
  config.workers = 3;
  auto parallel = RunBench(Suite("x,2^5\n"), config);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(sequential[0].details[i].rows, parallel[0].details[i].rows);
  }
}

TEST(RunBenchTest, ZeroRuns) {
  BenchConfig config;
  config.runs = 0;
  auto records = RunBench(Suite("x,2^3\n"), config);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].y, 0);
  EXPECT_FALSE(records[0].mean_rows);
}

}  // namespace
}  // namespace locaray
