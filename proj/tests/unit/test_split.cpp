#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "rootcp/error.hpp"
#include "rootcp/split_cp.hpp"
#include "test_support.hpp"

using namespace rootcp;

TEST(SplitFromScores, Example) {
  const std::vector<double> cal{1, 2, 3, 4, 5, 6, 7, 8, 9};
  const auto ci = split_interval_from_scores(cal, 5.0, 0.1);
  EXPECT_DOUBLE_EQ(ci.lower, -4.0);
  EXPECT_DOUBLE_EQ(ci.upper, 14.0);
  EXPECT_EQ(ci.method, Method::split);
  EXPECT_TRUE(ci.warnings.empty());
}

TEST(SplitFromScores, HighAlphaUsesSmallestScore) {
  const std::vector<double> cal{4, 2, 3, 9, 5, 6, 7, 8, 1.5};
  const auto ci = split_interval_from_scores(cal, 0.0, 0.95);
  EXPECT_DOUBLE_EQ(ci.lower, -1.5);
  EXPECT_DOUBLE_EQ(ci.upper, 1.5);
}

TEST(SplitFromScores, SmallCalibrationIsUnbounded) {
  const std::vector<double> cal{1, 2, 3, 4, 5};
  const auto ci = split_interval_from_scores(cal, 0.0, 0.1);
  EXPECT_TRUE(std::isinf(ci.lower) && ci.lower < 0);
  EXPECT_TRUE(std::isinf(ci.upper) && ci.upper > 0);
  EXPECT_FALSE(ci.bounded());
  EXPECT_EQ(ci.warnings.size(), 1u);
}

TEST(SplitFromScores, SquaredScoreLevelSet) {
  const std::vector<double> cal{1, 4, 9, 16, 25, 36, 49, 64, 81};
  const auto ci = split_interval_from_scores(cal, 1.0, 0.1, ScoreFunction::squared());
  EXPECT_DOUBLE_EQ(ci.lower, -8.0);
  EXPECT_DOUBLE_EQ(ci.upper, 10.0);
}

TEST(Split, OneFitAndSeedDeterminism) {
  const auto prob = testkit::synthetic(3, 100, 10, 10);
  const auto cfg = ConformalConfig::for_data(prob.data, 0.1);
  const auto a = split_interval(RidgeSpec{1.0}, prob.data, cfg, SplitConfig{0.5, 7});
  const auto b = split_interval(RidgeSpec{1.0}, prob.data, cfg, SplitConfig{0.5, 7});
  const auto c = split_interval(RidgeSpec{1.0}, prob.data, cfg, SplitConfig{0.5, 8});
  EXPECT_EQ(a.fits_used, 1u);
  EXPECT_EQ(a.lower, b.lower);
  EXPECT_EQ(a.upper, b.upper);
  EXPECT_NE(a.lower, c.lower);
}

TEST(Split, ConfigErrors) {
  const auto prob = testkit::synthetic(3, 10, 2, 2);
  const auto cfg = ConformalConfig::for_data(prob.data, 0.1);
  EXPECT_THROW(split_interval(RidgeSpec{1.0}, prob.data, cfg, SplitConfig{0.0, 0}), InvalidInput);
  EXPECT_THROW(split_interval(RidgeSpec{1.0}, prob.data, cfg, SplitConfig{1.0, 0}), InvalidInput);
  // floor(0.05 * 9) = 0 training rows.
  EXPECT_THROW(split_interval(RidgeSpec{1.0}, prob.data, cfg, SplitConfig{0.05, 0}), InvalidInput);
}

TEST(SplitProperty, MonteCarloCoverage) {
  const int reps = 400;
  int hits = 0;
  for (int r = 0; r < reps; ++r) {
    const auto prob = testkit::synthetic(1000 + r, 60, 5, 5);
    const auto cfg = ConformalConfig::for_data(prob.data, 0.1);
    hits += split_interval(RidgeSpec{1.0}, prob.data, cfg, SplitConfig{0.5, static_cast<std::uint64_t>(r)})
                .contains(prob.held_out);
  }
  const double coverage = static_cast<double>(hits) / reps;
  EXPECT_GE(coverage, 0.9 - 3 * std::sqrt(0.09 / reps));
}
