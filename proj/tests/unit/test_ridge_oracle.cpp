#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "rootcp/error.hpp"
#include "rootcp/ridge_oracle.hpp"
#include "test_support.hpp"

using namespace rootcp;

TEST(ExactRidgeSet, ConstantPredictionsHandSolved) {
  // With a huge penalty every prediction is ~0 and pi(z) >= alpha reduces to |z| < 3.
  Eigen::MatrixXd x(2, 1);
  x << 1, -1;
  const Dataset data(x, Eigen::Vector2d(3.0, -3.0), Eigen::VectorXd::Ones(1));
  for (double alpha : {0.1, 0.5, 0.6}) {
    const auto set = exact_ridge_set(data, 1e12, alpha);
    ASSERT_TRUE(set.is_single_interval);
    EXPECT_NEAR(set.intervals[0].lo, -3.0, 1e-9);
    EXPECT_NEAR(set.intervals[0].hi, 3.0, 1e-9);
  }
  EXPECT_TRUE(exact_ridge_set(data, 1e12, 0.7).intervals.empty());
}

TEST(ExactRidgeSet, TestSlopeOfOneIsHandled) {
  Eigen::MatrixXd x(3, 1);
  x << 1, 2, 3;
  const Dataset data(x, Eigen::Vector3d(1, 2, 3), Eigen::VectorXd::Ones(1));
  AffineFitCoefficients c;
  c.intercepts = Eigen::Vector4d(0.5, 2.5, 2.0, 0.0);
  c.slopes = Eigen::Vector4d(0.0, 0.0, 0.0, 1.0);
  // The candidate residual is identically zero, so pi = 3/4 everywhere.
  const auto set = exact_set_from_affine(c, data, 0.5);
  ASSERT_EQ(set.intervals.size(), 1u);
  EXPECT_TRUE(std::isinf(set.intervals[0].lo));
  EXPECT_TRUE(std::isinf(set.intervals[0].hi));
  EXPECT_FALSE(set.hull().bounded());
}

TEST(ExactRidgeSet, DenseGridAgreesWithRefits) {
  testkit::Gen gen(91);
  for (int instance = 0; instance < 20; ++instance) {
    const Dataset data = gen.dataset(gen.integer(4, 15), gen.integer(1, 4));
    const double lambda = gen.uniform(0.05, 3.0);
    const double alpha = gen.uniform(0.05, 0.5);
    const auto set = exact_ridge_set(data, lambda, alpha);
    const double lo = data.min_response() - 10.0;
    const double hi = data.max_response() + 10.0;
    for (int g = 0; g < 10000; ++g) {
      const double z = lo + (hi - lo) * g / 9999.0;
      bool near_edge = false;
      for (const auto& s : set.intervals) near_edge |= std::abs(z - s.lo) < 1e-8 || std::abs(z - s.hi) < 1e-8;
      if (near_edge) continue;
      ASSERT_EQ(set.contains(z), testkit::refit_typicalness(RidgeSpec{lambda}, data, z) >= alpha)
          << "instance " << instance << " z " << z;
    }
  }
}

TEST(ExactRidgeSet, IntervalsSortedDisjointMaximal) {
  testkit::Gen gen(92);
  int multi = 0;
  for (int instance = 0; instance < 200; ++instance) {
    // Few rows and many features push the test leverage towards one, where unions appear.
    const int n = gen.integer(3, 8);
    const Dataset data = gen.dataset(n, gen.integer(n, n + 3));
    const auto set = exact_ridge_set(data, gen.uniform(0.01, 0.3), gen.uniform(0.05, 0.6));
    for (std::size_t j = 0; j < set.intervals.size(); ++j) {
      EXPECT_LE(set.intervals[j].lo, set.intervals[j].hi);
      if (j > 0) EXPECT_LT(set.intervals[j - 1].hi, set.intervals[j].lo);
    }
    EXPECT_EQ(set.is_single_interval, set.intervals.size() == 1);
    if (set.intervals.size() > 1) {
      ++multi;
      EXPECT_FALSE(set.hull().warnings.empty());
    }
  }
  RecordProperty("multi_interval_instances", multi);
}

TEST(ExactRidgeSet, MonteCarloCoverage) {
  const int reps = 300;
  int hits = 0;
  for (int r = 0; r < reps; ++r) {
    const auto prob = testkit::synthetic(5000 + r, 60, 5, 5);
    hits += exact_ridge_set(prob.data, 1.0, 0.1).contains(prob.held_out) ? 1 : 0;
  }
  const double coverage = static_cast<double>(hits) / reps;
  EXPECT_GE(coverage, 0.9 - 3 * std::sqrt(0.09 / reps));
  EXPECT_LE(coverage, 0.9 + 3 * std::sqrt(0.09 / reps) + 1.0 / 60);
}

TEST(ExactRidgeSet, Errors) {
  const auto prob = testkit::synthetic(93, 20, 3, 3);
  EXPECT_THROW(exact_ridge_set(prob.data, 1.0, 0.0), InvalidInput);
  AffineFitCoefficients wrong{Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(3)};
  EXPECT_THROW(exact_set_from_affine(wrong, prob.data, 0.1), InvalidInput);
}
