#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "rootcp/error.hpp"
#include "rootcp/interp_cp.hpp"
#include "rootcp/ridge_oracle.hpp"
#include "test_support.hpp"

using namespace rootcp;

namespace {

// Straightforward re-implementation used as the dense-grid reference.
double brute_interp_pi(const std::vector<double>& knots, const Eigen::MatrixXd& preds, const Dataset& data,
                       double z) {
  std::size_t t = 0;
  while (t + 2 < knots.size() && z > knots[t + 1]) ++t;
  const double w = (z - knots[t]) / (knots[t + 1] - knots[t]);
  const Eigen::Index n = data.n();
  const auto mu = [&](Eigen::Index i) {
    return (1 - w) * preds(static_cast<Eigen::Index>(t), i) + w * preds(static_cast<Eigen::Index>(t + 1), i);
  };
  const double own = std::abs(z - mu(n));
  int rank = 1;
  for (Eigen::Index i = 0; i < n; ++i) rank += std::abs(data.responses()(i) - mu(i)) <= own ? 1 : 0;
  return 1.0 - static_cast<double>(rank) / static_cast<double>(n + 1);
}

}  // namespace

TEST(InterpMap, RidgeIsReproducedExactly) {
  const auto prob = testkit::synthetic(5, 80, 8, 8);
  const RegressorSpec ridge = RidgeSpec{1.0};
  const auto map = build_interp_map(ridge, prob.data, Interval{0.0, 1.0}, 2);
  EXPECT_EQ(map.fits, 4u);
  EXPECT_EQ(map.knots.size(), 4u);
  testkit::Gen gen(51);
  for (int k = 0; k < 20; ++k) {
    const double z = gen.uniform(-30, 30);
    const Eigen::VectorXd exact = fit(ridge, prob.data, z).predict_rows(prob.data.augmented_features());
    EXPECT_LE((interp_predict_all(map, z) - exact).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_NEAR(interp_predict(map, z, 3), exact(3), 1e-8);
  }
}

TEST(InterpMap, KnotsMidpointsAndContinuity) {
  const auto prob = testkit::synthetic(6, 40, 5, 5);
  const auto map = build_interp_map(KnnSpec{3}, prob.data, Interval{-1.0, 2.0}, 4);
  for (std::size_t t = 0; t < map.knots.size(); ++t) {
    const Eigen::VectorXd at = interp_predict_all(map, map.knots[t]);
    EXPECT_EQ(at, map.predictions.row(static_cast<Eigen::Index>(t)).transpose());
  }
  for (std::size_t t = 0; t + 1 < map.knots.size(); ++t) {
    const double mid = 0.5 * (map.knots[t] + map.knots[t + 1]);
    const Eigen::VectorXd expected =
        0.5 * (map.predictions.row(static_cast<Eigen::Index>(t)) + map.predictions.row(static_cast<Eigen::Index>(t + 1)))
                  .transpose();
    EXPECT_LE((interp_predict_all(map, mid) - expected).cwiseAbs().maxCoeff(), 1e-12);
    const double k = map.knots[t + 1];
    const double h = 1e-9 * std::max(1.0, std::abs(k));
    EXPECT_NEAR(interp_predict(map, k - h, 0), interp_predict(map, k + h, 0), 1e-6);
  }
  // Query points are the d evenly spaced interior knots.
  const auto q = map.query_points();
  ASSERT_EQ(q.size(), 4u);
  EXPECT_DOUBLE_EQ(q.front(), -1.0);
  EXPECT_DOUBLE_EQ(q.back(), 2.0);
}

TEST(InterpMap, ExtrapolationContinuesOuterSegments) {
  Eigen::MatrixXd preds(3, 3);
  preds << 0, 1, 2,  //
      1, 1, 4,       //
      3, 1, 4;
  const auto map = interp_map_from_samples({{1.0, preds.row(1).transpose()},
                                            {0.0, preds.row(0).transpose()},
                                            {2.0, preds.row(2).transpose()}});
  EXPECT_DOUBLE_EQ(interp_predict(map, -1.0, 0), -1.0);
  EXPECT_DOUBLE_EQ(interp_predict(map, -1.0, 2), 0.0);
  EXPECT_DOUBLE_EQ(interp_predict(map, 4.0, 0), 7.0);
  EXPECT_DOUBLE_EQ(interp_predict(map, 4.0, 2), 4.0);
}

TEST(InterpMap, Errors) {
  const auto prob = testkit::synthetic(7, 20, 3, 3);
  EXPECT_THROW(build_interp_map(RidgeSpec{1.0}, prob.data, Interval{1.0, 1.0}, 4), InvalidInput);
  EXPECT_THROW(build_interp_map(RidgeSpec{1.0}, prob.data, Interval{0.0, 1.0}, 0), InvalidInput);
  EXPECT_THROW(interp_map_from_samples({{0.0, Eigen::VectorXd::Zero(3)}}), InvalidInput);
  const auto map = build_interp_map(RidgeSpec{1.0}, prob.data, Interval{0.0, 1.0}, 2);
  EXPECT_THROW(interp_conformal_set(map, prob.data, ScoreFunction::linex(1.0), 0.1), Unsupported);
}

TEST(InterpSet, RidgeMatchesExactSet) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto prob = testkit::synthetic(100 + seed, 60, 10, 10);
    const auto map = build_interp_map(RidgeSpec{1.0}, prob.data, Interval{-1.0, 1.0}, 3);
    const auto set = interp_conformal_set(map, prob.data, ScoreFunction::absolute(), 0.1);
    const auto exact = exact_ridge_set(prob.data, 1.0, 0.1);
    ASSERT_EQ(set.size(), exact.intervals.size()) << seed;
    for (std::size_t j = 0; j < set.size(); ++j) {
      EXPECT_NEAR(set[j].lo, exact.intervals[j].lo, 1e-8);
      EXPECT_NEAR(set[j].hi, exact.intervals[j].hi, 1e-8);
    }
  }
}

TEST(InterpSet, DominatingCandidateGivesEmptySentinel) {
  Eigen::MatrixXd x(3, 1);
  x << 1, 2, 3;
  const Dataset data(x, Eigen::Vector3d(1, 2, 3), Eigen::VectorXd::Ones(1));
  // Observed rows predicted exactly; the test row is predicted at z + 100.
  Eigen::VectorXd at0(4), at1(4);
  at0 << 1, 2, 3, 100;
  at1 << 1, 2, 3, 101;
  auto map = interp_map_from_samples({{0.0, at0}, {1.0, at1}});
  map.fits = 2;
  ConformalConfig cfg;
  const auto ci = interp_conformal_interval(map, data, ScoreFunction::absolute(), cfg);
  EXPECT_TRUE(ci.empty);
  EXPECT_FALSE(ci.contains(0.0));
  EXPECT_EQ(ci.warnings.size(), 1u);
}

TEST(InterpSetProperty, CrossingsMatchDenseGrid) {
  testkit::Gen gen(52);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = gen.integer(3, 15);
    const Dataset data = gen.dataset(n, 2);
    const std::vector<double> knots{-2.0, gen.uniform(-1.0, 1.0), 2.0};
    Eigen::MatrixXd preds(3, n + 1);
    for (Eigen::Index k = 0; k < preds.size(); ++k) preds.data()[k] = gen.uniform(-2, 2);
    std::vector<std::pair<double, Eigen::VectorXd>> samples;
    for (int t = 0; t < 3; ++t) samples.emplace_back(knots[static_cast<std::size_t>(t)], preds.row(t).transpose());
    const auto map = interp_map_from_samples(samples);
    const double alpha = gen.uniform(0.05, 0.5);
    const auto set = interp_conformal_set(map, data, ScoreFunction::absolute(), alpha);
    for (int g = 0; g < 10000; ++g) {
      const double z = -6.0 + 12.0 * g / 9999.0;
      const bool near_edge = std::any_of(set.begin(), set.end(), [z](const Interval& s) {
        return std::abs(z - s.lo) < 1e-9 || std::abs(z - s.hi) < 1e-9;
      });
      if (near_edge) continue;
      const bool in_set = std::any_of(set.begin(), set.end(), [z](const Interval& s) { return s.contains(z); });
      ASSERT_EQ(in_set, brute_interp_pi(knots, preds, data, z) >= alpha) << "trial " << trial << " z " << z;
    }
  }
}

TEST(InterpInterval, FitAccountingAndPermutationSymmetry) {
  const auto prob = testkit::synthetic(8, 80, 6, 6);
  const auto cfg = ConformalConfig::for_data(prob.data, 0.1);
  const auto ci = interpolated_conformal_interval(RidgeSpec{1.0}, prob.data, cfg, 8);
  // One localization fit plus d + 2 map fits, no rebuild needed here.
  EXPECT_EQ(ci.fits_used, 11u);
  EXPECT_EQ(ci.method, Method::interp);

  const auto map = build_interp_map(KnnSpec{5}, prob.data, Interval{-2.0, 2.0}, 8);
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(prob.data.n()));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  std::reverse(perm.begin(), perm.end());
  Eigen::MatrixXd xp(prob.data.n(), prob.data.p());
  Eigen::VectorXd yp(prob.data.n());
  for (Eigen::Index i = 0; i < prob.data.n(); ++i) {
    xp.row(i) = prob.data.features().row(perm[static_cast<std::size_t>(i)]);
    yp(i) = prob.data.responses()(perm[static_cast<std::size_t>(i)]);
  }
  const Dataset permuted(xp, yp, prob.data.test_features());
  const auto pmap = build_interp_map(KnnSpec{5}, permuted, Interval{-2.0, 2.0}, 8);
  for (Eigen::Index i = 0; i < prob.data.n(); ++i) {
    EXPECT_NEAR(interp_predict(map, 0.3, perm[static_cast<std::size_t>(i)]), interp_predict(pmap, 0.3, i), 1e-10);
  }
}
