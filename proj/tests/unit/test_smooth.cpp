#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "rootcp/error.hpp"
#include "rootcp/ridge_oracle.hpp"
#include "rootcp/root_cp.hpp"
#include "rootcp/smooth_cp.hpp"
#include "test_support.hpp"

using namespace rootcp;

namespace {

SmoothingConfig with(Envelope e, double gamma) {
  SmoothingConfig s;
  s.envelope = e;
  s.gamma = gamma;
  return s;
}

double sigmoid_ref(double gamma, double x) { return 1.0 / (1.0 + std::exp(gamma * x)); }

}  // namespace

TEST(Phi, Examples) {
  EXPECT_DOUBLE_EQ(phi(Envelope::sigmoid, 3.0, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(phi(Envelope::sigmoid, 1.0, -700.0), 1.0);
  EXPECT_DOUBLE_EQ(phi(Envelope::sigmoid, 1.0, 800.0), 0.0);
  EXPECT_FALSE(std::isnan(phi(Envelope::sigmoid, 1e6, -1e6)));
  for (double x : {1e-9, 0.3, 5.0}) EXPECT_DOUBLE_EQ(phi(Envelope::lower_ramp, 10.0, x), 0.0);
  for (double x : {0.0, -1e-9, -4.0}) EXPECT_DOUBLE_EQ(phi(Envelope::upper_ramp, 10.0, x), 1.0);
  EXPECT_DOUBLE_EQ(phi(Envelope::lower_ramp, 10.0, -0.05), 0.5);
  EXPECT_DOUBLE_EQ(phi(Envelope::upper_ramp, 10.0, 0.05), 0.5);
}

TEST(PhiProperty, EnvelopesSandwichIndicatorAndAreNonIncreasing) {
  testkit::Gen gen(71);
  for (int trial = 0; trial < 2000; ++trial) {
    const double g = std::pow(10.0, gen.uniform(-1, 4));
    const double x = gen.uniform(-3, 3);
    const double x2 = x + gen.uniform(0, 1);
    const double ind = x <= 0 ? 1.0 : 0.0;
    EXPECT_LE(phi(Envelope::lower_ramp, g, x), ind);
    EXPECT_GE(phi(Envelope::upper_ramp, g, x), ind);
    for (auto e : {Envelope::sigmoid, Envelope::lower_ramp, Envelope::upper_ramp}) {
      EXPECT_GE(phi(e, g, x), phi(e, g, x2));
      EXPECT_LE(phi(e, g, x) - ind, delta(e, g) + 1e-15);
    }
    EXPECT_NEAR(phi(Envelope::sigmoid, g, x), sigmoid_ref(g, x), 1e-14);
  }
}

TEST(SmoothRank, Examples) {
  const std::vector<double> equal{2, 2, 2, 2};
  EXPECT_DOUBLE_EQ(smooth_rank(equal, with(Envelope::sigmoid, 5.0)), 2.0);
  EXPECT_DOUBLE_EQ(smooth_typicalness(equal, with(Envelope::sigmoid, 5.0)), 0.5);
  const std::vector<double> s{1, 2, 3};
  const double expected = sigmoid_ref(1, -2) + sigmoid_ref(1, -1) + 0.5;
  EXPECT_NEAR(smooth_rank(s, with(Envelope::sigmoid, 1.0)), expected, 1e-14);
  EXPECT_NEAR(expected, 2.1119, 1e-4);
  EXPECT_NEAR(smooth_typicalness(s, with(Envelope::sigmoid, 1.0)), 0.2960, 1e-4);
}

TEST(SmoothRank, RampsConvergeToHardRank) {
  testkit::Gen gen(72);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = gen.scores(gen.integer(2, 20));
    const double hard = static_cast<double>(rank_of_last(s));
    EXPECT_DOUBLE_EQ(smooth_rank(s, with(Envelope::upper_ramp, 1e12)), hard);
    const double pi = typicalness(s);
    EXPECT_GE(smooth_typicalness(s, with(Envelope::lower_ramp, 3.0)), pi);
    EXPECT_LE(smooth_typicalness(s, with(Envelope::upper_ramp, 3.0)), pi);
  }
}

TEST(SmoothRankProperty, MonotoneInCandidateScore) {
  testkit::Gen gen(73);
  for (int trial = 0; trial < 300; ++trial) {
    auto s = gen.scores(gen.integer(2, 20));
    const auto cfg = with(trial % 3 == 0 ? Envelope::sigmoid : trial % 3 == 1 ? Envelope::lower_ramp : Envelope::upper_ramp,
                          gen.uniform(0.1, 20));
    const double before = smooth_rank(s, cfg);
    s.back() += gen.uniform(0, 2);
    EXPECT_GE(smooth_rank(s, cfg), before - 1e-12);
  }
}

TEST(SmoothRankProperty, DerivativeMatchesFiniteDifferences) {
  testkit::Gen gen(74);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> s(static_cast<std::size_t>(gen.integer(2, 20)));
    for (auto& v : s) v = gen.uniform(0, 3);
    const auto cfg = with(Envelope::sigmoid, gen.uniform(0.5, 10));
    const double h = 1e-6;
    auto up = s, down = s;
    up.back() += h;
    down.back() -= h;
    const double fd = (smooth_rank(up, cfg) - smooth_rank(down, cfg)) / (2 * h);
    const double an = smooth_rank_derivative(s, cfg);
    EXPECT_NEAR(an, fd, 1e-5 * std::max(1.0, std::abs(fd)));
  }
}

TEST(Delta, ClosedFormsAndCalibration) {
  EXPECT_DOUBLE_EQ(delta(Envelope::sigmoid, 7.0), 0.5);
  EXPECT_DOUBLE_EQ(delta(Envelope::lower_ramp, 7.0), 0.0);
  EXPECT_DOUBLE_EQ(delta(Envelope::upper_ramp, 7.0), 1.0);
  EXPECT_DOUBLE_EQ(calibrated_threshold(0.1, Envelope::lower_ramp, 3.0), 0.1);
  EXPECT_TRUE(is_calibrated(0.1, with(Envelope::lower_ramp, 3.0)));
  EXPECT_FALSE(is_calibrated(0.1, with(Envelope::sigmoid, 3.0)));
  EXPECT_THROW(delta(Envelope::sigmoid, 0.0), InvalidInput);
}

TEST(SmoothProperty, MonteCarloMiscoverage) {
  // pi_smooth >= pi - delta, so P(pi_smooth < level - delta) <= P(pi < level) <= level.
  testkit::Gen gen(75);
  const int trials = 5000;
  for (auto e : {Envelope::sigmoid, Envelope::lower_ramp}) {
    const auto cfg = with(e, 20.0);
    for (double level : {0.1, 0.3}) {
      int hits = 0;
      for (int t = 0; t < trials; ++t) {
        std::vector<double> s(20);
        for (auto& v : s) v = gen.uniform();
        hits += reaches_level(smooth_typicalness(s, cfg), level - delta(e, 20.0)) ? 0 : 1;
      }
      const double rate = static_cast<double>(hits) / trials;
      EXPECT_LE(rate, level + 3 * std::sqrt(level * (1 - level) / trials)) << to_string(e) << " " << level;
    }
  }
}

TEST(SmoothInterval, LargeGammaTracksHardInterval) {
  // n + 1 = 300 with alpha = 0.1: the hard set boundaries are where the smoothed rank crosses too.
  const auto prob = testkit::synthetic(81);
  auto cfg = ConformalConfig::for_data(prob.data, 0.1);
  const auto hard = conformal_interval(RidgeSpec{1.0}, prob.data, cfg);
  auto s = with(Envelope::sigmoid, 1e4);
  const auto smooth = smooth_conformal_interval(RidgeSpec{1.0}, prob.data, cfg, s);
  EXPECT_EQ(smooth.method, Method::smooth);
  EXPECT_NEAR(smooth.lower, hard.lower, 2 * cfg.epsilon);
  EXPECT_NEAR(smooth.upper, hard.upper, 2 * cfg.epsilon);
}

TEST(SmoothInterval, SmallGammaDiffers) {
  const auto prob = testkit::synthetic(82);
  auto cfg = ConformalConfig::for_data(prob.data, 0.1);
  const auto hard = conformal_interval(RidgeSpec{1.0}, prob.data, cfg);
  const auto smooth = smooth_conformal_interval(RidgeSpec{1.0}, prob.data, cfg, with(Envelope::sigmoid, 1.0));
  EXPECT_GT(std::abs(smooth.lower - hard.lower) + std::abs(smooth.upper - hard.upper), 100 * cfg.epsilon);
}

TEST(SmoothInterval, EnvelopesNestAroundExactSet) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto prob = testkit::synthetic(300 + seed, 120, 10, 10);
    auto cfg = ConformalConfig::for_data(prob.data, 0.1);
    cfg.epsilon = 1e-6;
    const auto exact = exact_ridge_set(prob.data, 1.0, 0.1).hull();
    const auto lower = smooth_conformal_interval(RidgeSpec{1.0}, prob.data, cfg, with(Envelope::lower_ramp, 100));
    const auto upper = smooth_conformal_interval(RidgeSpec{1.0}, prob.data, cfg, with(Envelope::upper_ramp, 100));
    EXPECT_LE(lower.lower, exact.lower + cfg.epsilon);
    EXPECT_GE(lower.upper, exact.upper - cfg.epsilon);
    EXPECT_GE(upper.lower, exact.lower - cfg.epsilon);
    EXPECT_LE(upper.upper, exact.upper + cfg.epsilon);
  }
}

TEST(SmoothInterval, NonPositiveThresholdIsWholeLine) {
  const auto prob = testkit::synthetic(83, 40, 4, 4);
  const auto cfg = ConformalConfig::for_data(prob.data, 0.1);
  auto s = with(Envelope::sigmoid, 10);
  s.target_alpha = calibrated_threshold(0.1, Envelope::sigmoid, 10);
  const auto ci = smooth_conformal_interval(RidgeSpec{1.0}, prob.data, cfg, s);
  EXPECT_FALSE(ci.bounded());
  EXPECT_EQ(ci.fits_used, 0u);
}

TEST(SmoothInterval, EffectiveGammaUsesScoreSpread) {
  const auto prob = testkit::synthetic(84, 60, 5, 5);
  auto s = with(Envelope::sigmoid, 100);
  const double scaled = effective_gamma(RidgeSpec{1.0}, prob.data, s, ScoreFunction::absolute());
  EXPECT_GT(scaled, 0.0);
  EXPECT_NE(scaled, 100.0);
  s.scale_by_score_iqr = false;
  EXPECT_DOUBLE_EQ(effective_gamma(RidgeSpec{1.0}, prob.data, s, ScoreFunction::absolute()), 100.0);
}
