#include "rootcp/split_cp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "rootcp/error.hpp"

namespace rootcp {

ConformalInterval split_interval_from_scores(std::span<const double> calibration_scores, double prediction,
                                             double alpha, const ScoreFunction& score_fn) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("split: alpha must lie in (0, 1)");
  const double q = empirical_quantile(calibration_scores, 1.0 - alpha);
  const LevelSet set = score_level_set(score_fn, prediction, q);

  ConformalInterval out;
  out.method = Method::split;
  out.lower = set.lower;
  out.upper = set.upper;
  out.fits_used = 0;
  if (!std::isfinite(q)) {
    out.warnings.push_back("calibration set too small for alpha = " + std::to_string(alpha) +
                           "; interval is unbounded");
  }
  return out;
}

ConformalInterval split_interval(const RegressorSpec& regressor, const Dataset& data, const ConformalConfig& cfg,
                                 const SplitConfig& split, const ScoreFunction& score_fn) {
  cfg.validate();
  if (!(split.train_fraction > 0.0 && split.train_fraction < 1.0)) {
    throw InvalidInput("split: train_fraction must lie in (0, 1)");
  }
  const Eigen::Index n = data.n();
  const auto m = static_cast<Eigen::Index>(std::floor(split.train_fraction * static_cast<double>(n)));
  if (m < 1 || n - m < 1) {
    throw InvalidInput("split: train size " + std::to_string(m) + " and calibration size " +
                       std::to_string(n - m) + " must both be >= 1");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::mt19937_64 rng(split.shuffle_seed);
  std::shuffle(order.begin(), order.end(), rng);

  Eigen::MatrixXd train_x(m, data.p());
  Eigen::VectorXd train_y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    train_x.row(i) = data.features().row(order[static_cast<std::size_t>(i)]);
    train_y(i) = data.responses()(order[static_cast<std::size_t>(i)]);
  }
  const FittedModel model = fit_rows(regressor, train_x, train_y);

  std::vector<double> cal_scores;
  cal_scores.reserve(static_cast<std::size_t>(n - m));
  for (Eigen::Index i = m; i < n; ++i) {
    const Eigen::Index row = order[static_cast<std::size_t>(i)];
    cal_scores.push_back(score(score_fn, data.responses()(row), model.predict(data.features().row(row).transpose())));
  }
  ConformalInterval out =
      split_interval_from_scores(cal_scores, model.predict(data.test_features()), cfg.alpha, score_fn);
  out.fits_used = 1;
  out.epsilon = 0.0;
  return out;
}

}  // namespace rootcp
