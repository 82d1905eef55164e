#pragma once

#include <cstdint>
#include <span>

#include "rootcp/conformal.hpp"
#include "rootcp/dataset.hpp"
#include "rootcp/interval.hpp"
#include "rootcp/regressor.hpp"
#include "rootcp/score.hpp"

namespace rootcp {

struct SplitConfig {
  double train_fraction = 0.5;
  std::uint64_t shuffle_seed = 0;
};

/// Inductive conformal interval: one fit on a shuffled training part, score quantile on the rest.
///
/// The interval is {z : S(z, mu_tr(x_{n+1})) <= Q}, which for the absolute score is
/// [mu_tr(x_{n+1}) +/- Q]. When the calibration part is too small for the level, Q is infinite and
/// the interval is the whole line (with a warning).
ConformalInterval split_interval(const RegressorSpec& regressor, const Dataset& data,
                                 const ConformalConfig& cfg, const SplitConfig& split = {},
                                 const ScoreFunction& score_fn = ScoreFunction::absolute());

/// The quantile-and-level-set step alone, given calibration scores and the test prediction.
ConformalInterval split_interval_from_scores(std::span<const double> calibration_scores,
                                             double prediction, double alpha,
                                             const ScoreFunction& score_fn = ScoreFunction::absolute());

}  // namespace rootcp
