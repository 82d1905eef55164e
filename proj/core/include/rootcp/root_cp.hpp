#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>

#include "rootcp/conformal.hpp"
#include "rootcp/dataset.hpp"
#include "rootcp/interval.hpp"
#include "rootcp/profile.hpp"
#include "rootcp/regressor.hpp"
#include "rootcp/score.hpp"
#include "rootcp/split_cp.hpp"

namespace rootcp {

/// A bisection bracket on a level crossing: exactly one end has value >= the level.
struct Bracket {
  double lo;
  double hi;
  double lo_value;
  double hi_value;
};

/// Inputs to the z0 cascade beyond the profile itself.
struct InitializationHints {
  /// Stage 1: prediction at x_{n+1} of a model trained on D_n.
  std::optional<double> point_prediction;
  /// Stages 2-4: an estimate of the conformal set (typically the split interval). Called at most
  /// once, and only if stage 1 fails.
  std::function<std::optional<Interval>()> localization;
  /// Coarse-tolerance profile ranking the stage 3-4 candidates; winners are confirmed on the
  /// main profile.
  TypicalnessProfile* preview = nullptr;
  int grid_size = 10;
  int refinement_rounds = 3;
  int max_expansions = 10;
};

struct Initialization {
  double z_min;
  double z0;
  double z_max;
  /// 1 = point prediction, 2 = localization midpoint, 3 = grid, 4 = interpolation refinement.
  int stage;
};

/// Find z_min < z0 < z_max with pi(z_min) < alpha <= pi(z0) and pi(z_max) < alpha.
///
/// Outer bounds start at the observed response range and are pushed outward by the current width
/// at most `max_expansions` times. Throws InitializationFailed (with every probe) when the cascade
/// or the expansion gives up, or the fit budget runs out.
Initialization initialize(TypicalnessProfile& profile, const Dataset& data,
                          const ConformalConfig& cfg, const InitializationHints& hints);

/// Bisection on pi(z) - alpha between `inner` (pi >= alpha) and `outer` (pi < alpha).
///
/// Returns the midpoint of a final bracket of width <= 2 epsilon, so a crossing lies within
/// epsilon of the result. Also stops once |pi(mid) - alpha| <= value_tol (only meaningful for
/// continuous profiles; 0 disables it). Throws InvalidInput if the bracket condition fails.
double bisect_edge(TypicalnessProfile& profile, double inner, double outer,
                   const ConformalConfig& cfg, double value_tol = 0.0);

/// Number of bisection steps bisect_edge spends on a bracket of this width.
std::size_t bisection_steps(double width, double epsilon);

struct RootSearchOptions {
  ScoreFunction score = ScoreFunction::absolute();
  /// When set, bisect the slack-adjusted typicalness instead of the exact one.
  std::optional<double> slack;
  std::size_t interior_probes = 5;
  /// Training fraction of the split that localizes the set when the point prediction is not
  /// typical; the shuffle uses ConformalConfig::seed.
  double localization_train_fraction = 0.5;
};

/// Initialization + two bisections on a ready-made profile. Every fit the profiles made before the
/// call counts as initialization, as do `aux_fits` spent by the caller outside them.
ConformalInterval search_interval(TypicalnessProfile& profile, TypicalnessProfile* preview,
                                  const Dataset& data, const ConformalConfig& cfg,
                                  const InitializationHints& hints, std::size_t aux_fits,
                                  std::size_t interior_probes, double value_tol = 0.0);

/// Profile whose every evaluation refits `regressor` on D_{n+1}(z) (warm-started from the previous
/// evaluation) and reduces the n+1 scores with `reduce`.
TypicalnessProfile make_fit_profile(const RegressorSpec& regressor, const Dataset& data,
                                    const ScoreFunction& score_fn,
                                    std::function<double(std::span<const double>)> reduce,
                                    std::size_t max_fits);

/// Record pi at the D_n point prediction z_hat using the D_n fit itself, and return z_hat.
///
/// For ridge and lasso, appending the pair (x_{n+1}, z_hat) adds a zero residual and leaves the
/// minimizer unchanged, so the D_n fit doubles as the fit on D_{n+1}(z_hat). kNN has no such
/// identity and `observed_fit_reused` is false; the caller then owes one extra fit.
double record_point_prediction(TypicalnessProfile& profile, const RegressorSpec& regressor,
                               const FittedModel& observed, const Dataset& data,
                               bool& observed_fit_reused);

/// Full conformal interval by root-finding on the typicalness function.
///
/// Assumes the conformal set is an interval; after the search five interior points are probed
/// and a "possibly non-interval" warning is attached if any is not typical.
ConformalInterval conformal_interval(const RegressorSpec& regressor, const Dataset& data,
                                     const ConformalConfig& cfg,
                                     const RootSearchOptions& options = {});

struct IntervalCondition {
  bool holds;
  double a_max;
  double b_min;
};

/// The set {z : E_i(z) >= E_{n+1}(z)} for one observed index when predictions are affine in z,
/// absolute score. `split` means the set is the complement of a bounded open interval, i.e. the
/// difference E_i - E_{n+1} is not quasi-concave.
struct DominanceSet {
  enum class Shape { empty, interval, split };
  Shape shape;
  /// The interval itself (ends may be infinite) or, for `split`, the excluded gap.
  Interval bounds;
};
DominanceSet dominance_set(double response, double intercept, double slope, double test_intercept,
                           double test_slope);

/// max_i a_i <= min_i b_i.
IntervalCondition interval_condition_from_zeros(std::span<const double> a, std::span<const double> b);

/// Sufficient condition for the conformal set to be an interval, evaluated exactly for a fit that
/// is affine in z. Indices whose difference never turns non-negative are skipped; an index whose
/// difference is not quasi-concave makes the condition fail. Absolute score only.
IntervalCondition check_interval_condition(const AffineFitCoefficients& coeffs,
                                           const Dataset& data, const ScoreFunction& score_fn);

}  // namespace rootcp
