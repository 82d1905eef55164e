#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rootcp/conformal.hpp"
#include "rootcp/dataset.hpp"
#include "rootcp/interval.hpp"
#include "rootcp/regressor.hpp"
#include "rootcp/score.hpp"
#include "rootcp/split_cp.hpp"

namespace rootcp {

/// Piecewise-linear interpolation of z -> mu_z(x_i) over fitted knots.
///
/// Knots are strictly increasing; row t of `predictions` holds the fitted predictions on the n+1
/// augmented rows at knots[t]. Outside the knot range the first/last segment is extended linearly.
/// When built by build_interp_map the first and last knots are the extrapolation anchors and the
/// query points sit strictly between them.
struct InterpolatedFitMap {
  std::vector<double> knots;
  Eigen::MatrixXd predictions;
  /// [z-, z+] covered by the evenly spaced query points.
  Interval query_range{0.0, 0.0};
  std::size_t fits = 0;

  Eigen::Index rows() const { return predictions.cols(); }
  std::vector<double> query_points() const;
};

/// d evenly spaced query fits on `bracket` plus one anchor fit on each side: d + 2 fits.
/// Anchors are min/max observed response, pushed outside the bracket when they fall inside it.
/// Throws InvalidInput when bracket.lo >= bracket.hi, the bracket is not finite or d < 1.
InterpolatedFitMap build_interp_map(const RegressorSpec& regressor, const Dataset& data,
                                    Interval bracket, int d = 8);

/// Map over already-fitted samples; used by the initialization to reuse its probes.
/// Samples need not be sorted; duplicates are dropped. Needs at least two distinct knots.
InterpolatedFitMap interp_map_from_samples(std::vector<std::pair<double, Eigen::VectorXd>> samples);

double interp_predict(const InterpolatedFitMap& map, double z, Eigen::Index row);
Eigen::VectorXd interp_predict_all(const InterpolatedFitMap& map, double z);

/// Exact level set {z : pi~(z) >= alpha} of the interpolated typicalness, as sorted maximal
/// disjoint intervals (possibly unbounded). Absolute and squared scores only.
std::vector<Interval> interp_conformal_set(const InterpolatedFitMap& map, const Dataset& data,
                                           const ScoreFunction& score_fn, double alpha);

/// Outer hull of interp_conformal_set, warning about interior gaps. Zero additional fits.
/// An empty set is returned with `empty` set and a warning.
ConformalInterval interp_conformal_interval(const InterpolatedFitMap& map, const Dataset& data,
                                            const ScoreFunction& score_fn,
                                            const ConformalConfig& cfg);

/// Localize with the split interval enlarged by 50% on each side, build the map, compute the set.
/// If an endpoint falls beyond the anchors, the bracket is widened around it and the map rebuilt
/// (at most twice). fits_used counts the localization fit too.
ConformalInterval interpolated_conformal_interval(const RegressorSpec& regressor,
                                                  const Dataset& data, const ConformalConfig& cfg,
                                                  int d = 8, const SplitConfig& split = {},
                                                  const ScoreFunction& score_fn = ScoreFunction::absolute());

}  // namespace rootcp
