#pragma once

#include <vector>

#include "rootcp/dataset.hpp"
#include "rootcp/interval.hpp"
#include "rootcp/regressor.hpp"

namespace rootcp {

struct ExactConformalSet {
  /// Sorted, disjoint, maximal; ends may be infinite.
  std::vector<Interval> intervals;
  bool is_single_interval = false;

  /// Hull as a ConformalInterval; empty when there are no intervals.
  ConformalInterval hull() const;
  bool contains(double z) const;
};

/// Exact full conformal set of ridge regression with the absolute score.
///
/// Every |y_i - a_i - b_i z| - |z - a_{n+1} - b_{n+1} z| changes sign at no more than two roots;
/// typicalness is constant between consecutive roots and is evaluated once per cell. O(n^2).
ExactConformalSet exact_ridge_set(const Dataset& data, double lambda, double alpha);

ExactConformalSet exact_set_from_affine(const AffineFitCoefficients& coeffs, const Dataset& data,
                                        double alpha);

}  // namespace rootcp
