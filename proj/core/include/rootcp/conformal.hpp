#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "rootcp/dataset.hpp"

namespace rootcp {

/// Level, root tolerance and fit budget shared by every interval method.
struct ConformalConfig {
  double alpha = 0.1;
  /// Root tolerance in response units.
  double epsilon = 1e-4;
  std::size_t max_fits = 200;
  /// Seed for any internal data split (localization of the initial bracket).
  std::uint64_t seed = 0;

  /// Throws InvalidInput unless alpha is in (0,1), epsilon > 0 and max_fits > 0.
  void validate() const;

  /// Config whose epsilon is `relative_epsilon` times the observed response range.
  static ConformalConfig for_data(const Dataset& data, double alpha, double relative_epsilon = 1e-4);
};

// The kernel below operates on score vectors laid out as (E_1, ..., E_n, E_{n+1}), the last entry
// being the candidate's own score.

/// Number of entries <= the last one, counting the last entry itself. Always in [1, n+1].
std::size_t rank_of_last(std::span<const double> scores);

/// 1 - rank_of_last / (n+1). Lies on the grid {0, 1/(n+1), ..., n/(n+1)}.
double typicalness(std::span<const double> scores);

/// Fraction of entries with E_i >= E_{n+1} - slack. Accounts for an optimization error of the
/// underlying fit; at slack = 0 it is already an upper bound of typicalness().
double typicalness_with_slack(std::span<const double> scores, double slack);

/// k-th smallest value (1-based) of `values`; +infinity when k exceeds the length.
double order_statistic(std::span<const double> values, std::size_t k);

/// Order statistic of rank ceil((m+1) * level), m = values.size(). Returns +infinity when that
/// rank exceeds m, i.e. the sample is too small for the level.
double empirical_quantile(std::span<const double> values, double level);

/// ceil(x) robust to products such as 10 * 0.9 landing one ulp above an integer.
std::size_t ceil_index(double x);

/// pi >= level, forgiving the rounding of 1 - rank/(n+1) (1 - 108/120 < 0.1 in doubles).
bool reaches_level(double pi, double level);

}  // namespace rootcp
