#pragma once

#include <string>

namespace rootcp {

enum class ScoreKind { absolute, squared, linex };

/// Conformity score S(truth, prediction).
///
/// `linex` is the asymmetric loss exp(g d) - g d - 1 with d = truth - prediction and g = gamma != 0.
struct ScoreFunction {
  ScoreKind kind = ScoreKind::absolute;
  double gamma = 1.0;

  static ScoreFunction absolute() { return {ScoreKind::absolute, 1.0}; }
  static ScoreFunction squared() { return {ScoreKind::squared, 1.0}; }
  /// Throws InvalidInput when gamma is zero or not finite.
  static ScoreFunction linex(double gamma);
};

/// Throws InvalidInput on non-finite arguments.
double score(const ScoreFunction& fn, double truth, double prediction);

/// Closed interval {z : score(fn, z, prediction) <= threshold}.
///
/// Every supported score is zero at z = prediction and monotone on each side of it, so the level
/// set is an interval. An infinite threshold gives the whole line; a negative one gives an empty
/// set, reported as lower > upper.
struct LevelSet {
  double lower;
  double upper;
};
LevelSet score_level_set(const ScoreFunction& fn, double prediction, double threshold);

std::string to_string(ScoreKind kind);

}  // namespace rootcp
