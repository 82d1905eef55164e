#include "rootcp/score.hpp"

#include <cmath>
#include <limits>

#include "rootcp/error.hpp"

namespace rootcp {

namespace {

double linex(double gamma, double d) {
  const double gd = gamma * d;
  // expm1 keeps the small-|d| regime accurate: exp(gd) - 1 - gd.
  return std::expm1(gd) - gd;
}

// Root of linex(gamma, d) = threshold for d on the side given by `sign`.
double linex_root(double gamma, double threshold, double sign) {
  double inside = 0.0;
  double outside = sign;
  while (linex(gamma, outside) <= threshold) {
    inside = outside;
    outside *= 2.0;
    if (!std::isfinite(outside)) return sign * std::numeric_limits<double>::infinity();
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (inside + outside);
    if (mid == inside || mid == outside) break;
    if (linex(gamma, mid) <= threshold) {
      inside = mid;
    } else {
      outside = mid;
    }
  }
  return inside;
}

}  // namespace

ScoreFunction ScoreFunction::linex(double gamma) {
  if (!std::isfinite(gamma) || gamma == 0.0) {
    throw InvalidInput("linex score: gamma must be finite and nonzero");
  }
  return {ScoreKind::linex, gamma};
}

double score(const ScoreFunction& fn, double truth, double prediction) {
  if (!std::isfinite(truth) || !std::isfinite(prediction)) {
    throw InvalidInput("score: non-finite input");
  }
  const double d = truth - prediction;
  switch (fn.kind) {
    case ScoreKind::absolute:
      return std::abs(d);
    case ScoreKind::squared:
      return d * d;
    case ScoreKind::linex:
      return linex(fn.gamma, d);
  }
  return 0.0;
}

LevelSet score_level_set(const ScoreFunction& fn, double prediction, double threshold) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (threshold < 0.0) return {inf, -inf};
  if (threshold == inf) return {-inf, inf};
  switch (fn.kind) {
    case ScoreKind::absolute:
      return {prediction - threshold, prediction + threshold};
    case ScoreKind::squared: {
      const double r = std::sqrt(threshold);
      return {prediction - r, prediction + r};
    }
    case ScoreKind::linex:
      return {prediction + linex_root(fn.gamma, threshold, -1.0),
              prediction + linex_root(fn.gamma, threshold, 1.0)};
  }
  return {prediction, prediction};
}

std::string to_string(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::absolute: return "absolute";
    case ScoreKind::squared: return "squared";
    case ScoreKind::linex: return "linex";
  }
  return "unknown";
}

}  // namespace rootcp
