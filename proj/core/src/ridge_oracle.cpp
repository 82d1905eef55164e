#include "rootcp/ridge_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "rootcp/conformal.hpp"
#include "rootcp/error.hpp"

namespace rootcp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double affine_typicalness(const AffineFitCoefficients& c, const Dataset& data, double z, std::vector<double>& scores) {
  const Eigen::Index n = data.n();
  for (Eigen::Index i = 0; i < n; ++i) {
    scores[static_cast<std::size_t>(i)] = std::abs(data.responses()(i) - c.intercepts(i) - c.slopes(i) * z);
  }
  scores[static_cast<std::size_t>(n)] = std::abs(z - c.intercepts(n) - c.slopes(n) * z);
  return typicalness(scores);
}

}  // namespace

ConformalInterval ExactConformalSet::hull() const {
  ConformalInterval out;
  out.method = Method::ridge_exact;
  out.fits_used = 1;
  if (intervals.empty()) {
    out.empty = true;
    out.warnings.push_back("empty conformal set");
    return out;
  }
  out.lower = intervals.front().lo;
  out.upper = intervals.back().hi;
  if (!is_single_interval) out.warnings.push_back("conformal set is a union of " + std::to_string(intervals.size()) + " intervals");
  return out;
}

bool ExactConformalSet::contains(double z) const {
  return std::any_of(intervals.begin(), intervals.end(), [z](const Interval& s) { return s.contains(z); });
}

ExactConformalSet exact_set_from_affine(const AffineFitCoefficients& coeffs, const Dataset& data, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("exact conformal set: alpha must lie in (0, 1)");
  const Eigen::Index n = data.n();
  if (coeffs.intercepts.size() != n + 1 || coeffs.slopes.size() != n + 1) {
    throw InvalidInput("exact conformal set: coefficients do not match the dataset");
  }
  const double a_test = coeffs.intercepts(n);
  const double b_test = coeffs.slopes(n);

  std::vector<double> roots;
  roots.reserve(static_cast<std::size_t>(2 * n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double y = data.responses()(i);
    const double a1 = y - coeffs.intercepts(i) + a_test;
    const double b1 = coeffs.slopes(i) + 1.0 - b_test;
    const double a2 = y - coeffs.intercepts(i) - a_test;
    const double b2 = 1.0 - b_test - coeffs.slopes(i);
    if (b1 != 0.0) roots.push_back(a1 / b1);
    if (b2 != 0.0) roots.push_back(-a2 / b2);
  }
  roots.erase(std::remove_if(roots.begin(), roots.end(), [](double r) { return !std::isfinite(r); }), roots.end());
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());

  // Cell t spans (edges[t], edges[t+1]); the outer edges are infinite.
  std::vector<double> edges;
  edges.reserve(roots.size() + 2);
  edges.push_back(-kInf);
  edges.insert(edges.end(), roots.begin(), roots.end());
  edges.push_back(kInf);

  std::vector<double> scores(static_cast<std::size_t>(n + 1));
  ExactConformalSet out;
  for (std::size_t t = 0; t + 1 < edges.size(); ++t) {
    double probe;
    if (roots.empty()) {
      probe = 0.0;
    } else if (t == 0) {
      probe = roots.front() - 1.0 - std::abs(roots.front());
    } else if (t + 2 == edges.size()) {
      probe = roots.back() + 1.0 + std::abs(roots.back());
    } else {
      probe = 0.5 * (edges[t] + edges[t + 1]);
    }
    if (!reaches_level(affine_typicalness(coeffs, data, probe, scores), alpha)) continue;
    if (!out.intervals.empty() && out.intervals.back().hi == edges[t]) {
      out.intervals.back().hi = edges[t + 1];
    } else {
      out.intervals.push_back({edges[t], edges[t + 1]});
    }
  }
  out.is_single_interval = out.intervals.size() == 1;
  return out;
}

ExactConformalSet exact_ridge_set(const Dataset& data, double lambda, double alpha) {
  return exact_set_from_affine(affine_coefficients(data, lambda), data, alpha);
}

}  // namespace rootcp
