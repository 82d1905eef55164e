#include "rootcp/interp_cp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rootcp/error.hpp"

namespace rootcp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Segment used to evaluate the map at z: index t of the left knot, clamped so the two outermost
// segments extend beyond the knot range.
std::size_t segment_of(const std::vector<double>& knots, double z) {
  const auto it = std::upper_bound(knots.begin(), knots.end(), z);
  const auto idx = static_cast<std::size_t>(std::distance(knots.begin(), it));
  if (idx == 0) return 0;
  return std::min(idx - 1, knots.size() - 2);
}

double interp_score(const ScoreFunction& fn, double truth, double prediction) {
  const double d = truth - prediction;
  return fn.kind == ScoreKind::squared ? d * d : std::abs(d);
}

double interp_typicalness(const InterpolatedFitMap& map, const Dataset& data, const ScoreFunction& fn, double z,
                          std::vector<double>& scores) {
  const Eigen::VectorXd mu = interp_predict_all(map, z);
  const Eigen::Index n = data.n();
  for (Eigen::Index i = 0; i < n; ++i) scores[static_cast<std::size_t>(i)] = interp_score(fn, data.responses()(i), mu(i));
  scores[static_cast<std::size_t>(n)] = interp_score(fn, z, mu(n));
  return typicalness(scores);
}

}  // namespace

std::vector<double> InterpolatedFitMap::query_points() const {
  std::vector<double> out;
  for (double k : knots) {
    if (k >= query_range.lo && k <= query_range.hi) out.push_back(k);
  }
  return out;
}

InterpolatedFitMap build_interp_map(const RegressorSpec& regressor, const Dataset& data, Interval bracket, int d) {
  if (d < 1) throw InvalidInput("interp: d must be >= 1");
  if (!std::isfinite(bracket.lo) || !std::isfinite(bracket.hi) || !(bracket.lo < bracket.hi)) {
    throw InvalidInput("interp: degenerate query bracket");
  }
  const double width = bracket.hi - bracket.lo;
  double low_anchor = data.min_response();
  double high_anchor = data.max_response();
  if (low_anchor >= bracket.lo) low_anchor = bracket.lo - width;
  if (high_anchor <= bracket.hi) high_anchor = bracket.hi + width;

  std::vector<double> knots;
  knots.reserve(static_cast<std::size_t>(d) + 2);
  knots.push_back(low_anchor);
  if (d == 1) {
    knots.push_back(0.5 * (bracket.lo + bracket.hi));
  } else {
    for (int t = 0; t < d; ++t) knots.push_back(bracket.lo + width * t / (d - 1));
  }
  knots.push_back(high_anchor);

  InterpolatedFitMap map;
  map.query_range = bracket;
  map.predictions.resize(static_cast<Eigen::Index>(knots.size()), data.n() + 1);
  std::optional<FittedModel> previous;
  for (std::size_t t = 0; t < knots.size(); ++t) {
    FittedModel model = previous ? fit_with_warm_start(regressor, data, knots[t], *previous)
                                 : fit(regressor, data, knots[t]);
    map.predictions.row(static_cast<Eigen::Index>(t)) = model.predict_rows(data.augmented_features()).transpose();
    previous.emplace(std::move(model));
  }
  map.knots = std::move(knots);
  map.fits = map.knots.size();
  return map;
}

InterpolatedFitMap interp_map_from_samples(std::vector<std::pair<double, Eigen::VectorXd>> samples) {
  std::sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  samples.erase(std::unique(samples.begin(), samples.end(),
                            [](const auto& a, const auto& b) { return a.first == b.first; }),
                samples.end());
  if (samples.size() < 2) throw InvalidInput("interp: need at least two distinct knots");
  const Eigen::Index rows = samples.front().second.size();
  InterpolatedFitMap map;
  map.predictions.resize(static_cast<Eigen::Index>(samples.size()), rows);
  for (std::size_t t = 0; t < samples.size(); ++t) {
    if (samples[t].second.size() != rows) throw InvalidInput("interp: samples disagree on the row count");
    map.knots.push_back(samples[t].first);
    map.predictions.row(static_cast<Eigen::Index>(t)) = samples[t].second.transpose();
  }
  map.query_range = {map.knots.front(), map.knots.back()};
  return map;
}

double interp_predict(const InterpolatedFitMap& map, double z, Eigen::Index row) {
  const std::size_t t = segment_of(map.knots, z);
  const double z0 = map.knots[t];
  const double z1 = map.knots[t + 1];
  const double w = (z - z0) / (z1 - z0);
  const auto r = static_cast<Eigen::Index>(t);
  return (1.0 - w) * map.predictions(r, row) + w * map.predictions(r + 1, row);
}

Eigen::VectorXd interp_predict_all(const InterpolatedFitMap& map, double z) {
  const std::size_t t = segment_of(map.knots, z);
  const double z0 = map.knots[t];
  const double z1 = map.knots[t + 1];
  const double w = (z - z0) / (z1 - z0);
  const auto r = static_cast<Eigen::Index>(t);
  return ((1.0 - w) * map.predictions.row(r) + w * map.predictions.row(r + 1)).transpose();
}

std::vector<Interval> interp_conformal_set(const InterpolatedFitMap& map, const Dataset& data,
                                           const ScoreFunction& score_fn, double alpha) {
  if (score_fn.kind == ScoreKind::linex) {
    throw Unsupported("interp: exact crossing enumeration needs the absolute or squared score");
  }
  if (map.knots.size() < 2) throw InvalidInput("interp: map has fewer than two knots");
  if (map.rows() != data.n() + 1) throw InvalidInput("interp: map and dataset disagree on the row count");

  const Eigen::Index n = data.n();
  const std::size_t K = map.knots.size();
  std::vector<double> breakpoints(map.knots.begin(), map.knots.end());

  // On each linear piece, E_i = |u_i(z)| and E_{n+1} = |v(z)| with u_i, v affine; the indicator
  // E_i <= E_{n+1} can only flip where u_i = v or u_i = -v.
  for (std::size_t s = 0; s <= K; ++s) {
    const double lo = s == 0 ? -kInf : map.knots[s - 1];
    const double hi = s == K ? kInf : map.knots[s];
    const std::size_t t = std::min(s == 0 ? 0 : s - 1, K - 2);
    const double z0 = map.knots[t];
    const double dz = map.knots[t + 1] - z0;
    const auto r = static_cast<Eigen::Index>(t);
    const double slope_test = (map.predictions(r + 1, n) - map.predictions(r, n)) / dz;
    const double icpt_test = map.predictions(r, n) - slope_test * z0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double slope = (map.predictions(r + 1, i) - map.predictions(r, i)) / dz;
      const double icpt = map.predictions(r, i) - slope * z0;
      const double y = data.responses()(i);
      const double den_minus = slope + 1.0 - slope_test;
      const double den_plus = slope + slope_test - 1.0;
      for (const double root : {(y - icpt + icpt_test) / den_minus, (y - icpt - icpt_test) / den_plus}) {
        if (std::isfinite(root) && root > lo && root < hi) breakpoints.push_back(root);
      }
    }
  }
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

  std::vector<double> scores(static_cast<std::size_t>(n + 1));
  const double span = std::max(1.0, breakpoints.back() - breakpoints.front());
  const auto member = [&](double z) { return reaches_level(interp_typicalness(map, data, score_fn, z, scores), alpha); };

  std::vector<Interval> out;
  const auto add_cell = [&out](double lo, double hi) {
    if (!out.empty() && out.back().hi == lo) {
      out.back().hi = hi;
    } else {
      out.push_back({lo, hi});
    }
  };
  if (member(breakpoints.front() - span)) add_cell(-kInf, breakpoints.front());
  for (std::size_t c = 0; c + 1 < breakpoints.size(); ++c) {
    const double lo = breakpoints[c];
    const double hi = breakpoints[c + 1];
    if (member(0.5 * (lo + hi))) add_cell(lo, hi);
  }
  if (member(breakpoints.back() + span)) add_cell(breakpoints.back(), kInf);
  return out;
}

ConformalInterval interp_conformal_interval(const InterpolatedFitMap& map, const Dataset& data,
                                            const ScoreFunction& score_fn, const ConformalConfig& cfg) {
  cfg.validate();
  const std::vector<Interval> set = interp_conformal_set(map, data, score_fn, cfg.alpha);
  ConformalInterval out;
  out.method = Method::interp;
  out.fits_used = map.fits;
  out.epsilon = 0.0;
  if (set.empty()) {
    out.empty = true;
    out.warnings.push_back("interpolated conformal set is empty");
    return out;
  }
  out.lower = set.front().lo;
  out.upper = set.back().hi;
  if (set.size() > 1) {
    std::ostringstream msg;
    msg << "interpolated conformal set has " << set.size() << " pieces; gaps:";
    for (std::size_t j = 0; j + 1 < set.size(); ++j) msg << " (" << set[j].hi << ", " << set[j + 1].lo << ")";
    out.warnings.push_back(msg.str());
  }
  return out;
}

ConformalInterval interpolated_conformal_interval(const RegressorSpec& regressor, const Dataset& data,
                                                  const ConformalConfig& cfg, int d, const SplitConfig& split,
                                                  const ScoreFunction& score_fn) {
  cfg.validate();
  const ConformalInterval local = split_interval(regressor, data, cfg, split, score_fn);
  Interval bracket{data.min_response(), data.max_response()};
  if (local.bounded() && local.upper > local.lower) {
    const double w = local.upper - local.lower;
    bracket = {local.lower - 0.5 * w, local.upper + 0.5 * w};
  }
  if (!(bracket.lo < bracket.hi)) bracket = {bracket.lo - 1.0, bracket.hi + 1.0};

  std::size_t fits = local.fits_used;
  ConformalInterval out;
  for (int attempt = 0;; ++attempt) {
    const InterpolatedFitMap map = build_interp_map(regressor, data, bracket, d);
    fits += map.fits;
    out = interp_conformal_interval(map, data, score_fn, cfg);
    const bool beyond = !out.empty && std::isfinite(out.lower) && std::isfinite(out.upper) &&
                        (out.lower < map.knots.front() || out.upper > map.knots.back());
    if (!beyond) break;
    if (attempt == 2) {
      out.warnings.push_back("interpolated set still extends beyond the extrapolation anchors");
      break;
    }
    const double lo = std::min(out.lower, bracket.lo);
    const double hi = std::max(out.upper, bracket.hi);
    bracket = {lo - 0.5 * (hi - lo), hi + 0.5 * (hi - lo)};
  }
  out.fits_used = fits;
  return out;
}

}  // namespace rootcp
