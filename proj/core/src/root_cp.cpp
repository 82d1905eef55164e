#include "rootcp/root_cp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "rootcp/error.hpp"
#include "rootcp/interp_cp.hpp"

namespace rootcp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kRefinementGrid = 1000;

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out;
  if (count == 1) {
    out.push_back(0.5 * (lo + hi));
    return out;
  }
  for (int t = 0; t < count; ++t) out.push_back(lo + (hi - lo) * t / (count - 1));
  return out;
}

Interval enlarge(const Interval& set) {
  const double w = set.hi - set.lo;
  return {set.lo - 0.5 * w, set.hi + 0.5 * w};
}

// Stages 2-4 of the z0 cascade. Returns the stage that succeeded, or 0.
int localized_search(TypicalnessProfile& profile, const Dataset& data, double level,
                     const InitializationHints& hints, double& z0) {
  std::optional<Interval> estimate;
  if (hints.localization) estimate = hints.localization();
  const bool usable = estimate && std::isfinite(estimate->lo) && std::isfinite(estimate->hi) && estimate->lo < estimate->hi;

  Interval bracket{data.min_response(), data.max_response()};
  if (usable) {
    const double mid = 0.5 * (estimate->lo + estimate->hi);
    if (reaches_level(profile(mid), level)) {
      z0 = mid;
      return 2;
    }
    bracket = enlarge(*estimate);
  }
  if (!(bracket.lo < bracket.hi)) bracket = {bracket.lo - 1.0, bracket.hi + 1.0};

  TypicalnessProfile& ranking = hints.preview != nullptr ? *hints.preview : profile;
  const auto confirm = [&](double z) {
    if (hints.preview == nullptr) return reaches_level(ranking(z), level);
    return reaches_level(profile(z), level);
  };

  double best_z = bracket.lo;
  double best_value = -kInf;
  for (double z : linspace(bracket.lo, bracket.hi, hints.grid_size)) {
    const double v = ranking(z);
    if (v > best_value) {
      best_value = v;
      best_z = z;
    }
  }
  if (reaches_level(best_value, level) && confirm(best_z)) {
    z0 = best_z;
    return 3;
  }

  if (!ranking.has_predictions()) return 0;
  const std::vector<double> grid = linspace(bracket.lo, bracket.hi, kRefinementGrid);
  for (int round = 0; round < hints.refinement_rounds; ++round) {
    auto samples = ranking.prediction_samples();
    if (samples.size() < 2) return 0;
    const InterpolatedFitMap map = interp_map_from_samples(std::move(samples));
    double candidate = kInf;
    double candidate_value = -kInf;
    for (double z : grid) {
      if (ranking.cached(z)) continue;
      const double v = ranking.score_predictions(interp_predict_all(map, z), z);
      if (v > candidate_value) {
        candidate_value = v;
        candidate = z;
      }
    }
    if (!std::isfinite(candidate)) return 0;
    if (reaches_level(ranking(candidate), level) && confirm(candidate)) {
      z0 = candidate;
      return 4;
    }
  }
  return 0;
}

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::root_full: return "root_full";
    case Method::split: return "split";
    case Method::interp: return "interp";
    case Method::smooth: return "smooth";
    case Method::ridge_exact: return "ridge_exact";
    case Method::oracle: return "oracle";
  }
  return "unknown";
}

Initialization initialize(TypicalnessProfile& profile, const Dataset& data, const ConformalConfig& cfg,
                          const InitializationHints& hints) {
  const double level = cfg.alpha;
  const auto failure = [&](const std::string& why) {
    auto probes = profile.probes();
    if (hints.preview != nullptr) {
      for (const auto& p : hints.preview->probes()) probes.push_back(p);
    }
    return InitializationFailed("initialization failed: " + why, std::move(probes));
  };

  try {
    Initialization init{0.0, 0.0, 0.0, 0};
    if (hints.point_prediction && std::isfinite(*hints.point_prediction) &&
        reaches_level(profile(*hints.point_prediction), level)) {
      init.z0 = *hints.point_prediction;
      init.stage = 1;
    } else {
      init.stage = localized_search(profile, data, level, hints, init.z0);
      if (init.stage == 0) throw failure("no candidate with typicalness >= " + std::to_string(level));
    }

    init.z_min = data.min_response();
    init.z_max = data.max_response();
    if (!(init.z_min < init.z_max)) {
      init.z_min -= 1.0;
      init.z_max += 1.0;
    }
    int expansions = 0;
    while (!(init.z_min < init.z0 && !reaches_level(profile(init.z_min), level))) {
      if (expansions++ == hints.max_expansions) throw failure("typicalness at the lower bound stays >= alpha");
      init.z_min -= init.z_max - init.z_min;
    }
    while (!(init.z_max > init.z0 && !reaches_level(profile(init.z_max), level))) {
      if (expansions++ == hints.max_expansions) throw failure("typicalness at the upper bound stays >= alpha");
      init.z_max += init.z_max - init.z_min;
    }
    return init;
  } catch (const BudgetExhausted& e) {
    throw failure(e.what());
  }
}

std::size_t bisection_steps(double width, double epsilon) {
  std::size_t steps = 0;
  width = std::abs(width);
  while (width > 2.0 * epsilon) {
    width *= 0.5;
    ++steps;
  }
  return steps;
}

double bisect_edge(TypicalnessProfile& profile, double inner, double outer, const ConformalConfig& cfg,
                   double value_tol) {
  if (!(cfg.epsilon > 0.0)) throw InvalidInput("bisect_edge: epsilon must be positive");
  const double level = cfg.alpha;
  const double inner_value = profile(inner);
  const double outer_value = profile(outer);
  if (!(reaches_level(inner_value, level) && !reaches_level(outer_value, level))) {
    std::ostringstream msg;
    msg << "bisect_edge: need pi(inner) >= alpha > pi(outer), got pi(" << inner << ") = " << inner_value
        << ", pi(" << outer << ") = " << outer_value << ", alpha = " << level;
    throw InvalidInput(msg.str());
  }
  while (std::abs(outer - inner) > 2.0 * cfg.epsilon) {
    const double mid = 0.5 * (inner + outer);
    if (mid == inner || mid == outer) break;
    const double v = profile(mid);
    if (value_tol > 0.0 && std::abs(v - level) <= value_tol) return mid;
    if (reaches_level(v, level)) {
      inner = mid;
    } else {
      outer = mid;
    }
  }
  return 0.5 * (inner + outer);
}

ConformalInterval search_interval(TypicalnessProfile& profile, TypicalnessProfile* preview, const Dataset& data,
                                  const ConformalConfig& cfg, const InitializationHints& hints,
                                  std::size_t aux_fits, std::size_t interior_probes, double value_tol) {

  InitializationHints with_preview = hints;
  with_preview.preview = preview;
  const Initialization init = initialize(profile, data, cfg, with_preview);

  RootSearchTrace trace;
  trace.z_min = init.z_min;
  trace.z0 = init.z0;
  trace.z_max = init.z_max;
  trace.init_stage = init.stage;
  trace.init_fits = aux_fits + profile.fits() +
                    (preview != nullptr ? preview->fits() : 0);

  const std::size_t bisect_before = profile.fits();
  ConformalInterval out;
  out.method = Method::root_full;
  out.epsilon = cfg.epsilon;
  // Start each bisection from the tightest bracket the probes so far allow; after an expansion the
  // previous outer bound is a typical point much closer to the crossing than z0.
  const auto probes = profile.probes();
  double lower_inner = init.z0;
  double upper_inner = init.z0;
  for (const auto& [z, v] : probes) {
    if (!reaches_level(v, cfg.alpha)) continue;
    if (z >= init.z_min && z < lower_inner) lower_inner = z;
    if (z <= init.z_max && z > upper_inner) upper_inner = z;
  }
  double lower_outer = init.z_min;
  double upper_outer = init.z_max;
  for (const auto& [z, v] : probes) {
    if (reaches_level(v, cfg.alpha)) continue;
    if (z < lower_inner && z > lower_outer) lower_outer = z;
    if (z > upper_inner && z < upper_outer) upper_outer = z;
  }
  out.lower = bisect_edge(profile, lower_inner, lower_outer, cfg, value_tol);
  out.upper = bisect_edge(profile, upper_inner, upper_outer, cfg, value_tol);
  trace.bisection_fits = profile.fits() - bisect_before;

  const std::size_t diag_before = profile.fits();
  bool gap = false;
  for (std::size_t k = 1; k <= interior_probes; ++k) {
    const double z = out.lower + (out.upper - out.lower) * static_cast<double>(k) /
                                     static_cast<double>(interior_probes + 1);
    if (!reaches_level(profile(z), cfg.alpha)) gap = true;
  }
  trace.diagnostic_fits = profile.fits() - diag_before;
  if (gap) out.warnings.push_back("possibly non-interval: an interior probe has typicalness below alpha");

  out.fits_used = trace.init_fits + trace.bisection_fits + trace.diagnostic_fits;
  out.trace = trace;
  return out;
}

TypicalnessProfile make_fit_profile(const RegressorSpec& regressor, const Dataset& data, const ScoreFunction& score_fn,
                                    std::function<double(std::span<const double>)> reduce, std::size_t max_fits) {
  const auto scores_of = [&data, score_fn](const Eigen::VectorXd& predictions, double z) {
    const Eigen::Index n = data.n();
    std::vector<double> scores(static_cast<std::size_t>(n + 1));
    for (Eigen::Index i = 0; i < n; ++i) {
      scores[static_cast<std::size_t>(i)] = score(score_fn, data.responses()(i), predictions(i));
    }
    scores[static_cast<std::size_t>(n)] = score(score_fn, z, predictions(n));
    return scores;
  };
  auto last = std::make_shared<std::optional<FittedModel>>();
  auto eval = [regressor, &data, reduce, scores_of, last](double z) {
    FittedModel model = last->has_value() ? fit_with_warm_start(regressor, data, z, **last) : fit(regressor, data, z);
    Eigen::VectorXd predictions = model.predict_rows(data.augmented_features());
    const double value = reduce(scores_of(predictions, z));
    last->emplace(std::move(model));
    return TypicalnessProfile::Sample{value, std::move(predictions)};
  };
  auto scorer = [reduce, scores_of](const Eigen::VectorXd& predictions, double z) {
    return reduce(scores_of(predictions, z));
  };
  return TypicalnessProfile(std::move(eval), std::move(scorer), max_fits);
}

double record_point_prediction(TypicalnessProfile& profile, const RegressorSpec& regressor,
                               const FittedModel& observed, const Dataset& data, bool& observed_fit_reused) {
  const double z_hat = observed.predict(data.test_features());
  observed_fit_reused = false;
  if (std::holds_alternative<KnnSpec>(regressor) || !profile.has_predictions() || !std::isfinite(z_hat)) return z_hat;
  Eigen::VectorXd predictions = observed.predict_rows(data.augmented_features());
  const double value = profile.score_predictions(predictions, z_hat);
  profile.record(z_hat, {value, std::move(predictions)});
  observed_fit_reused = true;
  return z_hat;
}

ConformalInterval conformal_interval(const RegressorSpec& regressor, const Dataset& data, const ConformalConfig& cfg,
                                     const RootSearchOptions& options) {
  cfg.validate();
  validate(regressor);
  std::function<double(std::span<const double>)> reduce = [](std::span<const double> s) { return typicalness(s); };
  if (options.slack) {
    const double slack = *options.slack;
    if (!(slack >= 0.0)) throw InvalidInput("conformal_interval: slack must be >= 0");
    reduce = [slack](std::span<const double> s) { return typicalness_with_slack(s, slack); };
  }

  TypicalnessProfile profile = make_fit_profile(regressor, data, options.score, reduce, cfg.max_fits);
  std::optional<TypicalnessProfile> preview;
  if (const auto* lasso = std::get_if<LassoSpec>(&regressor)) {
    LassoSpec coarse = *lasso;
    coarse.tol *= 100.0;
    preview.emplace(make_fit_profile(coarse, data, options.score, reduce, cfg.max_fits));
  }

  const FittedModel observed = fit_observed(regressor, data);
  bool reused = false;
  InitializationHints hints;
  hints.point_prediction = record_point_prediction(profile, regressor, observed, data, reused);
  std::size_t localization_fits = 0;
  hints.localization = [&]() -> std::optional<Interval> {
    SplitConfig split{options.localization_train_fraction, cfg.seed};
    const ConformalInterval s = split_interval(regressor, data, cfg, split, options.score);
    localization_fits += s.fits_used;
    return Interval{s.lower, s.upper};
  };

  ConformalInterval out = search_interval(profile, preview ? &*preview : nullptr, data, cfg, hints, reused ? 0 : 1,
                                          options.interior_probes);
  out.fits_used += localization_fits;
  out.trace->init_fits += localization_fits;
  return out;
}

DominanceSet dominance_set(double response, double intercept, double slope, double test_intercept,
                           double test_slope) {
  // |u| >= |v| <=> (u - v)(u + v) >= 0 with u = (y - a) - b z and v = (1 - b') z - a'.
  const double a1 = response - intercept + test_intercept;  // u - v = a1 - b1 z
  const double b1 = slope + 1.0 - test_slope;
  const double a2 = response - intercept - test_intercept;  // u + v = a2 + b2 z
  const double b2 = 1.0 - test_slope - slope;
  using Shape = DominanceSet::Shape;
  const Interval line{-kInf, kInf};

  const auto half_line = [&](double c, double k, double sign) -> DominanceSet {
    // {sign * (c + k z) >= 0}
    if (k == 0.0) return sign * c >= 0.0 ? DominanceSet{Shape::interval, line} : DominanceSet{Shape::empty, line};
    const double root = -c / k;
    if (sign * k > 0.0) return {Shape::interval, {root, kInf}};
    return {Shape::interval, {-kInf, root}};
  };

  if (b1 == 0.0 && b2 == 0.0) {
    return a1 * a2 >= 0.0 ? DominanceSet{Shape::interval, line} : DominanceSet{Shape::empty, line};
  }
  if (b1 == 0.0) {
    if (a1 == 0.0) return {Shape::interval, line};
    return half_line(a2, b2, a1 > 0.0 ? 1.0 : -1.0);
  }
  if (b2 == 0.0) {
    if (a2 == 0.0) return {Shape::interval, line};
    return half_line(a1, -b1, a2 > 0.0 ? 1.0 : -1.0);
  }
  const double r1 = a1 / b1;
  const double r2 = -a2 / b2;
  const Interval between{std::min(r1, r2), std::max(r1, r2)};
  // Leading coefficient of the quadratic is -b1 * b2.
  if (b1 * b2 > 0.0) return {Shape::interval, between};
  if (r1 == r2) return {Shape::interval, line};
  return {Shape::split, between};
}

IntervalCondition interval_condition_from_zeros(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidInput("interval condition: zero lists differ in length");
  IntervalCondition out{true, -kInf, kInf};
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.a_max = std::max(out.a_max, a[i]);
    out.b_min = std::min(out.b_min, b[i]);
  }
  out.holds = out.a_max <= out.b_min;
  return out;
}

IntervalCondition check_interval_condition(const AffineFitCoefficients& coeffs, const Dataset& data,
                                           const ScoreFunction& score_fn) {
  if (score_fn.kind != ScoreKind::absolute) {
    throw Unsupported("check_interval_condition: only the absolute score has closed-form zeros");
  }
  const Eigen::Index n = data.n();
  if (coeffs.intercepts.size() != n + 1 || coeffs.slopes.size() != n + 1) {
    throw InvalidInput("check_interval_condition: coefficients do not match the dataset");
  }
  std::vector<double> lows;
  std::vector<double> highs;
  bool quasi_concave = true;
  for (Eigen::Index i = 0; i < n; ++i) {
    const DominanceSet set = dominance_set(data.responses()(i), coeffs.intercepts(i), coeffs.slopes(i),
                                           coeffs.intercepts(n), coeffs.slopes(n));
    if (set.shape == DominanceSet::Shape::empty) continue;
    if (set.shape == DominanceSet::Shape::split) {
      quasi_concave = false;
      continue;
    }
    lows.push_back(set.bounds.lo);
    highs.push_back(set.bounds.hi);
  }
  IntervalCondition out = interval_condition_from_zeros(lows, highs);
  out.holds = out.holds && quasi_concave;
  return out;
}

}  // namespace rootcp
