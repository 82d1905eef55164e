#include "rootcp/smooth_cp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rootcp/error.hpp"
#include "rootcp/split_cp.hpp"

namespace rootcp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sorted_quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double scaled_gamma(const FittedModel& observed, const Dataset& data, const SmoothingConfig& smoothing,
                    const ScoreFunction& score_fn) {
  if (!smoothing.scale_by_score_iqr) return smoothing.gamma;
  const Eigen::VectorXd predictions = observed.predict_rows(data.features());
  std::vector<double> scores(static_cast<std::size_t>(data.n()));
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    scores[static_cast<std::size_t>(i)] = score(score_fn, data.responses()(i), predictions(i));
  }
  std::sort(scores.begin(), scores.end());
  const double iqr = sorted_quantile(scores, 0.75) - sorted_quantile(scores, 0.25);
  if (!(iqr > 0.0) || !std::isfinite(iqr)) return smoothing.gamma;
  return smoothing.gamma / iqr;
}

void check_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidInput("smoothing: gamma must be positive and finite");
}

}  // namespace

std::string to_string(Envelope envelope) {
  switch (envelope) {
    case Envelope::sigmoid: return "sigmoid";
    case Envelope::lower_ramp: return "lower_ramp";
    case Envelope::upper_ramp: return "upper_ramp";
  }
  return "unknown";
}

double phi(Envelope envelope, double gamma, double x) {
  switch (envelope) {
    case Envelope::sigmoid: {
      const double t = gamma * x;
      if (t >= 0.0) {
        const double e = std::exp(-t);
        return e / (1.0 + e);
      }
      return 1.0 / (1.0 + std::exp(t));
    }
    case Envelope::lower_ramp: return std::clamp(-gamma * x, 0.0, 1.0);
    case Envelope::upper_ramp: return std::clamp(1.0 - gamma * x, 0.0, 1.0);
  }
  return 0.0;
}

double phi_derivative(Envelope envelope, double gamma, double x) {
  switch (envelope) {
    case Envelope::sigmoid: {
      const double s = phi(envelope, gamma, x);
      return -gamma * s * (1.0 - s);
    }
    case Envelope::lower_ramp: return (x < 0.0 && -gamma * x < 1.0) ? -gamma : 0.0;
    case Envelope::upper_ramp: return (x > 0.0 && gamma * x < 1.0) ? -gamma : 0.0;
  }
  return 0.0;
}

double smooth_rank(std::span<const double> scores, const SmoothingConfig& smoothing) {
  if (scores.empty()) throw InvalidInput("smooth_rank: empty score vector");
  check_gamma(smoothing.gamma);
  const double last = scores.back();
  double sum = 0.0;
  for (double e : scores) sum += phi(smoothing.envelope, smoothing.gamma, e - last);
  return sum;
}

double smooth_rank_derivative(std::span<const double> scores, const SmoothingConfig& smoothing) {
  if (scores.empty()) throw InvalidInput("smooth_rank_derivative: empty score vector");
  check_gamma(smoothing.gamma);
  const double last = scores.back();
  double sum = 0.0;
  // The self term phi(0) does not move with E_{n+1}.
  for (std::size_t i = 0; i + 1 < scores.size(); ++i) {
    sum -= phi_derivative(smoothing.envelope, smoothing.gamma, scores[i] - last);
  }
  return sum;
}

double smooth_typicalness(std::span<const double> scores, const SmoothingConfig& smoothing) {
  return 1.0 - smooth_rank(scores, smoothing) / static_cast<double>(scores.size());
}

double delta(Envelope envelope, double gamma) {
  check_gamma(gamma);
  switch (envelope) {
    case Envelope::sigmoid: return 0.5;
    case Envelope::lower_ramp: return 0.0;
    case Envelope::upper_ramp: return 1.0;
  }
  return 0.0;
}

double calibrated_threshold(double alpha, Envelope envelope, double gamma) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("calibrated_threshold: alpha must lie in (0, 1)");
  return alpha - delta(envelope, gamma);
}

bool is_calibrated(double alpha, const SmoothingConfig& smoothing) {
  const double threshold = smoothing.target_alpha.value_or(alpha);
  return threshold <= calibrated_threshold(alpha, smoothing.envelope, smoothing.gamma);
}

double effective_gamma(const RegressorSpec& regressor, const Dataset& data, const SmoothingConfig& smoothing,
                       const ScoreFunction& score_fn) {
  check_gamma(smoothing.gamma);
  if (!smoothing.scale_by_score_iqr) return smoothing.gamma;
  return scaled_gamma(fit_observed(regressor, data), data, smoothing, score_fn);
}

ConformalInterval smooth_conformal_interval(const RegressorSpec& regressor, const Dataset& data,
                                            const ConformalConfig& cfg, const SmoothingConfig& smoothing,
                                            const ScoreFunction& score_fn) {
  cfg.validate();
  validate(regressor);
  check_gamma(smoothing.gamma);
  const double threshold = smoothing.target_alpha.value_or(cfg.alpha);
  if (threshold <= 0.0) {
    ConformalInterval whole;
    whole.lower = -kInf;
    whole.upper = kInf;
    whole.epsilon = cfg.epsilon;
    whole.method = Method::smooth;
    whole.warnings.push_back("threshold <= 0: every candidate is typical");
    return whole;
  }
  if (threshold >= 1.0) throw InvalidInput("smooth_conformal_interval: threshold must be below 1");

  const FittedModel observed = fit_observed(regressor, data);
  SmoothingConfig scaled = smoothing;
  scaled.gamma = scaled_gamma(observed, data, smoothing, score_fn);
  auto reduce = [scaled](std::span<const double> s) { return smooth_typicalness(s, scaled); };

  ConformalConfig level = cfg;
  level.alpha = threshold;
  TypicalnessProfile profile = make_fit_profile(regressor, data, score_fn, reduce, cfg.max_fits);

  bool reused = false;
  InitializationHints hints;
  hints.point_prediction = record_point_prediction(profile, regressor, observed, data, reused);
  std::size_t localization_fits = 0;
  hints.localization = [&]() -> std::optional<Interval> {
    const ConformalInterval s = split_interval(regressor, data, cfg, SplitConfig{0.5, cfg.seed}, score_fn);
    localization_fits += s.fits_used;
    return Interval{s.lower, s.upper};
  };

  // Ramps are flat wherever every term is saturated, and may sit exactly at the threshold there.
  const double value_tol = smoothing.envelope == Envelope::sigmoid ? smoothing.value_tol : 0.0;
  ConformalInterval out = search_interval(profile, nullptr, data, level, hints, reused ? 0 : 1, 5, value_tol);
  out.method = Method::smooth;
  out.fits_used += localization_fits;
  out.trace->init_fits += localization_fits;
  return out;
}

}  // namespace rootcp
