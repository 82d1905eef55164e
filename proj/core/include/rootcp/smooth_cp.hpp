#pragma once

#include <optional>
#include <span>
#include <string>

#include "rootcp/conformal.hpp"
#include "rootcp/dataset.hpp"
#include "rootcp/interval.hpp"
#include "rootcp/regressor.hpp"
#include "rootcp/root_cp.hpp"
#include "rootcp/score.hpp"

namespace rootcp {

/// Continuous surrogate of the indicator 1[x <= 0].
///  - sigmoid:    e^{-g x} / (1 + e^{-g x})
///  - lower_ramp: clamp(-g x, 0, 1), never above the indicator
///  - upper_ramp: clamp(1 - g x, 0, 1), never below the indicator
enum class Envelope { sigmoid, lower_ramp, upper_ramp };

std::string to_string(Envelope envelope);

struct SmoothingConfig {
  double gamma = 100.0;
  /// Threshold on the smoothed typicalness; defaults to cfg.alpha.
  std::optional<double> target_alpha;
  Envelope envelope = Envelope::sigmoid;
  /// In smooth_conformal_interval, use gamma / IQR(scores of the D_n fit) as the slope.
  bool scale_by_score_iqr = true;
  /// Extra bisection stop on |pi(z, gamma) - threshold|; sigmoid only.
  double value_tol = 1e-12;
};

double phi(Envelope envelope, double gamma, double x);
double phi_derivative(Envelope envelope, double gamma, double x);

/// sum_i phi(E_i - E_{n+1}), self term included. Uses smoothing.gamma as given.
double smooth_rank(std::span<const double> scores, const SmoothingConfig& smoothing);
/// d smooth_rank / d E_{n+1}.
double smooth_rank_derivative(std::span<const double> scores, const SmoothingConfig& smoothing);
/// 1 - smooth_rank / (n+1).
double smooth_typicalness(std::span<const double> scores, const SmoothingConfig& smoothing);

/// sup_x (phi - 1[x <= 0])(x), in closed form: 1/2, 0 and 1 for the three envelopes.
double delta(Envelope envelope, double gamma);

/// Largest threshold on pi(z, gamma) whose set keeps 1 - alpha coverage: alpha - delta.
double calibrated_threshold(double alpha, Envelope envelope, double gamma);
/// Whether the configured threshold keeps the 1 - alpha guarantee.
bool is_calibrated(double alpha, const SmoothingConfig& smoothing);

/// Root search on the smoothed typicalness at the configured threshold. A threshold <= 0 makes
/// every candidate typical and yields the whole line.
ConformalInterval smooth_conformal_interval(const RegressorSpec& regressor, const Dataset& data,
                                            const ConformalConfig& cfg,
                                            const SmoothingConfig& smoothing,
                                            const ScoreFunction& score_fn = ScoreFunction::absolute());

/// Slope actually used by smooth_conformal_interval.
double effective_gamma(const RegressorSpec& regressor, const Dataset& data,
                       const SmoothingConfig& smoothing, const ScoreFunction& score_fn);

}  // namespace rootcp
