#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace rootcp {

/// z -> pi(z) with memoization and a fit counter.
///
/// Every cache miss is one model fit. Evaluators backed by a fit may also hand back the fitted
/// predictions on the n+1 augmented rows, which the initialization uses to interpolate the fit map
/// between probes. Not thread-safe.
class TypicalnessProfile {
 public:
  struct Sample {
    double value;
    /// Predictions on the augmented rows; empty for synthetic profiles.
    Eigen::VectorXd predictions;
  };
  using Evaluator = std::function<Sample(double)>;
  /// Typicalness of candidate z given (interpolated) predictions on the augmented rows; no fit.
  using PredictionScorer = std::function<double(const Eigen::VectorXd&, double)>;

  explicit TypicalnessProfile(std::function<double(double)> fn,
                              std::size_t max_fits = std::numeric_limits<std::size_t>::max());
  TypicalnessProfile(Evaluator eval, PredictionScorer scorer,
                     std::size_t max_fits = std::numeric_limits<std::size_t>::max());

  /// Cached evaluation. Throws BudgetExhausted on a miss once max_fits fits were spent.
  double operator()(double z);

  /// Store an evaluation obtained elsewhere. Counts as one fit unless z is already cached.
  void record(double z, Sample sample);

  std::size_t fits() const noexcept { return fits_; }
  std::size_t max_fits() const noexcept { return max_fits_; }
  bool cached(double z) const { return cache_.contains(z); }

  bool has_predictions() const noexcept { return static_cast<bool>(scorer_); }
  double score_predictions(const Eigen::VectorXd& predictions, double z) const;

  /// Probed (z, pi(z)) pairs in increasing z.
  std::vector<std::pair<double, double>> probes() const;
  /// Probed (z, predictions) pairs in increasing z; empty without a prediction-aware evaluator.
  std::vector<std::pair<double, Eigen::VectorXd>> prediction_samples() const;

 private:
  Evaluator eval_;
  PredictionScorer scorer_;
  std::size_t max_fits_;
  std::size_t fits_ = 0;
  std::map<double, Sample> cache_;
};

}  // namespace rootcp
