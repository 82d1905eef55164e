#pragma once

#include <Eigen/Dense>

namespace rootcp {

/// Observed pairs (x_i, y_i), i = 1..n, together with the feature row of the point to predict.
///
/// Immutable once built. The augmented design matrix (observed rows followed by the test row) is
/// materialized once because every refit on D_{n+1}(z) consumes it.
class Dataset {
 public:
  /// Throws InvalidInput unless n >= 2, shapes agree and every entry is finite.
  Dataset(Eigen::MatrixXd features, Eigen::VectorXd responses, Eigen::VectorXd test_features);

  Eigen::Index n() const noexcept { return responses_.size(); }
  Eigen::Index p() const noexcept { return features_.cols(); }

  const Eigen::MatrixXd& features() const noexcept { return features_; }
  const Eigen::VectorXd& responses() const noexcept { return responses_; }
  const Eigen::VectorXd& test_features() const noexcept { return test_features_; }

  /// (n+1) x p matrix: the n observed rows then the test row.
  const Eigen::MatrixXd& augmented_features() const noexcept { return augmented_; }

  /// (y_1, ..., y_n, candidate).
  Eigen::VectorXd augmented_responses(double candidate) const;

  double min_response() const noexcept { return responses_.minCoeff(); }
  double max_response() const noexcept { return responses_.maxCoeff(); }

 private:
  Eigen::MatrixXd features_;
  Eigen::VectorXd responses_;
  Eigen::VectorXd test_features_;
  Eigen::MatrixXd augmented_;
};

}  // namespace rootcp
