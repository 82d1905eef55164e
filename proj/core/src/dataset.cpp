#include "rootcp/dataset.hpp"

#include <string>

#include "rootcp/error.hpp"

namespace rootcp {

Dataset::Dataset(Eigen::MatrixXd features, Eigen::VectorXd responses, Eigen::VectorXd test_features)
    : features_(std::move(features)),
      responses_(std::move(responses)),
      test_features_(std::move(test_features)) {
  if (features_.rows() != responses_.size()) {
    throw InvalidInput("dataset: " + std::to_string(features_.rows()) + " feature rows but " +
                       std::to_string(responses_.size()) + " responses");
  }
  if (responses_.size() < 2) {
    throw InvalidInput("dataset: need at least 2 observations");
  }
  if (test_features_.size() != features_.cols()) {
    throw InvalidInput("dataset: test row has " + std::to_string(test_features_.size()) +
                       " features, expected " + std::to_string(features_.cols()));
  }
  if (!features_.allFinite() || !responses_.allFinite() || !test_features_.allFinite()) {
    throw InvalidInput("dataset: non-finite entry");
  }
  augmented_.resize(features_.rows() + 1, features_.cols());
  augmented_.topRows(features_.rows()) = features_;
  augmented_.row(features_.rows()) = test_features_.transpose();
}

Eigen::VectorXd Dataset::augmented_responses(double candidate) const {
  Eigen::VectorXd y(responses_.size() + 1);
  y.head(responses_.size()) = responses_;
  y(responses_.size()) = candidate;
  return y;
}

}  // namespace rootcp
