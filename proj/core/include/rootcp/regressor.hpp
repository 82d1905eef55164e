#pragma once

#include <string>
#include <variant>

#include <Eigen/Dense>

#include "rootcp/dataset.hpp"

namespace rootcp {

/// argmin_b ||y - X b||^2 + lambda ||b||^2, solved exactly. No intercept.
struct RidgeSpec {
  double lambda = 1.0;
};

/// argmin_b 1/2 ||y - X b||^2 + lambda ||b||_1 by cyclic coordinate descent. No intercept.
///
/// Stops once the duality gap is below tol * ||y||^2, y being the response vector of the fit.
struct LassoSpec {
  double lambda = 1.0;
  double tol = 1e-8;
  int max_iter = 10000;
};

/// Mean response of the k nearest rows (Euclidean); distance ties go to the lowest row index.
struct KnnSpec {
  int k = 5;
};

using RegressorSpec = std::variant<RidgeSpec, LassoSpec, KnnSpec>;

/// Throws InvalidInput on a negative/non-finite penalty, tol <= 0, max_iter < 1 or k < 1.
void validate(const RegressorSpec& spec);
std::string describe(const RegressorSpec& spec);

struct FitMeta {
  /// Coordinate-descent sweeps (lasso); 0 for closed-form fits.
  int iterations = 0;
  /// Duality gap at exit (lasso); 0 for closed-form fits.
  double final_tol = 0.0;
  bool converged = true;
};

/// Prediction function produced by fitting a regressor. Immutable.
class FittedModel {
 public:
  struct Linear {
    Eigen::VectorXd coefficients;
  };
  struct Neighbors {
    Eigen::MatrixXd features;
    Eigen::VectorXd responses;
    int k;
  };

  FittedModel(Linear model, FitMeta meta) : model_(std::move(model)), meta_(meta) {}
  FittedModel(Neighbors model, FitMeta meta) : model_(std::move(model)), meta_(meta) {}

  double predict(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// One prediction per row of `rows`.
  Eigen::VectorXd predict_rows(const Eigen::Ref<const Eigen::MatrixXd>& rows) const;

  const FitMeta& meta() const noexcept { return meta_; }
  /// nullptr for neighbor models.
  const Eigen::VectorXd* coefficients() const noexcept;
  Eigen::Index feature_count() const noexcept;

 private:
  std::variant<Linear, Neighbors> model_;
  FitMeta meta_;
};

/// Fit on arbitrary rows. `warm` seeds iterative solvers and is ignored by closed-form ones.
FittedModel fit_rows(const RegressorSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& features,
                     const Eigen::Ref<const Eigen::VectorXd>& responses,
                     const FittedModel* warm = nullptr);

/// Fit on the augmented dataset D_{n+1}(candidate).
FittedModel fit(const RegressorSpec& spec, const Dataset& data, double candidate);

/// Same contract as fit(); lasso starts from `previous`' coefficients.
/// Throws InvalidInput if `previous` was fitted on a different feature count.
FittedModel fit_with_warm_start(const RegressorSpec& spec, const Dataset& data, double candidate,
                                const FittedModel& previous);

/// Fit on the observed pairs only (D_n).
FittedModel fit_observed(const RegressorSpec& spec, const Dataset& data);

/// Ridge predictions on D_{n+1}(z) are affine in z: mu_z(x_i) = intercepts[i] + slopes[i] * z for
/// every augmented row i (the test row last).
struct AffineFitCoefficients {
  Eigen::VectorXd intercepts;
  Eigen::VectorXd slopes;
};

/// Throws NumericalError when the regularized system is singular.
AffineFitCoefficients affine_coefficients(const Dataset& data, double lambda);

/// Smallest lambda for which the lasso solution on (X, y) is zero: ||X^T y||_inf.
double lasso_lambda_max(const Eigen::Ref<const Eigen::MatrixXd>& features,
                        const Eigen::Ref<const Eigen::VectorXd>& responses);

/// Lasso duality gap of `coefficients` on (X, y) at penalty lambda.
double lasso_duality_gap(const Eigen::Ref<const Eigen::MatrixXd>& features,
                         const Eigen::Ref<const Eigen::VectorXd>& responses,
                         const Eigen::Ref<const Eigen::VectorXd>& coefficients, double lambda);

}  // namespace rootcp
