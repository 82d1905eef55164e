#include "rootcp/regressor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "rootcp/error.hpp"

namespace rootcp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kMinRcond = 1e-14;

// Factorization of the regularized ridge system, primal (p x p) or dual (rows x rows) whichever
// is smaller.
class RidgeSystem {
 public:
  RidgeSystem(const Eigen::Ref<const Eigen::MatrixXd>& X, double lambda) : X_(X), dual_(X.cols() > X.rows()) {
    Eigen::MatrixXd A;
    if (dual_) {
      A = X * X.transpose();
    } else {
      A = X.transpose() * X;
    }
    A.diagonal().array() += lambda;
    ldlt_.compute(A);
    const Eigen::VectorXd pivots = ldlt_.vectorD().cwiseAbs();
    if (ldlt_.info() != Eigen::Success || !(ldlt_.rcond() > kMinRcond) ||
        !(pivots.minCoeff() > kMinRcond * pivots.maxCoeff())) {
      throw NumericalError("ridge: regularized system is singular (lambda = " + std::to_string(lambda) + ")");
    }
  }

  Eigen::VectorXd coefficients(const Eigen::Ref<const Eigen::VectorXd>& y) const {
    if (dual_) return X_.transpose() * ldlt_.solve(y);
    return ldlt_.solve(X_.transpose() * y);
  }

 private:
  Eigen::Ref<const Eigen::MatrixXd> X_;
  bool dual_;
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
};

double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

FittedModel fit_ridge(const RidgeSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& X,
                      const Eigen::Ref<const Eigen::VectorXd>& y) {
  RidgeSystem system(X, spec.lambda);
  return FittedModel(FittedModel::Linear{system.coefficients(y)}, FitMeta{});
}

FittedModel fit_lasso(const LassoSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& X,
                      const Eigen::Ref<const Eigen::VectorXd>& y, const FittedModel* warm) {
  const Eigen::Index p = X.cols();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  if (warm != nullptr && warm->coefficients() != nullptr) beta = *warm->coefficients();

  const Eigen::VectorXd col_sq = X.colwise().squaredNorm().transpose();
  Eigen::VectorXd residual = y - X * beta;
  const double gap_tol = spec.tol * std::max(y.squaredNorm(), std::numeric_limits<double>::min());

  FitMeta meta;
  meta.final_tol = lasso_duality_gap(X, y, beta, spec.lambda);
  meta.converged = meta.final_tol <= gap_tol;
  while (!meta.converged && meta.iterations < spec.max_iter) {
    for (Eigen::Index j = 0; j < p; ++j) {
      if (col_sq(j) == 0.0) {
        beta(j) = 0.0;
        continue;
      }
      const double old = beta(j);
      const double rho = X.col(j).dot(residual) + col_sq(j) * old;
      const double updated = soft_threshold(rho, spec.lambda) / col_sq(j);
      if (updated != old) {
        residual.noalias() -= (updated - old) * X.col(j);
        beta(j) = updated;
      }
    }
    ++meta.iterations;
    meta.final_tol = lasso_duality_gap(X, y, beta, spec.lambda);
    meta.converged = meta.final_tol <= gap_tol;
  }
  return FittedModel(FittedModel::Linear{std::move(beta)}, meta);
}

FittedModel fit_knn(const KnnSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& X,
                    const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (spec.k > X.rows()) {
    throw InvalidInput("knn: k = " + std::to_string(spec.k) + " exceeds the " + std::to_string(X.rows()) +
                       " training rows");
  }
  return FittedModel(FittedModel::Neighbors{X, y, spec.k}, FitMeta{});
}

double knn_predict(const FittedModel::Neighbors& m, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const Eigen::Index rows = m.features.rows();
  std::vector<std::pair<double, Eigen::Index>> dist(static_cast<std::size_t>(rows));
  for (Eigen::Index i = 0; i < rows; ++i) {
    dist[static_cast<std::size_t>(i)] = {(m.features.row(i).transpose() - x).squaredNorm(), i};
  }
  const auto kth = dist.begin() + m.k;
  std::nth_element(dist.begin(), kth - 1, dist.end());
  // nth_element leaves the k smallest (by distance, then index) in front.
  double sum = 0.0;
  for (auto it = dist.begin(); it != kth; ++it) sum += m.responses(it->second);
  return sum / static_cast<double>(m.k);
}

}  // namespace

void validate(const RegressorSpec& spec) {
  std::visit(overloaded{
                 [](const RidgeSpec& r) {
                   if (!(r.lambda >= 0.0) || !std::isfinite(r.lambda)) throw InvalidInput("ridge: lambda must be >= 0");
                 },
                 [](const LassoSpec& l) {
                   if (!(l.lambda > 0.0) || !std::isfinite(l.lambda)) throw InvalidInput("lasso: lambda must be > 0");
                   if (!(l.tol > 0.0)) throw InvalidInput("lasso: tol must be > 0");
                   if (l.max_iter < 1) throw InvalidInput("lasso: max_iter must be >= 1");
                 },
                 [](const KnnSpec& k) {
                   if (k.k < 1) throw InvalidInput("knn: k must be >= 1");
                 },
             },
             spec);
}

std::string describe(const RegressorSpec& spec) {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const RidgeSpec& r) { out << "ridge(lambda=" << r.lambda << ")"; },
                 [&](const LassoSpec& l) {
                   out << "lasso(lambda=" << l.lambda << ", tol=" << l.tol << ", max_iter=" << l.max_iter << ")";
                 },
                 [&](const KnnSpec& k) { out << "knn(k=" << k.k << ")"; },
             },
             spec);
  return out.str();
}

double FittedModel::predict(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return std::visit(overloaded{
                        [&](const Linear& m) {
                          if (x.size() != m.coefficients.size()) throw InvalidInput("predict: feature count mismatch");
                          return m.coefficients.dot(x);
                        },
                        [&](const Neighbors& m) {
                          if (x.size() != m.features.cols()) throw InvalidInput("predict: feature count mismatch");
                          return knn_predict(m, x);
                        },
                    },
                    model_);
}

Eigen::VectorXd FittedModel::predict_rows(const Eigen::Ref<const Eigen::MatrixXd>& rows) const {
  if (const auto* m = std::get_if<Linear>(&model_)) {
    if (rows.cols() != m->coefficients.size()) throw InvalidInput("predict: feature count mismatch");
    return rows * m->coefficients;
  }
  Eigen::VectorXd out(rows.rows());
  for (Eigen::Index i = 0; i < rows.rows(); ++i) out(i) = predict(rows.row(i).transpose());
  return out;
}

const Eigen::VectorXd* FittedModel::coefficients() const noexcept {
  if (const auto* m = std::get_if<Linear>(&model_)) return &m->coefficients;
  return nullptr;
}

Eigen::Index FittedModel::feature_count() const noexcept {
  return std::visit(overloaded{
                        [](const Linear& m) { return m.coefficients.size(); },
                        [](const Neighbors& m) { return m.features.cols(); },
                    },
                    model_);
}

FittedModel fit_rows(const RegressorSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& features,
                     const Eigen::Ref<const Eigen::VectorXd>& responses, const FittedModel* warm) {
  validate(spec);
  if (features.rows() != responses.size()) throw InvalidInput("fit: feature rows and responses differ in length");
  if (!responses.allFinite()) throw InvalidInput("fit: non-finite response");
  if (warm != nullptr && warm->feature_count() != features.cols()) {
    throw InvalidInput("fit: warm start was fitted on " + std::to_string(warm->feature_count()) +
                       " features, data has " + std::to_string(features.cols()));
  }
  return std::visit(overloaded{
                        [&](const RidgeSpec& r) { return fit_ridge(r, features, responses); },
                        [&](const LassoSpec& l) { return fit_lasso(l, features, responses, warm); },
                        [&](const KnnSpec& k) { return fit_knn(k, features, responses); },
                    },
                    spec);
}

FittedModel fit(const RegressorSpec& spec, const Dataset& data, double candidate) {
  if (!std::isfinite(candidate)) throw InvalidInput("fit: non-finite candidate");
  return fit_rows(spec, data.augmented_features(), data.augmented_responses(candidate));
}

FittedModel fit_with_warm_start(const RegressorSpec& spec, const Dataset& data, double candidate,
                                const FittedModel& previous) {
  if (!std::isfinite(candidate)) throw InvalidInput("fit: non-finite candidate");
  if (previous.feature_count() != data.p()) {
    throw InvalidInput("fit_with_warm_start: previous model has " + std::to_string(previous.feature_count()) +
                       " features, data has " + std::to_string(data.p()));
  }
  return fit_rows(spec, data.augmented_features(), data.augmented_responses(candidate), &previous);
}

FittedModel fit_observed(const RegressorSpec& spec, const Dataset& data) {
  return fit_rows(spec, data.features(), data.responses());
}

AffineFitCoefficients affine_coefficients(const Dataset& data, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidInput("affine_coefficients: lambda must be >= 0");
  const Eigen::MatrixXd& X = data.augmented_features();
  RidgeSystem system(X, lambda);
  // Predictions are H y(z) with H = X A^{-1} X^T; a = H y(0), b = H e_{n+1}.
  const Eigen::VectorXd y0 = data.augmented_responses(0.0);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(X.rows());
  e(X.rows() - 1) = 1.0;
  AffineFitCoefficients out;
  out.intercepts = X * system.coefficients(y0);
  out.slopes = X * system.coefficients(e);
  return out;
}

double lasso_lambda_max(const Eigen::Ref<const Eigen::MatrixXd>& features,
                        const Eigen::Ref<const Eigen::VectorXd>& responses) {
  return (features.transpose() * responses).cwiseAbs().maxCoeff();
}

double lasso_duality_gap(const Eigen::Ref<const Eigen::MatrixXd>& features,
                         const Eigen::Ref<const Eigen::VectorXd>& responses,
                         const Eigen::Ref<const Eigen::VectorXd>& coefficients, double lambda) {
  const Eigen::VectorXd residual = responses - features * coefficients;
  const double corr = (features.transpose() * residual).cwiseAbs().maxCoeff();
  const double scale = corr > lambda ? lambda / corr : 1.0;
  const double primal = 0.5 * residual.squaredNorm() + lambda * coefficients.lpNorm<1>();
  // Dual point theta = scale * residual is feasible: ||X^T theta||_inf <= lambda.
  const double dual = 0.5 * responses.squaredNorm() - 0.5 * (responses - scale * residual).squaredNorm();
  return std::max(primal - dual, 0.0);
}

}  // namespace rootcp
