#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "rootcp/bench.hpp"
#include "rootcp/error.hpp"

namespace rootcp::bench {

void SyntheticSpec::validate() const {
  if (n < 3) throw InvalidInput("synthetic: n must be >= 3 (two observed rows plus the held-out one)");
  if (p < 1) throw InvalidInput("synthetic: p must be >= 1");
  if (n_informative < 0 || n_informative > p) throw InvalidInput("synthetic: need 0 <= informative <= p");
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) throw InvalidInput("synthetic: noise must be finite and >= 0");
}

SyntheticProblem generate(const SyntheticSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Eigen::MatrixXd x(spec.n, spec.p);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = normal(rng);
  }
  std::vector<Eigen::Index> columns(static_cast<std::size_t>(spec.p));
  std::iota(columns.begin(), columns.end(), Eigen::Index{0});
  std::shuffle(columns.begin(), columns.end(), rng);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(spec.p);
  for (int j = 0; j < spec.n_informative; ++j) beta(columns[static_cast<std::size_t>(j)]) = normal(rng);

  Eigen::VectorXd y = x * beta;
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += spec.noise_sd * normal(rng);

  const Eigen::Index m = spec.n - 1;
  Dataset data(x.topRows(m), y.head(m), x.row(m).transpose());
  return SyntheticProblem{std::move(data), y(m), std::move(beta)};
}

}  // namespace rootcp::bench
