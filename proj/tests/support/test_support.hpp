#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "rootcp/bench.hpp"
#include "rootcp/conformal.hpp"
#include "rootcp/dataset.hpp"
#include "rootcp/regressor.hpp"
#include "rootcp/score.hpp"

namespace rootcp::testkit {

// Hand-rolled generators for the property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  // Scores with deliberate ties: values drawn from a small lattice half of the time.
  std::vector<double> scores(int count) {
    std::vector<double> out(static_cast<std::size_t>(count));
    const bool lattice = coin();
    for (auto& v : out) v = lattice ? static_cast<double>(integer(0, 4)) : uniform(0.0, 5.0);
    return out;
  }

  Dataset dataset(int n, int p, double noise = 1.0) {
    Eigen::MatrixXd x(n, p);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal();
    Eigen::VectorXd beta(p);
    for (Eigen::Index j = 0; j < p; ++j) beta(j) = normal();
    Eigen::VectorXd y = x * beta;
    for (Eigen::Index i = 0; i < n; ++i) y(i) += noise * normal();
    Eigen::VectorXd test(p);
    for (Eigen::Index j = 0; j < p; ++j) test(j) = normal();
    return Dataset(std::move(x), std::move(y), std::move(test));
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline bench::SyntheticProblem synthetic(std::uint64_t seed, int n = 300, int p = 50, int informative = 50) {
  bench::SyntheticSpec spec;
  spec.n = n;
  spec.p = p;
  spec.n_informative = informative;
  spec.seed = seed;
  return bench::generate(spec);
}

// Typicalness from a genuine refit on D_{n+1}(z), no caching or shortcuts.
inline double refit_typicalness(const RegressorSpec& reg, const Dataset& data, double z,
                                const ScoreFunction& fn = ScoreFunction::absolute()) {
  const FittedModel model = fit(reg, data, z);
  const Eigen::VectorXd mu = model.predict_rows(data.augmented_features());
  std::vector<double> s(static_cast<std::size_t>(data.n() + 1));
  for (Eigen::Index i = 0; i < data.n(); ++i) s[static_cast<std::size_t>(i)] = score(fn, data.responses()(i), mu(i));
  s.back() = score(fn, z, mu(data.n()));
  return typicalness(s);
}

}  // namespace rootcp::testkit
