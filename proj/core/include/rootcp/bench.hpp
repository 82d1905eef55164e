#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "rootcp/conformal.hpp"
#include "rootcp/dataset.hpp"
#include "rootcp/interval.hpp"
#include "rootcp/regressor.hpp"
#include "rootcp/score.hpp"
#include "rootcp/smooth_cp.hpp"

namespace rootcp::bench {

/// y = X beta* + noise_sd * N(0, 1), X with iid standard normal entries and beta* with exactly
/// n_informative nonzero standard normal coordinates. n counts every row, the held-out one
/// included.
struct SyntheticSpec {
  int n = 300;
  int p = 50;
  int n_informative = 50;
  double noise_sd = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SyntheticProblem {
  Dataset data;
  double held_out;
  Eigen::VectorXd beta;
};

/// Draw n rows; the last is the held-out (x_{n+1}, y_{n+1}). Bit-identical for equal specs.
SyntheticProblem generate(const SyntheticSpec& spec);

/// Per-column standardization of the features and centering of the response.
struct Standardization {
  Eigen::VectorXd feature_mean;
  Eigen::VectorXd feature_scale;
  double response_mean = 0.0;

  double response_to_original(double y) const { return y + response_mean; }
};

/// Labeled rows after standardization.
struct LabeledData {
  Eigen::MatrixXd features;
  Eigen::VectorXd responses;
  Standardization transform;
};

/// Rectangular numeric CSV, response in the last column, header auto-detected. Standardizes the
/// features and centers the response. Throws ParseError naming the offending line.
LabeledData load_csv(const std::filesystem::path& path);
LabeledData parse_csv(const std::string& text);

/// Dataset made of `order[1..]` as observed rows and `order[0]` as the held-out row.
std::pair<Dataset, double> hold_out(const LabeledData& table, const std::vector<Eigen::Index>& order);

/// Reference interval fitted on D_{n+1}(y_{n+1}): [mu(x_{n+1}) +/- Q], Q the
/// ceil((n+1)(1-alpha))-th smallest of the n+1 scores. One fit.
ConformalInterval oracle_interval(const RegressorSpec& regressor, const Dataset& data,
                                  double true_response, const ConformalConfig& cfg,
                                  const ScoreFunction& score_fn = ScoreFunction::absolute());

enum class BenchMethod { full, split, interp, smooth, oracle, ridge_exact };

std::string to_string(BenchMethod method);
/// Throws InvalidInput on an unknown name.
BenchMethod parse_method(const std::string& name);

enum class ModelKind { ridge, lasso, knn };
std::string to_string(ModelKind kind);
ModelKind parse_model(const std::string& name);

/// Model family plus hyper-parameters; a missing lambda is chosen per repetition from D_n.
struct ModelChoice {
  ModelKind kind = ModelKind::ridge;
  /// Ridge default 1.0; lasso default 0.1 * ||X_n^T y_n||_inf.
  std::optional<double> lambda;
  /// Lasso duality-gap tolerance relative to ||y||^2.
  double lasso_tol = 1e-8;
  int k = 10;

  RegressorSpec resolve(const Dataset& data) const;
};

struct BenchConfig {
  std::vector<BenchMethod> methods{BenchMethod::full, BenchMethod::split, BenchMethod::oracle};
  ModelChoice model{};
  double alpha = 0.1;
  /// Root tolerance relative to the observed response range of each repetition.
  double relative_epsilon = 1e-4;
  int d = 8;
  SmoothingConfig smoothing{};
  int repeats = 100;
  std::uint64_t seed = 0;
  /// Worker threads; 0 means CP_THREADS or the hardware concurrency.
  int threads = 0;

  void validate() const;
};

using DataSource = std::variant<SyntheticSpec, LabeledData>;

struct BenchRecord {
  int rep = 0;
  BenchMethod method = BenchMethod::full;
  bool failed = false;
  std::string error;
  bool covered = false;
  double lower = 0.0;
  double upper = 0.0;
  double length = 0.0;
  double wall_time = 0.0;
  std::size_t fits = 0;
  /// Full method only: init + diagnostic + 2 ceil(log2((z_max - z_min) / epsilon)).
  std::optional<std::size_t> fit_bound;
  /// Root-search methods only.
  std::optional<RootSearchTrace> trace;
  std::vector<std::string> warnings;
};

struct BenchSummary {
  BenchMethod method = BenchMethod::full;
  int runs = 0;
  int failures = 0;
  double mean_coverage = 0.0;
  double mean_length = 0.0;
  double mean_time = 0.0;
  double mean_fits = 0.0;
  /// mean_time / oracle mean_time; nullopt without an oracle column.
  std::optional<double> normalized_time;
};

struct BenchReport {
  BenchConfig config;
  std::string source;
  /// Ordered by repetition, then by the configured method order.
  std::vector<BenchRecord> per_rep;
  std::vector<BenchSummary> summary;

  const BenchSummary& summary_for(BenchMethod method) const;
};

/// Arithmetic means of the non-failed records, one summary per configured method.
std::vector<BenchSummary> summarize(const std::vector<BenchRecord>& records,
                                    const std::vector<BenchMethod>& methods);

/// Repetition loop. Synthetic sources are redrawn from a per-repetition seed; tables are permuted
/// and their first permuted row held out. Failures are recorded, not thrown.
BenchReport run_benchmark(const DataSource& source, const BenchConfig& cfg);

/// Interval of one method on one held-out problem (no timing).
ConformalInterval run_method(BenchMethod method, const RegressorSpec& regressor, const Dataset& data,
                             double held_out, const BenchConfig& cfg, std::uint64_t rep_seed);

/// Worker count from CP_THREADS (when set and positive) or the hardware concurrency.
int default_thread_count();

}  // namespace rootcp::bench
