#include "rootcp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "rootcp/error.hpp"
#include "rootcp/interp_cp.hpp"
#include "rootcp/ridge_oracle.hpp"
#include "rootcp/root_cp.hpp"
#include "rootcp/split_cp.hpp"

namespace rootcp::bench {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t repetition_seed(std::uint64_t seed, int rep) {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(rep) + 1));
}

struct Problem {
  Dataset data;
  double held_out;
  /// Added to reported endpoints to undo the response centering of tables.
  double response_shift = 0.0;
};

Problem draw(const DataSource& source, std::uint64_t rep_seed) {
  if (const auto* spec = std::get_if<SyntheticSpec>(&source)) {
    SyntheticSpec s = *spec;
    s.seed = rep_seed;
    SyntheticProblem p = generate(s);
    return {std::move(p.data), p.held_out, 0.0};
  }
  const auto& table = std::get<LabeledData>(source);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(table.features.rows()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::mt19937_64 rng(rep_seed);
  std::shuffle(order.begin(), order.end(), rng);
  auto [data, y] = hold_out(table, order);
  return {std::move(data), y, table.transform.response_mean};
}

std::string describe_source(const DataSource& source) {
  std::ostringstream out;
  if (const auto* spec = std::get_if<SyntheticSpec>(&source)) {
    out << "synthetic(n=" << spec->n << ",p=" << spec->p << ",informative=" << spec->n_informative
        << ",noise=" << spec->noise_sd << ")";
  } else {
    const auto& table = std::get<LabeledData>(source);
    out << "table(rows=" << table.features.rows() << ",features=" << table.features.cols() << ")";
  }
  return out.str();
}

std::vector<BenchRecord> run_repetition(const DataSource& source, const BenchConfig& cfg, int rep) {
  const std::uint64_t rep_seed = repetition_seed(cfg.seed, rep);
  std::vector<BenchRecord> records;
  records.reserve(cfg.methods.size());

  std::optional<Problem> problem;
  std::optional<RegressorSpec> regressor;
  std::string setup_error;
  try {
    problem.emplace(draw(source, rep_seed));
    regressor.emplace(cfg.model.resolve(problem->data));
  } catch (const std::exception& e) {
    setup_error = e.what();
  }

  for (BenchMethod method : cfg.methods) {
    BenchRecord r;
    r.rep = rep;
    r.method = method;
    if (!regressor) {
      r.failed = true;
      r.error = setup_error;
      records.push_back(std::move(r));
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    try {
      const ConformalInterval ci = run_method(method, *regressor, problem->data, problem->held_out, cfg, rep_seed);
      r.covered = ci.contains(problem->held_out);
      r.lower = ci.empty ? 0.0 : ci.lower + problem->response_shift;
      r.upper = ci.empty ? 0.0 : ci.upper + problem->response_shift;
      r.length = ci.length();
      r.fits = ci.fits_used;
      r.warnings = ci.warnings;
      r.trace = ci.trace;
      if (ci.trace) {
        const double width = ci.trace->z_max - ci.trace->z_min;
        const auto per_side = static_cast<std::size_t>(std::max(0.0, std::ceil(std::log2(width / ci.epsilon))));
        r.fit_bound = ci.trace->init_fits + ci.trace->diagnostic_fits + 2 * per_side;
      }
    } catch (const std::exception& e) {
      r.failed = true;
      r.error = e.what();
    }
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace

std::string to_string(BenchMethod method) {
  switch (method) {
    case BenchMethod::full: return "full";
    case BenchMethod::split: return "split";
    case BenchMethod::interp: return "interp";
    case BenchMethod::smooth: return "smooth";
    case BenchMethod::oracle: return "oracle";
    case BenchMethod::ridge_exact: return "ridge-exact";
  }
  return "unknown";
}

BenchMethod parse_method(const std::string& name) {
  for (BenchMethod m : {BenchMethod::full, BenchMethod::split, BenchMethod::interp, BenchMethod::smooth,
                        BenchMethod::oracle, BenchMethod::ridge_exact}) {
    if (to_string(m) == name) return m;
  }
  throw InvalidInput("unknown method '" + name + "'");
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::ridge: return "ridge";
    case ModelKind::lasso: return "lasso";
    case ModelKind::knn: return "knn";
  }
  return "unknown";
}

ModelKind parse_model(const std::string& name) {
  for (ModelKind m : {ModelKind::ridge, ModelKind::lasso, ModelKind::knn}) {
    if (to_string(m) == name) return m;
  }
  throw InvalidInput("unknown model '" + name + "'");
}

RegressorSpec ModelChoice::resolve(const Dataset& data) const {
  RegressorSpec spec;
  switch (kind) {
    case ModelKind::ridge: spec = RidgeSpec{lambda.value_or(1.0)}; break;
    case ModelKind::lasso: {
      const double l = lambda ? *lambda : 0.1 * lasso_lambda_max(data.features(), data.responses());
      LassoSpec lasso;
      lasso.lambda = l;
      lasso.tol = lasso_tol;
      spec = lasso;
      break;
    }
    case ModelKind::knn: spec = KnnSpec{k}; break;
  }
  validate(spec);
  return spec;
}

void BenchConfig::validate() const {
  if (methods.empty()) throw InvalidInput("bench: no methods selected");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("bench: alpha must lie in (0, 1)");
  if (!(relative_epsilon > 0.0)) throw InvalidInput("bench: epsilon must be positive");
  if (d < 1) throw InvalidInput("bench: d must be >= 1");
  if (repeats < 1) throw InvalidInput("bench: repeats must be >= 1");
  if (threads < 0) throw InvalidInput("bench: threads must be >= 0");
  if (!(smoothing.gamma > 0.0)) throw InvalidInput("bench: gamma must be positive");
  const bool ridge_only = std::find(methods.begin(), methods.end(), BenchMethod::ridge_exact) != methods.end();
  if (ridge_only && model.kind != ModelKind::ridge) throw InvalidInput("bench: ridge_exact needs the ridge model");
}

const BenchSummary& BenchReport::summary_for(BenchMethod method) const {
  for (const auto& s : summary) {
    if (s.method == method) return s;
  }
  throw InvalidInput("bench report: no summary for method " + to_string(method));
}

std::vector<BenchSummary> summarize(const std::vector<BenchRecord>& records, const std::vector<BenchMethod>& methods) {
  std::vector<BenchSummary> out;
  for (BenchMethod method : methods) {
    BenchSummary s;
    s.method = method;
    for (const auto& r : records) {
      if (r.method != method) continue;
      if (r.failed) {
        ++s.failures;
        continue;
      }
      ++s.runs;
      s.mean_coverage += r.covered ? 1.0 : 0.0;
      s.mean_length += r.length;
      s.mean_time += r.wall_time;
      s.mean_fits += static_cast<double>(r.fits);
    }
    if (s.runs > 0) {
      s.mean_coverage /= s.runs;
      s.mean_length /= s.runs;
      s.mean_time /= s.runs;
      s.mean_fits /= s.runs;
    }
    out.push_back(s);
  }
  const auto oracle = std::find_if(out.begin(), out.end(), [](const BenchSummary& s) { return s.method == BenchMethod::oracle; });
  if (oracle != out.end() && oracle->runs > 0 && oracle->mean_time > 0.0) {
    const double base = oracle->mean_time;
    for (auto& s : out) {
      if (s.runs > 0) s.normalized_time = s.mean_time / base;
    }
  }
  return out;
}

ConformalInterval oracle_interval(const RegressorSpec& regressor, const Dataset& data, double true_response,
                                  const ConformalConfig& cfg, const ScoreFunction& score_fn) {
  cfg.validate();
  const FittedModel model = fit(regressor, data, true_response);
  const Eigen::VectorXd mu = model.predict_rows(data.augmented_features());
  const Eigen::Index n = data.n();
  std::vector<double> scores(static_cast<std::size_t>(n + 1));
  for (Eigen::Index i = 0; i < n; ++i) scores[static_cast<std::size_t>(i)] = score(score_fn, data.responses()(i), mu(i));
  scores[static_cast<std::size_t>(n)] = score(score_fn, true_response, mu(n));
  const double q = order_statistic(scores, ceil_index(static_cast<double>(n + 1) * (1.0 - cfg.alpha)));
  const LevelSet set = score_level_set(score_fn, mu(n), q);
  ConformalInterval out;
  out.method = Method::oracle;
  out.lower = set.lower;
  out.upper = set.upper;
  out.fits_used = 1;
  return out;
}

ConformalInterval run_method(BenchMethod method, const RegressorSpec& regressor, const Dataset& data, double held_out,
                             const BenchConfig& cfg, std::uint64_t rep_seed) {
  ConformalConfig ccfg = ConformalConfig::for_data(data, cfg.alpha, cfg.relative_epsilon);
  ccfg.seed = rep_seed;
  const SplitConfig split{0.5, rep_seed};
  switch (method) {
    case BenchMethod::full: return conformal_interval(regressor, data, ccfg);
    case BenchMethod::split: return split_interval(regressor, data, ccfg, split);
    case BenchMethod::interp: return interpolated_conformal_interval(regressor, data, ccfg, cfg.d, split);
    case BenchMethod::smooth: return smooth_conformal_interval(regressor, data, ccfg, cfg.smoothing);
    case BenchMethod::oracle: return oracle_interval(regressor, data, held_out, ccfg);
    case BenchMethod::ridge_exact: {
      const auto* ridge = std::get_if<RidgeSpec>(&regressor);
      if (ridge == nullptr) throw Unsupported("ridge_exact needs a ridge regressor");
      return exact_ridge_set(data, ridge->lambda, cfg.alpha).hull();
    }
  }
  throw InvalidInput("unknown method");
}

int default_thread_count() {
  if (const char* env = std::getenv("CP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

BenchReport run_benchmark(const DataSource& source, const BenchConfig& cfg) {
  cfg.validate();
  if (const auto* spec = std::get_if<SyntheticSpec>(&source)) spec->validate();
  if (const auto* table = std::get_if<LabeledData>(&source); table != nullptr && table->features.rows() < 3) {
    throw InvalidInput("bench: a table needs at least 3 rows (two observed plus the held-out one)");
  }

  std::vector<std::vector<BenchRecord>> by_rep(static_cast<std::size_t>(cfg.repeats));
  const int workers = std::max(1, std::min(cfg.threads > 0 ? cfg.threads : default_thread_count(), cfg.repeats));
  std::atomic<int> next{0};
  auto work = [&]() {
    for (int rep = next++; rep < cfg.repeats; rep = next++) {
      by_rep[static_cast<std::size_t>(rep)] = run_repetition(source, cfg, rep);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  BenchReport report;
  report.config = cfg;
  report.source = describe_source(source);
  for (auto& recs : by_rep) {
    for (auto& r : recs) report.per_rep.push_back(std::move(r));
  }
  report.summary = summarize(report.per_rep, cfg.methods);
  return report;
}

}  // namespace rootcp::bench
