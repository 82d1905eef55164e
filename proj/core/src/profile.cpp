#include "rootcp/profile.hpp"

#include <cmath>
#include <string>

#include "rootcp/error.hpp"

namespace rootcp {

TypicalnessProfile::TypicalnessProfile(std::function<double(double)> fn, std::size_t max_fits)
    : eval_([fn = std::move(fn)](double z) { return Sample{fn(z), {}}; }), max_fits_(max_fits) {}

TypicalnessProfile::TypicalnessProfile(Evaluator eval, PredictionScorer scorer, std::size_t max_fits)
    : eval_(std::move(eval)), scorer_(std::move(scorer)), max_fits_(max_fits) {}

double TypicalnessProfile::operator()(double z) {
  if (!std::isfinite(z)) throw InvalidInput("typicalness profile: non-finite candidate");
  if (auto it = cache_.find(z); it != cache_.end()) return it->second.value;
  if (fits_ >= max_fits_) {
    throw BudgetExhausted("typicalness profile: fit budget of " + std::to_string(max_fits_) + " exhausted");
  }
  ++fits_;
  auto [it, inserted] = cache_.emplace(z, eval_(z));
  return it->second.value;
}

void TypicalnessProfile::record(double z, Sample sample) {
  if (!std::isfinite(z)) throw InvalidInput("typicalness profile: non-finite candidate");
  if (cache_.contains(z)) return;
  if (fits_ >= max_fits_) {
    throw BudgetExhausted("typicalness profile: fit budget of " + std::to_string(max_fits_) + " exhausted");
  }
  ++fits_;
  cache_.emplace(z, std::move(sample));
}

double TypicalnessProfile::score_predictions(const Eigen::VectorXd& predictions, double z) const {
  if (!scorer_) throw Unsupported("typicalness profile: no prediction scorer");
  return scorer_(predictions, z);
}

std::vector<std::pair<double, double>> TypicalnessProfile::probes() const {
  std::vector<std::pair<double, double>> out;
  out.reserve(cache_.size());
  for (const auto& [z, s] : cache_) out.emplace_back(z, s.value);
  return out;
}

std::vector<std::pair<double, Eigen::VectorXd>> TypicalnessProfile::prediction_samples() const {
  std::vector<std::pair<double, Eigen::VectorXd>> out;
  for (const auto& [z, s] : cache_) {
    if (s.predictions.size() > 0) out.emplace_back(z, s.predictions);
  }
  return out;
}

}  // namespace rootcp
