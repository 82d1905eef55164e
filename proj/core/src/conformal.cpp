#include "rootcp/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rootcp/error.hpp"

namespace rootcp {

void ConformalConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InvalidInput("epsilon must be positive");
  if (max_fits == 0) throw InvalidInput("max_fits must be positive");
}

ConformalConfig ConformalConfig::for_data(const Dataset& data, double alpha, double relative_epsilon) {
  ConformalConfig cfg;
  cfg.alpha = alpha;
  const double range = data.max_response() - data.min_response();
  cfg.epsilon = relative_epsilon * (range > 0.0 ? range : 1.0);
  return cfg;
}

std::size_t rank_of_last(std::span<const double> scores) {
  if (scores.size() < 2) throw InvalidInput("rank_of_last: need at least 2 scores");
  const double last = scores.back();
  std::size_t rank = 0;
  for (double s : scores) {
    if (std::isnan(s)) throw InvalidInput("rank_of_last: NaN score");
    if (s <= last) ++rank;
  }
  return rank;
}

double typicalness(std::span<const double> scores) {
  const auto rank = rank_of_last(scores);
  return 1.0 - static_cast<double>(rank) / static_cast<double>(scores.size());
}

double typicalness_with_slack(std::span<const double> scores, double slack) {
  if (!(slack >= 0.0)) throw InvalidInput("typicalness_with_slack: slack must be >= 0");
  if (scores.size() < 2) throw InvalidInput("typicalness_with_slack: need at least 2 scores");
  const double threshold = scores.back() - slack;
  std::size_t count = 0;
  for (double s : scores) {
    if (s >= threshold) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(scores.size());
}

std::size_t ceil_index(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) return static_cast<std::size_t>(r);
  return static_cast<std::size_t>(std::ceil(x));
}

bool reaches_level(double pi, double level) { return pi >= level - 1e-12; }

double order_statistic(std::span<const double> values, std::size_t k) {
  if (values.empty()) throw InvalidInput("order_statistic: empty input");
  if (k == 0) k = 1;
  if (k > values.size()) return std::numeric_limits<double>::infinity();
  std::vector<double> sorted(values.begin(), values.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k - 1), sorted.end());
  return sorted[k - 1];
}

double empirical_quantile(std::span<const double> values, double level) {
  if (values.empty()) throw InvalidInput("empirical_quantile: empty input");
  if (!(level > 0.0 && level < 1.0)) throw InvalidInput("empirical_quantile: level must lie in (0, 1)");
  const auto k = ceil_index(static_cast<double>(values.size() + 1) * level);
  return order_statistic(values, k);
}

}  // namespace rootcp
