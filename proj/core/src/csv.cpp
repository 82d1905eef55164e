#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rootcp/bench.hpp"
#include "rootcp/error.hpp"

namespace rootcp::bench {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<double> to_number(std::string_view field) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) return std::nullopt;
  return value;
}

}  // namespace

LabeledData parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  std::size_t columns = 0;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    std::vector<double> row;
    row.reserve(fields.size());
    bool numeric = true;
    for (auto f : fields) {
      const auto v = to_number(f);
      if (!v) {
        numeric = false;
        break;
      }
      row.push_back(*v);
    }
    if (first_content) {
      first_content = false;
      columns = fields.size();
      if (columns < 2) throw ParseError("csv line " + std::to_string(line_no) + ": need at least one feature and a response");
      if (!numeric) continue;  // header
    }
    if (fields.size() != columns) {
      throw ParseError("csv line " + std::to_string(line_no) + ": expected " + std::to_string(columns) + " fields, got " +
                       std::to_string(fields.size()));
    }
    if (!numeric) throw ParseError("csv line " + std::to_string(line_no) + ": non-numeric field");
    for (double v : row) {
      if (!std::isfinite(v)) throw ParseError("csv line " + std::to_string(line_no) + ": non-finite value");
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw ParseError("csv: need at least 2 data rows");

  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(columns - 1);
  LabeledData out;
  out.features.resize(n, p);
  out.responses.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < p; ++j) out.features(i, j) = r[static_cast<std::size_t>(j)];
    out.responses(i) = r.back();
  }

  Standardization& t = out.transform;
  t.feature_mean = out.features.colwise().mean().transpose();
  t.feature_scale.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double sd = std::sqrt((out.features.col(j).array() - t.feature_mean(j)).square().mean());
    t.feature_scale(j) = sd > 0.0 ? sd : 1.0;
    out.features.col(j) = (out.features.col(j).array() - t.feature_mean(j)) / t.feature_scale(j);
  }
  t.response_mean = out.responses.mean();
  out.responses.array() -= t.response_mean;
  return out;
}

LabeledData load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("csv: cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str());
}

std::pair<Dataset, double> hold_out(const LabeledData& table, const std::vector<Eigen::Index>& order) {
  const Eigen::Index total = table.features.rows();
  if (static_cast<Eigen::Index>(order.size()) != total) throw InvalidInput("hold_out: order must list every row");
  const Eigen::Index n = total - 1;
  Eigen::MatrixXd x(n, table.features.cols());
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index src = order[static_cast<std::size_t>(i + 1)];
    if (src < 0 || src >= total) throw InvalidInput("hold_out: row index out of range");
    x.row(i) = table.features.row(src);
    y(i) = table.responses(src);
  }
  const Eigen::Index test = order.front();
  if (test < 0 || test >= total) throw InvalidInput("hold_out: row index out of range");
  return {Dataset(std::move(x), std::move(y), table.features.row(test).transpose()), table.responses(test)};
}

}  // namespace rootcp::bench
