#include "rootcp/report.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

namespace rootcp::bench {

namespace {

using Json = nlohmann::ordered_json;

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fmt(double v, int precision = 6) {
  std::ostringstream out;
  out << std::setprecision(precision) << v;
  return out.str();
}

}  // namespace

std::string to_json(const BenchReport& report, bool include_timing) {
  const BenchConfig& c = report.config;
  Json config;
  Json methods = Json::array();
  for (auto m : c.methods) methods.push_back(to_string(m));
  config["methods"] = methods;
  config["model"] = to_string(c.model.kind);
  if (c.model.lambda) config["lambda"] = number(*c.model.lambda);
  if (c.model.kind == ModelKind::lasso) config["lasso_tol"] = number(c.model.lasso_tol);
  if (c.model.kind == ModelKind::knn) config["k"] = c.model.k;
  config["alpha"] = number(c.alpha);
  config["relative_epsilon"] = number(c.relative_epsilon);
  config["d"] = c.d;
  config["gamma"] = number(c.smoothing.gamma);
  config["envelope"] = to_string(c.smoothing.envelope);
  config["repeats"] = c.repeats;
  config["seed"] = c.seed;

  Json reps = Json::array();
  for (const auto& r : report.per_rep) {
    Json j;
    j["rep"] = r.rep;
    j["method"] = to_string(r.method);
    j["failed"] = r.failed;
    if (r.failed) {
      j["error"] = r.error;
    } else {
      j["covered"] = r.covered;
      j["lower"] = number(r.lower);
      j["upper"] = number(r.upper);
      j["length"] = number(r.length);
      j["fits"] = r.fits;
      if (r.fit_bound) j["fit_bound"] = *r.fit_bound;
      if (r.trace) {
        Json t;
        t["init_stage"] = r.trace->init_stage;
        t["init_fits"] = r.trace->init_fits;
        t["bisection_fits"] = r.trace->bisection_fits;
        t["diagnostic_fits"] = r.trace->diagnostic_fits;
        t["z_min"] = number(r.trace->z_min);
        t["z0"] = number(r.trace->z0);
        t["z_max"] = number(r.trace->z_max);
        j["search"] = std::move(t);
      }
      if (!r.warnings.empty()) j["warnings"] = r.warnings;
    }
    if (include_timing) j["wall_time"] = number(r.wall_time);
    reps.push_back(std::move(j));
  }

  Json summary = Json::array();
  for (const auto& s : report.summary) {
    Json j;
    j["method"] = to_string(s.method);
    j["runs"] = s.runs;
    j["failures"] = s.failures;
    j["mean_coverage"] = number(s.mean_coverage);
    j["mean_length"] = number(s.mean_length);
    j["mean_fits"] = number(s.mean_fits);
    if (include_timing) {
      j["mean_time"] = number(s.mean_time);
      j["normalized_time"] = s.normalized_time ? number(*s.normalized_time) : Json(nullptr);
    }
    summary.push_back(std::move(j));
  }

  Json root;
  root["source"] = report.source;
  root["config"] = std::move(config);
  root["summary"] = std::move(summary);
  root["per_rep"] = std::move(reps);
  return root.dump(2) + "\n";
}

std::string to_table(const BenchReport& report) {
  std::ostringstream out;
  out << report.source << ", model " << to_string(report.config.model.kind) << ", alpha " << report.config.alpha
      << ", " << report.config.repeats << " repetitions\n";
  out << std::left << std::setw(12) << "method" << std::right << std::setw(6) << "runs" << std::setw(6) << "fail"
      << std::setw(10) << "coverage" << std::setw(12) << "length" << std::setw(9) << "fits" << std::setw(12)
      << "time[s]" << std::setw(10) << "rel.time" << "\n";
  for (const auto& s : report.summary) {
    out << std::left << std::setw(12) << to_string(s.method) << std::right << std::setw(6) << s.runs << std::setw(6)
        << s.failures << std::setw(10) << fmt(s.mean_coverage, 4) << std::setw(12) << fmt(s.mean_length, 5)
        << std::setw(9) << fmt(s.mean_fits, 4) << std::setw(12) << fmt(s.mean_time, 4) << std::setw(10)
        << (s.normalized_time ? fmt(*s.normalized_time, 4) : std::string("-")) << "\n";
  }
  return out.str();
}

std::string to_csv(const BenchReport& report) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "rep,method,failed,covered,lower,upper,length,fits,wall_time,error\n";
  for (const auto& r : report.per_rep) {
    out << r.rep << ',' << to_string(r.method) << ',' << (r.failed ? 1 : 0) << ',' << (r.covered ? 1 : 0) << ','
        << r.lower << ',' << r.upper << ',' << r.length << ',' << r.fits << ',' << r.wall_time << ','
        << csv_field(r.error) << "\n";
  }
  return out.str();
}

}  // namespace rootcp::bench
