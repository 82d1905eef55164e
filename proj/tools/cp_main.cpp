#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rootcp/bench.hpp"
#include "rootcp/error.hpp"
#include "rootcp/report.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kInitFailure = 3;

rootcp::bench::SyntheticSpec parse_synthetic(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) parts.push_back(item);
  if (parts.size() != 4) throw rootcp::InvalidInput("--synthetic expects n,p,informative,noise");
  rootcp::bench::SyntheticSpec spec;
  try {
    spec.n = std::stoi(parts[0]);
    spec.p = std::stoi(parts[1]);
    spec.n_informative = std::stoi(parts[2]);
    spec.noise_sd = std::stod(parts[3]);
  } catch (const std::exception&) {
    throw rootcp::InvalidInput("--synthetic: cannot parse '" + text + "'");
  }
  spec.validate();
  return spec;
}

rootcp::Envelope parse_envelope(const std::string& name) {
  for (auto e : {rootcp::Envelope::sigmoid, rootcp::Envelope::lower_ramp, rootcp::Envelope::upper_ramp}) {
    if (rootcp::to_string(e) == name) return e;
  }
  throw rootcp::InvalidInput("unknown envelope '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conformal prediction intervals by root-finding"};
  app.require_subcommand(1);
  CLI::App* run = app.add_subcommand("run", "Run the repetition benchmark and write a report");

  std::vector<std::string> methods{"full", "split", "oracle"};
  std::string model = "ridge";
  std::optional<double> lambda;
  int k = 10;
  double lasso_tol = 1e-8;
  double alpha = 0.1;
  double eps = 1e-4;
  double gamma = 100.0;
  std::string envelope = "sigmoid";
  int d = 8;
  int repeats = 100;
  std::uint64_t seed = 0;
  std::string synthetic;
  std::string data_path;
  std::string out_path = "-";
  std::string format = "json";
  bool timing = false;

  run->add_option("--method", methods, "full, split, interp, smooth, oracle, ridge-exact (repeatable or comma list)")
      ->delimiter(',');
  run->add_option("--model", model, "ridge, lasso or knn")->check(CLI::IsMember({"ridge", "lasso", "knn"}));
  run->add_option("--lambda", lambda, "Penalty (ridge default 1, lasso default 0.1 * lambda_max)");
  run->add_option("--k", k, "Neighbours for knn")->check(CLI::PositiveNumber);
  run->add_option("--lasso-tol", lasso_tol, "Lasso duality-gap tolerance relative to ||y||^2");
  run->add_option("--alpha", alpha, "Miscoverage level");
  run->add_option("--eps", eps, "Root tolerance relative to the response range");
  run->add_option("--gamma", gamma, "Smoothing slope");
  run->add_option("--envelope", envelope, "sigmoid, lower_ramp or upper_ramp");
  run->add_option("--d", d, "Query fits of the interpolated method");
  run->add_option("--repeats", repeats, "Repetitions");
  run->add_option("--seed", seed, "Master seed");
  auto* syn = run->add_option("--synthetic", synthetic, "n,p,informative,noise");
  auto* dat = run->add_option("--data", data_path, "CSV file, response in the last column")->check(CLI::ExistingFile);
  syn->excludes(dat);
  run->add_option("--out", out_path, "Output file ('-' for stdout)");
  run->add_option("--format", format, "json, table or csv")->check(CLI::IsMember({"json", "table", "csv"}));
  run->add_flag("--timing", timing, "Include wall times in the JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  rootcp::bench::BenchReport report;
  try {
    using namespace rootcp::bench;
    BenchConfig cfg;
    cfg.methods.clear();
    for (const auto& m : methods) {
      const BenchMethod parsed = parse_method(m);
      if (std::find(cfg.methods.begin(), cfg.methods.end(), parsed) == cfg.methods.end()) cfg.methods.push_back(parsed);
    }
    cfg.model.kind = parse_model(model);
    cfg.model.lambda = lambda;
    cfg.model.k = k;
    cfg.model.lasso_tol = lasso_tol;
    cfg.alpha = alpha;
    cfg.relative_epsilon = eps;
    cfg.smoothing.gamma = gamma;
    cfg.smoothing.envelope = parse_envelope(envelope);
    cfg.d = d;
    cfg.repeats = repeats;
    cfg.seed = seed;
    cfg.validate();

    DataSource source = SyntheticSpec{};
    if (!synthetic.empty()) {
      source = parse_synthetic(synthetic);
    } else if (!data_path.empty()) {
      source = load_csv(data_path);
    }
    report = run_benchmark(source, cfg);
    if (!data_path.empty()) report.source = data_path;
  } catch (const rootcp::Error& e) {
    std::cerr << "cp: " << e.what() << "\n";
    return kConfigError;
  }

  std::string text;
  if (format == "json") {
    text = rootcp::bench::to_json(report, timing);
  } else if (format == "table") {
    text = rootcp::bench::to_table(report);
  } else {
    text = rootcp::bench::to_csv(report);
  }
  if (out_path == "-") {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out || !(out << text)) {
      std::cerr << "cp: cannot write " << out_path << "\n";
      return kConfigError;
    }
  }

  const bool init_failed = std::any_of(report.per_rep.begin(), report.per_rep.end(), [](const auto& r) {
    return r.failed && r.error.rfind("initialization failed", 0) == 0;
  });
  if (init_failed) {
    std::cerr << "cp: at least one repetition failed to initialize the root search\n";
    return kInitFailure;
  }
  return 0;
}
