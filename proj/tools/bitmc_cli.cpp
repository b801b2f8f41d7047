#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bitmc/experiment.hpp"
#include "bitmc/norms.hpp"
#include "bitmc/verify.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void dump(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::int64_t seed_override, bool traces) {
  bitmc::ExperimentSpec spec = bitmc::parse_experiment_json(slurp(config_path));
  if (seed_override >= 0) spec.seed = static_cast<std::uint64_t>(seed_override);

  const bitmc::ExperimentResult result = bitmc::run_experiment(spec, traces);

  fs::create_directories(out_dir);
  dump(fs::path(out_dir) / "results.csv", result.csv);
  dump(fs::path(out_dir) / "timings.csv", result.timings_csv);
  dump(fs::path(out_dir) / "config-echo.json", bitmc::echo_config_json(spec) + "\n");
  for (const auto& [label, trace] : result.traces) {
    std::ostringstream csv;
    csv << "iteration,objective\n";
    for (size_t i = 0; i < trace.size(); ++i) csv << i << ',' << trace[i] << '\n';
    dump(fs::path(out_dir) / ("trace_" + label + ".csv"), csv.str());
  }

  int failures = 0;
  for (const auto& row : result.rows)
    if (!row.error.empty()) ++failures;
  std::cout << "wrote " << result.rows.size() << " data rows to " << out_dir
            << "/results.csv";
  if (failures) std::cout << " (" << failures << " estimator failures recorded)";
  std::cout << '\n';
  return 0;
}

int cmd_print_metrics(const std::string& estimate_path, const std::string& truth_path) {
  std::ifstream ein(estimate_path), tin(truth_path);
  if (!ein) throw std::runtime_error("cannot open " + estimate_path);
  if (!tin) throw std::runtime_error("cannot open " + truth_path);
  const Eigen::MatrixXd estimate = bitmc::read_matrix_csv(ein);
  const Eigen::MatrixXd truth = bitmc::read_matrix_csv(tin);
  const auto dist = bitmc::uniform_sampling(static_cast<int>(truth.rows()),
                                            static_cast<int>(truth.cols()));
  const bitmc::RecoveryErrors errs = bitmc::recovery_errors(estimate, truth, dist);

  std::cout.precision(17);
  std::cout << "{\"recovery\":{\"per_dim_frob_sq\":" << errs.per_dim_frob_sq
            << ",\"rel_frob_sq\":" << errs.rel_frob_sq
            << ",\"weighted_frob_sq\":" << errs.weighted_frob_sq
            << "},\"estimate_norms\":" << bitmc::norm_report(estimate).to_json()
            << ",\"truth_norms\":" << bitmc::norm_report(truth).to_json() << "}\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1-bit matrix completion benchmark harness"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  std::int64_t seed_override = -1;
  bool traces = false;
  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "experiment config (json)")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--seed", seed_override, "override the config seed");
  run->add_flag("--traces", traces, "also write per-run objective traces");

  auto* verify = app.add_subcommand("verify", "run the randomized property suite");

  std::string estimate_path, truth_path;
  auto* metrics = app.add_subcommand("print-metrics", "metrics for an estimate vs truth");
  metrics->add_option("estimate", estimate_path, "estimate (dense csv)")->required();
  metrics->add_option("truth", truth_path, "truth (dense csv)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir, seed_override, traces);
    if (verify->parsed()) return bitmc::run_verification(std::cout) ? 0 : 1;
    if (metrics->parsed()) return cmd_print_metrics(estimate_path, truth_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
