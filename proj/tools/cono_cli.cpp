// Command-line harness: run experiments, fit scaling slopes, and tabulate the
// lower-bound family.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "cono/harness.hpp"

namespace {

constexpr int kExitVerificationFailed = 1;
constexpr int kExitConfigError = 2;

struct CommonFlags {
  std::string config_path;
  std::string instance;
  std::string learner;
  std::string horizons;
  std::string budget;
  std::string seeds;
  std::string out;
  std::string verify;
  std::string params;
  int threads = -1;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "Config file (section.key = value)");
    app->add_option("--instance", instance,
                    "linear|linear_decreasing|vertex_cover|bandit|"
                    "bwk_lowerbound|trace");
    app->add_option("--learner", learner, "full_info|bandit");
    app->add_option("--T", horizons, "Comma-separated horizons");
    app->add_option("--budget", budget, "sqrt | sqrt:c | abs:x");
    app->add_option("--seeds", seeds, "Seeds, e.g. 1-20 or 3,5,7");
    app->add_option("--out", out,
                    std::string("Output directory (default $") +
                        cono::kOutDirEnv + ")");
    app->add_option("--verify", verify, "on|off");
    app->add_option("--params", params, "Overrides k=v,k=v");
    app->add_option("--threads", threads, "Worker threads (0 = all cores)");
  }

  // Config file first, then explicit flags on top.
  cono::ExperimentConfig resolve() const {
    cono::ExperimentConfig config;
    if (!config_path.empty()) config = cono::load_config(config_path);
    if (!instance.empty()) config.instance = instance;
    if (!learner.empty()) config.learner = learner;
    if (!horizons.empty()) config.horizons = cono::parse_int_list(horizons);
    if (!budget.empty()) config.budget = cono::BudgetRule::parse(budget);
    if (!seeds.empty()) config.seeds = cono::parse_seed_list(seeds);
    if (!out.empty()) config.out_dir = out;
    if (!verify.empty()) cono::apply_setting(config, "run.verify", verify);
    if (!params.empty()) cono::apply_params(config, params);
    if (threads >= 0) config.threads = threads;
    config.validate();
    return config;
  }
};

int cmd_run(const CommonFlags& flags) {
  const auto config = flags.resolve();
  const auto result = cono::run_experiment(config);
  std::printf("%-8s %-6s %14s %14s %14s %14s  %s\n", "T", "seed", "regret",
              "regret_bound", "cc_0", "cc_bound", "checks");
  for (const auto& cell : result.cells) {
    const double cc0 = cell.cc.empty() ? 0.0 : cell.cc.front();
    std::printf("%-8d %-6llu %14.6g %14.6g %14.6g %14.6g  %s\n", cell.horizon,
                static_cast<unsigned long long>(cell.seed), cell.regret,
                cell.regret_bound, cc0, cell.cc_bound,
                cell.checks.empty() ? "-" : (cell.passed() ? "pass" : "FAIL"));
  }
  if (!result.summary_path.empty()) {
    std::printf("summary: %s\n", result.summary_path.c_str());
  }
  return result.all_passed() ? 0 : kExitVerificationFailed;
}

int cmd_sweep(const CommonFlags& flags, double max_slope) {
  const auto config = flags.resolve();
  const auto est = cono::sweep_scaling(config);
  for (std::size_t i = 0; i < est.horizons.size(); ++i) {
    std::printf("T=%-8.0f mean_regret=%.6g\n", est.horizons[i], est.means[i]);
  }
  std::printf("slope=%.4f half_width=%.4f%s\n", est.slope, est.half_width,
              est.shifted ? " (shifted: nonpositive mean regret)" : "");
  if (max_slope > 0.0 && config.verify) {
    const bool ok = est.slope <= max_slope;
    std::printf("slope <= %.3g: %s\n", max_slope, ok ? "pass" : "FAIL");
    return ok ? 0 : kExitVerificationFailed;
  }
  return 0;
}

int cmd_lowerbound(int horizon, double budget, const std::string& out) {
  const auto table = cono::lowerbound_experiment(horizon, budget);
  std::printf("T=%d B=%g s_T=%.6g ln T=%.4f\n", table.horizon, table.budget,
              table.s_T, table.log_T);
  std::printf("%-5s %14s %14s %10s %10s %10s\n", "tau", "OPT", "B^2/T", "CC",
              "kappa", "kappa_raw");
  for (const auto& row : table.rows) {
    std::printf("%-5d %14.6g %14.6g %10.4g %10.4g %10.4g\n", row.tau, row.opt,
                row.opt_reference, row.cc, row.kappa, row.kappa_raw);
  }
  std::printf("max kappa=%.4g (raw %.4g) vs ln T=%.4g\n", table.max_kappa,
              table.max_kappa_raw, table.log_T);
  if (!out.empty()) {
    std::filesystem::create_directories(out);
    std::ofstream file(std::filesystem::path(out) / "lowerbound.csv",
                       std::ios::binary);
    cono::write_lowerbound_csv(file, table);
  }
  return 0;
}

int cmd_export(const CommonFlags& flags, const std::string& path) {
  const auto config = flags.resolve();
  const auto trace =
      cono::build_instance(config, config.horizons.front(), config.seeds.front());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cono::ConfigError("cannot write '" + path + "'");
  cono::write_trace(out, trace);
  std::printf("wrote %s (%d rounds, id %s)\n", path.c_str(), trace.horizon,
              trace.id().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained online learning with approximately convex costs"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  auto* run = app.add_subcommand("run", "Run every (T, seed) cell");
  run_flags.attach(run);

  CommonFlags sweep_flags;
  double max_slope = 0.0;
  auto* sweep = app.add_subcommand("sweep", "Fit the log-log regret slope");
  sweep_flags.attach(sweep);
  sweep->add_option("--max-slope", max_slope, "Fail if the slope exceeds this");

  int lb_T = 10000;
  double lb_budget = 100.0;
  std::string lb_out;
  auto* lower = app.add_subcommand("lowerbound", "Run the phased family I_tau");
  lower->add_option("--T", lb_T, "Horizon");
  lower->add_option("--budget", lb_budget, "Integer budget B_T");
  lower->add_option("--out", lb_out, "Directory for lowerbound.csv");

  CommonFlags export_flags;
  std::string export_path = "trace.txt";
  auto* exporter = app.add_subcommand("export-trace",
                                      "Write the first cell's trace to a file");
  export_flags.attach(exporter);
  exporter->add_option("--file", export_path, "Destination path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  try {
    if (*run) return cmd_run(run_flags);
    if (*sweep) return cmd_sweep(sweep_flags, max_slope);
    if (*lower) return cmd_lowerbound(lb_T, lb_budget, lb_out);
    if (*exporter) return cmd_export(export_flags, export_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfigError;
  }
  return 0;
}
