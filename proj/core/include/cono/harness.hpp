#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cono/error.hpp"
#include "cono/instances.hpp"
#include "cono/oracle.hpp"
#include "cono/report.hpp"

namespace cono {

/// Raised for malformed configuration; the CLI maps it to exit status 2.
class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Budget rule: `sqrt` (B = sqrt T), `sqrt:c` (B = c sqrt T) or `abs:x` / a
/// bare number (B = x).
struct BudgetRule {
  enum class Kind { kSqrt, kAbsolute };
  Kind kind = Kind::kSqrt;
  double value = 1.0;

  static BudgetRule parse(const std::string& text);
  double budget(int horizon) const;
  std::string str() const;
};

struct ExperimentConfig {
  std::string instance = "linear";
  std::map<std::string, std::string> instance_params;
  std::string learner = "full_info";
  std::map<std::string, std::string> learner_params;
  std::vector<int> horizons{1000};
  BudgetRule budget;
  std::vector<std::uint64_t> seeds{1};
  std::string out_dir;
  bool verify = true;
  /// 0 picks std::thread::hardware_concurrency().
  int threads = 0;

  /// Throws ConfigError on an empty horizon list, repeated seeds or an
  /// unknown instance or learner name.
  void validate() const;
};

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "CONO_OUT_DIR";

/// Parses the flat `section.key = value` format. Sections: instance,
/// learner, run.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);
/// Applies one `section.key`/value pair to the config.
void apply_setting(ExperimentConfig& config, const std::string& key,
                   const std::string& value);
/// `k=v,k=v`: keys prefixed `instance.` or `run.` go to those sections,
/// anything else is a learner parameter.
void apply_params(ExperimentConfig& config, const std::string& text);

std::vector<int> parse_int_list(const std::string& text);
/// Comma list of integers and inclusive ranges `a-b`.
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

InstanceTrace build_instance(const ExperimentConfig& config, int horizon,
                             std::uint64_t seed);

struct Check {
  std::string name;
  double margin = 0.0;  // lhs - rhs, positive means violation
  bool passed = true;
};

struct CellResult {
  int horizon = 0;
  std::uint64_t seed = 0;
  double budget = 0.0;
  RunReport report;
  BenchmarkResult benchmark;
  double regret = 0.0;
  std::vector<double> cc;
  double regret_bound = 0.0;
  double cc_bound = 0.0;
  std::vector<Check> checks;
  std::string csv_path;

  bool passed() const;
};

/// One trace + learner run + benchmark + enabled inequality checks.
CellResult run_cell(const ExperimentConfig& config, int horizon,
                    std::uint64_t seed);

struct ExperimentResult {
  std::vector<CellResult> cells;  // ordered by (T, seed)
  std::string summary_path;
  bool all_passed() const;
};

/// Executes every (horizon, seed) cell, in parallel, and writes one CSV per
/// run plus summary.csv when out_dir is set.
ExperimentResult run_experiment(const ExperimentConfig& config);

void write_run_csv(std::ostream& out, const CellResult& cell);
void write_summary_csv(std::ostream& out, const std::vector<CellResult>& cells);

struct ParsedRun {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> terminal;
  std::string terminal_value(const std::string& key) const;
};
ParsedRun read_run_csv(std::istream& in);

struct SlopeEstimate {
  double slope = 0.0;
  double half_width = 0.0;
  /// True when nonpositive means forced a shift before taking logs.
  bool shifted = false;
  double shift = 0.0;
  std::vector<double> horizons;
  std::vector<double> means;
};

/// Least-squares slope of log(mean) against log(T); the half-width is a 95%
/// delta-method interval from the per-horizon seed variance.
SlopeEstimate fit_loglog_slope(const std::vector<int>& horizons,
                               const std::vector<std::vector<double>>& samples);

/// Requires at least 3 horizons and 10 seeds.
SlopeEstimate sweep_scaling(const ExperimentConfig& config);

struct LowerboundRow {
  int tau = 0;
  double opt = 0.0;
  double opt_reference = 0.0;  // B^2 / T
  double stopping_opt = 0.0;   // reward of spending the budget at once
  double cc = 0.0;
  double kappa = 0.0;       // with the default additive term
  double kappa_raw = 0.0;   // with s_T = 0
};

struct LowerboundTable {
  int horizon = 0;
  double budget = 0.0;
  double s_T = 0.0;
  double log_T = 0.0;
  std::vector<LowerboundRow> rows;
  double max_kappa = 0.0;
  double max_kappa_raw = 0.0;
};

LowerboundTable lowerbound_experiment(int horizon, double budget);
void write_lowerbound_csv(std::ostream& out, const LowerboundTable& table);

/// 17-significant-digit formatting used by every CSV writer.
std::string format_double(double v);

}  // namespace cono
