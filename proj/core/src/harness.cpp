#include "cono/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "cono/bandit.hpp"
#include "cono/full_info.hpp"

namespace cono {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  return parts;
}

double to_double(const std::string& text, const std::string& what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError(what + ": expected a number, got '" + text + "'");
  }
  return v;
}

long long to_integer(const std::string& text, const std::string& what) {
  long long v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError(what + ": expected an integer, got '" + text + "'");
  }
  return v;
}

bool to_bool(const std::string& text, const std::string& what) {
  if (text == "on" || text == "true" || text == "1" || text == "yes") {
    return true;
  }
  if (text == "off" || text == "false" || text == "0" || text == "no") {
    return false;
  }
  throw ConfigError(what + ": expected on|off, got '" + text + "'");
}

std::string param(const std::map<std::string, std::string>& params,
                  const std::string& key, const std::string& fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

double param_double(const std::map<std::string, std::string>& params,
                    const std::string& key, double fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : to_double(it->second, key);
}

int param_int(const std::map<std::string, std::string>& params,
              const std::string& key, int fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback
                            : static_cast<int>(to_integer(it->second, key));
}

const std::set<std::string> kInstances{"linear", "linear_decreasing",
                                       "vertex_cover", "bandit",
                                       "bwk_lowerbound", "trace"};
const std::set<std::string> kLearners{"full_info", "bandit"};

constexpr double kCheckTol = 1e-9;

Check make_check(std::string name, double lhs, double rhs,
                 double tol = kCheckTol) {
  Check c;
  c.name = std::move(name);
  c.margin = lhs - rhs;
  // NaN bounds (undefined for the run) do not count as failures.
  c.passed = std::isnan(c.margin) || c.margin <= tol * std::max(1.0, std::abs(rhs));
  return c;
}

std::string cell_file_name(const ExperimentConfig& config, int horizon,
                           std::uint64_t seed) {
  return config.learner + "_" + config.instance + "_T" +
         std::to_string(horizon) + "_s" + std::to_string(seed) + ".csv";
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

BudgetRule BudgetRule::parse(const std::string& text) {
  const std::string t = trim(text);
  BudgetRule rule;
  if (t == "sqrt") return rule;
  if (t.rfind("sqrt:", 0) == 0) {
    rule.value = to_double(t.substr(5), "budget");
  } else {
    rule.kind = Kind::kAbsolute;
    rule.value = to_double(t.rfind("abs:", 0) == 0 ? t.substr(4) : t, "budget");
  }
  if (!(rule.value >= 0.0) || !std::isfinite(rule.value)) {
    throw ConfigError("budget rule must produce B_T >= 0");
  }
  return rule;
}

double BudgetRule::budget(int horizon) const {
  if (kind == Kind::kAbsolute) return value;
  return value * std::sqrt(static_cast<double>(horizon));
}

std::string BudgetRule::str() const {
  if (kind == Kind::kAbsolute) return "abs:" + format_double(value);
  return value == 1.0 ? "sqrt" : "sqrt:" + format_double(value);
}

void ExperimentConfig::validate() const {
  if (horizons.empty()) throw ConfigError("horizon list is empty");
  for (int T : horizons) {
    if (T < 1) throw ConfigError("horizons must be positive");
  }
  if (seeds.empty()) throw ConfigError("seed list is empty");
  std::set<std::uint64_t> unique(seeds.begin(), seeds.end());
  if (unique.size() != seeds.size()) throw ConfigError("seeds must be distinct");
  if (!kInstances.count(instance)) {
    throw ConfigError("unknown instance '" + instance + "'");
  }
  if (!kLearners.count(learner)) {
    throw ConfigError("unknown learner '" + learner + "'");
  }
  if (threads < 0) throw ConfigError("threads must be >= 0");
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) {
    if (item.empty()) continue;
    out.push_back(static_cast<int>(to_integer(item, "integer list")));
  }
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split(text, ',')) {
    if (item.empty()) continue;
    const auto dash = item.find('-', 1);
    if (dash == std::string::npos) {
      out.push_back(static_cast<std::uint64_t>(to_integer(item, "seeds")));
      continue;
    }
    const auto a = to_integer(trim(item.substr(0, dash)), "seed range");
    const auto b = to_integer(trim(item.substr(dash + 1)), "seed range");
    if (a < 0 || b < a) throw ConfigError("bad seed range '" + item + "'");
    for (auto s = a; s <= b; ++s) out.push_back(static_cast<std::uint64_t>(s));
  }
  return out;
}

void apply_setting(ExperimentConfig& config, const std::string& key,
                   const std::string& value) {
  const auto dot = key.find('.');
  if (dot == std::string::npos) {
    throw ConfigError("setting '" + key + "' needs a section prefix");
  }
  const std::string section = key.substr(0, dot);
  const std::string name = key.substr(dot + 1);
  if (section == "instance") {
    if (name == "family") {
      config.instance = value;
    } else {
      config.instance_params[name] = value;
    }
  } else if (section == "learner") {
    if (name == "name") {
      config.learner = value;
    } else {
      config.learner_params[name] = value;
    }
  } else if (section == "run") {
    if (name == "horizons" || name == "T") {
      config.horizons = parse_int_list(value);
    } else if (name == "budget") {
      config.budget = BudgetRule::parse(value);
    } else if (name == "seeds") {
      config.seeds = parse_seed_list(value);
    } else if (name == "out") {
      config.out_dir = value;
    } else if (name == "verify") {
      config.verify = to_bool(value, key);
    } else if (name == "threads") {
      config.threads = static_cast<int>(to_integer(value, key));
    } else {
      throw ConfigError("unknown run setting '" + name + "'");
    }
  } else {
    throw ConfigError("unknown section '" + section + "'");
  }
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'section.key = value'");
    }
    try {
      apply_setting(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " +
                        e.what());
    }
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse_config(in);
}

void apply_params(ExperimentConfig& config, const std::string& text) {
  for (const auto& item : split(text, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("--params entries must be key=value, got '" + item + "'");
    }
    const std::string key = trim(item.substr(0, eq));
    const std::string value = trim(item.substr(eq + 1));
    if (key.rfind("instance.", 0) == 0 || key.rfind("run.", 0) == 0 ||
        key.rfind("learner.", 0) == 0) {
      apply_setting(config, key, value);
    } else {
      config.learner_params[key] = value;
    }
  }
}

InstanceTrace build_instance(const ExperimentConfig& config, int horizon,
                             std::uint64_t seed) {
  const auto& p = config.instance_params;
  const double budget = config.budget.budget(horizon);
  const std::string& family = config.instance;
  if (family == "linear" || family == "linear_decreasing") {
    return gen_linear(param_int(p, "d", 2), horizon, budget,
                      param_int(p, "k", 1), seed,
                      family == "linear" ? LinearShape::kIncreasing
                                         : LinearShape::kDecreasing);
  }
  if (family == "vertex_cover") {
    return gen_vertex_cover(param_int(p, "n", 6), horizon,
                            param_double(p, "edge_prob", 0.5),
                            {param_double(p, "price_lo", 0.0),
                             param_double(p, "price_hi", 1.0)},
                            budget, seed);
  }
  if (family == "bandit") {
    return gen_stochastic_bandit(param_int(p, "arms", 2), horizon, budget,
                                 seed);
  }
  if (family == "bwk_lowerbound") {
    return gen_bwk_lowerbound(horizon, std::floor(budget),
                              param_int(p, "tau", 1));
  }
  if (family == "trace") {
    const std::string path = param(p, "path", "");
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open trace '" + path + "'");
    return read_trace(in);
  }
  throw ConfigError("unknown instance '" + family + "'");
}

bool CellResult::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.passed; });
}

bool ExperimentResult::all_passed() const {
  return std::all_of(cells.begin(), cells.end(),
                     [](const CellResult& c) { return c.passed(); });
}

CellResult run_cell(const ExperimentConfig& config, int horizon,
                    std::uint64_t seed) {
  const InstanceTrace trace = build_instance(config, horizon, seed);
  const auto& lp = config.learner_params;
  CellResult cell;
  cell.horizon = trace.horizon;
  cell.seed = seed;
  cell.budget = trace.budget;

  if (config.learner == "full_info") {
    FullInfoOptions options;
    const bool has_lambda = lp.count("lambda") > 0;
    const bool has_v = lp.count("V") > 0;
    if (has_lambda != has_v) {
      throw ConfigError("full_info needs both lambda and V, or neither");
    }
    if (has_lambda) {
      options.params = Theorem2Params{param_double(lp, "lambda", 0.0),
                                      param_double(lp, "V", 0.0)};
    }
    cell.report = run_full_info(trace, options);
  } else {
    BanditOptions options;
    const std::string schedule = param(lp, "schedule", "proof");
    if (schedule == "algorithm") {
      options.schedule = VSchedule::kAlgorithmLine;
    } else if (schedule != "proof") {
      throw ConfigError("bandit schedule must be proof|algorithm");
    }
    options.loss_divisor = param_double(lp, "loss_divisor", 1.0);
    cell.report = run_bandit(trace, seed, options);
  }

  cell.benchmark = best_fixed_feasible(trace);
  cell.regret = regret_alpha(cell.report, cell.benchmark);
  cell.cc = cumulative_consumption(cell.report).net;
  cell.regret_bound = cell.report.metric("regret_bound");
  cell.cc_bound = cell.report.metric("cc_bound");

  if (config.verify) {
    cell.checks.push_back(make_check("regret_bound", cell.regret,
                                     cell.regret_bound));
    for (std::size_t i = 0; i < cell.cc.size(); ++i) {
      // Bandit bounds are stated for raw Q(T), which includes Q0.
      const double q = config.learner == "bandit"
                           ? cumulative_consumption(cell.report).raw[i]
                           : cell.cc[i];
      cell.checks.push_back(
          make_check("cc_bound_" + std::to_string(i), q, cell.cc_bound));
    }
    if (config.learner == "full_info") {
      cell.checks.push_back(make_check(
          "drift", cell.report.metric("max_drift_margin"), 0.0));
      cell.checks.push_back(make_check(
          "surrogate_norm", cell.report.metric("max_surrogate_norm"),
          cell.report.metric("surrogate_norm_bound")));
    } else {
      cell.checks.push_back(make_check(
          "surrogate_magnitude", cell.report.metric("max_surrogate_inf"),
          cell.report.metric("surrogate_magnitude_bound")));
    }
    cell.checks.push_back(make_check(
        "benchmark_feasible",
        -*std::min_element(cell.benchmark.feasibility_slack.begin(),
                           cell.benchmark.feasibility_slack.end()),
        0.0));
  }
  return cell;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<int> horizons = config.horizons;
  std::vector<std::uint64_t> seeds = config.seeds;
  std::sort(horizons.begin(), horizons.end());
  std::sort(seeds.begin(), seeds.end());
  std::vector<std::pair<int, std::uint64_t>> jobs;
  for (int T : horizons) {
    for (auto s : seeds) jobs.emplace_back(T, s);
  }

  namespace fs = std::filesystem;
  std::string out_dir = config.out_dir;
  if (out_dir.empty()) {
    if (const char* env = std::getenv(kOutDirEnv)) out_dir = env;
  }
  if (!out_dir.empty()) fs::create_directories(out_dir);

  ExperimentResult result;
  result.cells.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&]() {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        CellResult cell = run_cell(config, jobs[i].first, jobs[i].second);
        if (!out_dir.empty()) {
          const fs::path path =
              fs::path(out_dir) /
              cell_file_name(config, jobs[i].first, jobs[i].second);
          std::ofstream out(path, std::ios::binary);
          write_run_csv(out, cell);
          if (!out) throw std::runtime_error("failed writing " + path.string());
          cell.csv_path = path.string();
        }
        result.cells[i] = std::move(cell);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = jobs.size();
      }
    }
  };
  unsigned threads = config.threads > 0
                         ? static_cast<unsigned>(config.threads)
                         : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(jobs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  if (!out_dir.empty()) {
    const fs::path path = fs::path(out_dir) / "summary.csv";
    std::ofstream out(path, std::ios::binary);
    write_summary_csv(out, result.cells);
    if (!out) throw std::runtime_error("failed writing " + path.string());
    result.summary_path = path.string();
  }
  return result;
}

void write_run_csv(std::ostream& out, const CellResult& cell) {
  const RunReport& r = cell.report;
  const bool bandit = r.learner == "bandit";
  const Eigen::Index d = r.rows.empty() ? 0 : r.rows.front().action.size();
  const bool full_action = d <= 8;

  out << "t";
  if (full_action) {
    for (Eigen::Index i = 0; i < d; ++i) out << ",x_" << i;
  } else {
    out << ",x_norm,x_0,x_1,x_2,x_3";
  }
  out << ",cost";
  for (int i = 0; i < r.num_resources; ++i) out << ",consumption_" << i;
  for (int i = 0; i < r.num_resources; ++i) out << ",Q_" << i;
  out << (bandit ? ",eta,gamma,arm,est_loss_norm,realized_loss,surrogate_loss"
                 : ",step_size");
  out << '\n';

  for (const auto& row : r.rows) {
    out << row.t;
    if (full_action) {
      for (Eigen::Index i = 0; i < d; ++i) out << ',' << format_double(row.action[i]);
    } else {
      out << ',' << format_double(row.action.norm());
      for (Eigen::Index i = 0; i < 4; ++i) out << ',' << format_double(row.action[i]);
    }
    out << ',' << format_double(row.cost);
    for (double c : row.consumption) out << ',' << format_double(c);
    for (double q : row.Q) out << ',' << format_double(q);
    out << ',' << format_double(row.step_size);
    if (bandit) {
      out << ',' << format_double(row.gamma) << ',' << row.arm << ','
          << format_double(row.est_loss_norm) << ','
          << format_double(row.realized_loss) << ','
          << format_double(row.surrogate_loss);
    }
    out << '\n';
  }

  out << "# terminal\n";
  out << "# learner," << r.learner << '\n';
  out << "# trace_id," << r.trace_id << '\n';
  out << "# orientation,"
      << (r.orientation == Orientation::kConvex ? "convex" : "concave") << '\n';
  out << "# alpha," << format_double(r.alpha) << '\n';
  out << "# T," << cell.horizon << '\n';
  out << "# seed," << cell.seed << '\n';
  out << "# budget," << format_double(cell.budget) << '\n';
  for (std::size_t i = 0; i < r.Q0.size(); ++i) {
    out << "# Q0_" << i << ',' << format_double(r.Q0[i]) << '\n';
  }
  out << "# opt_value," << format_double(cell.benchmark.opt_value) << '\n';
  out << "# benchmark_method," << cell.benchmark.method << '\n';
  out << "# regret," << format_double(cell.regret) << '\n';
  for (const auto& [key, value] : r.terminal) {
    out << "# " << key << ',' << format_double(value) << '\n';
  }
  for (const auto& check : cell.checks) {
    out << "# check_" << check.name << ',' << format_double(check.margin) << ','
        << (check.passed ? "pass" : "fail") << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<CellResult>& cells) {
  const std::size_t k = cells.empty() ? 0 : cells.front().cc.size();
  out << "learner,T,seed,budget,regret,regret_bound";
  for (std::size_t i = 0; i < k; ++i) out << ",cc_" << i;
  out << ",cc_bound,opt_value,benchmark_method";
  if (!cells.empty()) {
    for (const auto& check : cells.front().checks) out << ",pass_" << check.name;
  }
  out << ",pass_all\n";
  for (const auto& c : cells) {
    out << c.report.learner << ',' << c.horizon << ',' << c.seed << ','
        << format_double(c.budget) << ',' << format_double(c.regret) << ','
        << format_double(c.regret_bound);
    for (double v : c.cc) out << ',' << format_double(v);
    out << ',' << format_double(c.cc_bound) << ','
        << format_double(c.benchmark.opt_value) << ',' << c.benchmark.method;
    for (const auto& check : c.checks) out << ',' << (check.passed ? 1 : 0);
    out << ',' << (c.passed() ? 1 : 0) << '\n';
  }
}

std::string ParsedRun::terminal_value(const std::string& key) const {
  for (const auto& [k, v] : terminal) {
    if (k == key) return v;
  }
  throw InvalidInput("run CSV has no terminal entry '" + key + "'");
}

ParsedRun read_run_csv(std::istream& in) {
  ParsedRun parsed;
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("empty run CSV");
  parsed.header = split(line, ',');
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = trim(line.substr(1));
      if (body == "terminal") continue;
      const auto comma = body.find(',');
      if (comma == std::string::npos) continue;
      parsed.terminal.emplace_back(body.substr(0, comma), body.substr(comma + 1));
      continue;
    }
    std::vector<double> row;
    for (const auto& field : split(line, ',')) {
      row.push_back(field == "nan" ? std::nan("") : std::stod(field));
    }
    if (row.size() != parsed.header.size()) {
      throw InvalidInput("run CSV row width differs from the header");
    }
    parsed.rows.push_back(std::move(row));
  }
  return parsed;
}

SlopeEstimate fit_loglog_slope(const std::vector<int>& horizons,
                               const std::vector<std::vector<double>>& samples) {
  if (horizons.size() < 2 || horizons.size() != samples.size()) {
    throw InvalidInput("slope fit needs >= 2 horizons with matching samples");
  }
  SlopeEstimate est;
  const std::size_t n = horizons.size();
  std::vector<double> var_of_mean(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = samples[i];
    if (s.empty()) throw InvalidInput("a horizon has no samples");
    const double mean =
        std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
    double ss = 0.0;
    for (double v : s) ss += (v - mean) * (v - mean);
    var_of_mean[i] =
        s.size() > 1 ? ss / static_cast<double>(s.size() - 1) / s.size() : 0.0;
    est.horizons.push_back(horizons[i]);
    est.means.push_back(mean);
  }
  const double min_mean = *std::min_element(est.means.begin(), est.means.end());
  if (min_mean <= 0.0) {
    est.shifted = true;
    est.shift = 1.0 - min_mean;
  }
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::log(est.horizons[i]);
    y[i] = std::log(est.means[i] + est.shift);
  }
  const double xbar = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double ybar = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - xbar) * (x[i] - xbar);
    sxy += (x[i] - xbar) * (y[i] - ybar);
  }
  if (sxx == 0.0) throw InvalidInput("slope fit needs distinct horizons");
  est.slope = sxy / sxx;
  // Delta method: Var(log m) ~ Var(m) / m^2, propagated through the OLS
  // weights (x_i - xbar) / sxx.
  double var_slope = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double level = est.means[i] + est.shift;
    const double w = (x[i] - xbar) / sxx;
    var_slope += w * w * var_of_mean[i] / (level * level);
  }
  est.half_width = 1.96 * std::sqrt(var_slope);
  return est;
}

SlopeEstimate sweep_scaling(const ExperimentConfig& config) {
  if (config.horizons.size() < 3) {
    throw ConfigError("sweep needs at least 3 horizons");
  }
  if (config.seeds.size() < 10) throw ConfigError("sweep needs at least 10 seeds");
  const ExperimentResult result = run_experiment(config);
  std::vector<int> horizons = config.horizons;
  std::sort(horizons.begin(), horizons.end());
  std::vector<std::vector<double>> samples(horizons.size());
  for (const auto& cell : result.cells) {
    const auto it = std::find(horizons.begin(), horizons.end(), cell.horizon);
    samples[static_cast<std::size_t>(it - horizons.begin())].push_back(cell.regret);
  }
  return fit_loglog_slope(horizons, samples);
}

LowerboundTable lowerbound_experiment(int horizon, double budget) {
  const int phase = static_cast<int>(budget);
  if (!(budget >= 1.0) || phase != budget) {
    throw InvalidInput("lower-bound experiment needs an integer budget >= 1");
  }
  LowerboundTable table;
  table.budget = budget;
  const int phases = horizon / phase;
  for (int tau = 1; tau <= phases; ++tau) {
    const InstanceTrace trace = gen_bwk_lowerbound(horizon, budget, tau);
    table.horizon = trace.horizon;
    const RunReport report = run_full_info(trace);
    const BenchmarkResult bench = best_fixed_feasible(trace);
    LowerboundRow row;
    row.tau = tau;
    row.opt = bench.opt_value;
    row.opt_reference = budget * budget / trace.horizon;
    // Pulling the paying arm every round until the budget is gone collects
    // the phase-1 reward B / T for B rounds.
    row.stopping_opt = budget * budget / trace.horizon;
    row.cc = cumulative_consumption(report).net.front();
    table.s_T = default_additive_term(trace);
    row.kappa = competitive_kappa(row.cc, budget, table.s_T);
    row.kappa_raw = competitive_kappa(row.cc, budget, 0.0);
    table.max_kappa = std::max(table.max_kappa, row.kappa);
    table.max_kappa_raw = std::max(table.max_kappa_raw, row.kappa_raw);
    table.rows.push_back(row);
  }
  table.log_T = std::log(static_cast<double>(table.horizon));
  return table;
}

void write_lowerbound_csv(std::ostream& out, const LowerboundTable& table) {
  out << "tau,opt,opt_reference,stopping_opt,cc,kappa,kappa_raw,log_T\n";
  for (const auto& row : table.rows) {
    out << row.tau << ',' << format_double(row.opt) << ','
        << format_double(row.opt_reference) << ','
        << format_double(row.stopping_opt) << ',' << format_double(row.cc)
        << ',' << format_double(row.kappa) << ','
        << format_double(row.kappa_raw) << ',' << format_double(table.log_T)
        << '\n';
  }
  out << "# T," << table.horizon << '\n';
  out << "# budget," << format_double(table.budget) << '\n';
  out << "# s_T," << format_double(table.s_T) << '\n';
  out << "# max_kappa," << format_double(table.max_kappa) << '\n';
  out << "# max_kappa_raw," << format_double(table.max_kappa_raw) << '\n';
}

}  // namespace cono
