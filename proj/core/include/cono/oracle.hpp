#pragma once

#include <string>
#include <vector>

#include "cono/instances.hpp"
#include "cono/report.hpp"

namespace cono {

struct BenchmarkResult {
  std::string trace_id;
  Vector x_star;
  /// Sum of f_t(x_star), i.e. total reward for reward traces.
  double opt_value = 0.0;
  /// B_T - sum_t g_{t,i}(x_star) per resource.
  std::vector<double> feasibility_slack;
  /// "closed_form", "grid" or "multi_start".
  std::string method;
  /// False when the value comes from a heuristic search.
  bool certified = true;
};

enum class BenchmarkMethod { kAuto, kGrid };

inline constexpr double kDefaultGridResolution = 1.0 / 200.0;
inline constexpr int kPolishSteps = 500;
inline constexpr int kPolishStarts = 10;

/// Best fixed action meeting every long-term budget. Linear traces with at
/// most one resource (box, interval or simplex) are solved exactly; other
/// traces of dimension <= 3 on a box use grid search plus projected-gradient
/// polish. Throws InfeasibleError or UnsupportedError.
BenchmarkResult best_fixed_feasible(
    const InstanceTrace& trace, double resolution = kDefaultGridResolution,
    BenchmarkMethod method = BenchmarkMethod::kAuto);

/// Minimizes c.x over the box [lo, hi] subject to b.x <= budget by sweeping
/// the Lagrange multiplier over the sorted breakpoints -c_j / b_j.
Vector fractional_knapsack(const Vector& c, const Vector& b, double budget,
                           const Vector& lo, const Vector& hi);

/// Euclidean projection onto box [lo, hi] intersected with {b.x <= budget}.
Vector project_box_halfspace(const Vector& point, const Vector& lo,
                             const Vector& hi, const Vector& b, double budget);

/// Cost orientation: total cost - alpha OPT. Reward orientation:
/// alpha OPT - total reward.
double regret_alpha(const RunReport& report, const BenchmarkResult& benchmark);

struct ConsumptionSummary {
  /// Q(T) - Q(0) per resource.
  std::vector<double> net;
  /// Q(T) per resource.
  std::vector<double> raw;
};
ConsumptionSummary cumulative_consumption(const RunReport& report);

/// (CC - s_T) / B_T, floored at zero.
double competitive_kappa(double cc, double budget, double s_T);

/// ln(2 (1 + F T / (G D) + sqrt(2T))).
double theorem2_log_factor(double F, double G, double D, int T);
/// Additive term 2 alpha G D sqrt(2T) ln(2 (1 + F T / (G D) + sqrt(2T))).
double default_additive_term(const InstanceTrace& trace);

}  // namespace cono
