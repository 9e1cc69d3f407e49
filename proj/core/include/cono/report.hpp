#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "cono/approx_convex.hpp"
#include "cono/geometry.hpp"

namespace cono {

inline constexpr double kNotApplicable =
    std::numeric_limits<double>::quiet_NaN();

struct RoundRow {
  int t = 0;
  Vector action;
  /// f_t(x_t) for cost traces, the reward earned for reward traces. Bandit
  /// rows hold the expected loss <l_t, p'_t> of the sampling distribution.
  double cost = 0.0;
  std::vector<double> consumption;
  std::vector<double> Q;
  /// AdaGrad eta_t (full information) or the MAB learning rate eta_t.
  double step_size = 0.0;

  // Bandit-only columns; NaN / -1 elsewhere.
  double gamma = kNotApplicable;
  int arm = -1;
  double est_loss_norm = kNotApplicable;
  double realized_loss = kNotApplicable;
  double surrogate_loss = kNotApplicable;
};

struct RunReport {
  std::string learner;
  std::string trace_id;
  Orientation orientation = Orientation::kConvex;
  double alpha = 1.0;
  int num_resources = 0;
  /// Initial consumption counters (0 for full information, ln T for bandits).
  std::vector<double> Q0;
  std::vector<RoundRow> rows;
  /// Ordered terminal metrics; order is preserved in the CSV.
  std::vector<std::pair<std::string, double>> terminal;

  int horizon() const { return static_cast<int>(rows.size()); }
  double total_cost() const;
  std::vector<double> final_Q() const;

  bool has_metric(const std::string& name) const;
  /// Throws InvalidInput if absent.
  double metric(const std::string& name) const;
  /// Overwrites an existing entry or appends a new one.
  void set_metric(const std::string& name, double value);
};

}  // namespace cono
