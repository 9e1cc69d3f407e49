#include "cono/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cono/error.hpp"

namespace cono {

namespace {

constexpr double kFeasTol = 1e-9;

// Sum over rounds of the trace: offset + <linear, x> + sum_{i<j} W_ij
// (x_i + x_j - x_i x_j), with linear consumptions <B_i, x>.
struct Aggregate {
  double offset = 0.0;
  Vector linear;
  Matrix W;
  bool has_coverage = false;
  std::vector<Vector> consumption;

  double value(const Vector& x) const {
    double v = offset + linear.dot(x);
    if (has_coverage) {
      const auto d = x.size();
      for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = i + 1; j < d; ++j) {
          v += W(i, j) * (x[i] + x[j] - x[i] * x[j]);
        }
      }
    }
    return v;
  }

  Vector gradient(const Vector& x) const {
    Vector g = linear;
    if (has_coverage) {
      g += W * (Vector::Ones(x.size()) - x);
    }
    return g;
  }

  double max_violation(const Vector& x, double budget) const {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& b : consumption) worst = std::max(worst, b.dot(x) - budget);
    return worst;
  }
};

Aggregate aggregate(const InstanceTrace& trace) {
  const int d = trace.set.dimension();
  Aggregate agg;
  agg.linear = Vector::Zero(d);
  agg.W = Matrix::Zero(d, d);
  agg.consumption.assign(static_cast<std::size_t>(trace.num_resources),
                         Vector::Zero(d));
  for (const auto& record : trace.records) {
    if (const auto* lin = std::get_if<LinearRound>(&record)) {
      agg.offset += lin->cost_offset;
      agg.linear += lin->cost;
      for (std::size_t i = 0; i < lin->consumption.size(); ++i) {
        agg.consumption[i] += lin->consumption[i];
      }
    } else {
      const auto& vc = std::get<VertexCoverRound>(record);
      agg.has_coverage = agg.has_coverage || !vc.edges.empty();
      for (const auto& [i, j] : vc.edges) {
        agg.W(i, j) += 1.0;
        agg.W(j, i) += 1.0;
      }
      agg.consumption[0] += vc.prices;
    }
  }
  return agg;
}

BenchmarkResult finish(const InstanceTrace& trace, const Aggregate& agg,
                       Vector x, std::string method, bool certified) {
  BenchmarkResult out;
  out.trace_id = trace.id();
  out.opt_value = agg.value(x);
  for (const auto& b : agg.consumption) {
    out.feasibility_slack.push_back(trace.budget - b.dot(x));
  }
  out.x_star = std::move(x);
  out.method = std::move(method);
  out.certified = certified;
  return out;
}

// Linear program over the simplex with at most one budget row: the optimum
// sits at a vertex or on an edge where the budget binds.
Vector simplex_lp(const Vector& c, const Vector& b, double budget) {
  const Eigen::Index K = c.size();
  double best = std::numeric_limits<double>::infinity();
  Vector x;
  for (Eigen::Index i = 0; i < K; ++i) {
    if (b[i] <= budget + kFeasTol && c[i] < best) {
      best = c[i];
      x = Vector::Zero(K);
      x[i] = 1.0;
    }
  }
  for (Eigen::Index i = 0; i < K; ++i) {
    for (Eigen::Index j = 0; j < K; ++j) {
      if (!(b[i] < budget && budget < b[j]) || !(c[j] < c[i])) continue;
      const double theta = (budget - b[i]) / (b[j] - b[i]);
      const double v = c[i] + theta * (c[j] - c[i]);
      if (v < best) {
        best = v;
        x = Vector::Zero(K);
        x[i] = 1.0 - theta;
        x[j] = theta;
      }
    }
  }
  if (x.size() == 0) throw InfeasibleError("no distribution meets the budget");
  return x;
}

std::vector<Vector> grid_points(const Vector& lo, const Vector& hi,
                                double resolution) {
  const auto d = lo.size();
  std::vector<int> counts(static_cast<std::size_t>(d));
  std::size_t total = 1;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double span = hi[i] - lo[i];
    counts[static_cast<std::size_t>(i)] =
        span > 0.0 ? 1 + static_cast<int>(std::ceil(span / resolution - 1e-9))
                   : 1;
    total *= static_cast<std::size_t>(counts[static_cast<std::size_t>(i)]);
  }
  std::vector<Vector> points;
  points.reserve(total);
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  for (std::size_t n = 0; n < total; ++n) {
    Vector p(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const int c = counts[static_cast<std::size_t>(i)];
      const double frac =
          c == 1 ? 0.0 : double(idx[static_cast<std::size_t>(i)]) / (c - 1);
      p[i] = lo[i] + frac * (hi[i] - lo[i]);
    }
    points.push_back(std::move(p));
    for (Eigen::Index i = 0; i < d; ++i) {
      auto& k = idx[static_cast<std::size_t>(i)];
      if (++k < counts[static_cast<std::size_t>(i)]) break;
      k = 0;
    }
  }
  return points;
}

BenchmarkResult grid_benchmark(const InstanceTrace& trace,
                               const Aggregate& agg, double resolution) {
  const DecisionSet& set = trace.set;
  if (std::holds_alternative<Simplex>(set.shape())) {
    throw UnsupportedError("grid benchmark needs a box or interval");
  }
  if (set.dimension() > 3) {
    throw UnsupportedError(
        "no exact benchmark for this trace and grid search is limited to "
        "dimension <= 3 (got " + std::to_string(set.dimension()) + ")");
  }
  if (!(resolution > 0.0)) throw InvalidInput("resolution must be > 0");
  const double sign = trace.direction.is_convex() ? 1.0 : -1.0;
  auto objective = [&](const Vector& x) { return sign * agg.value(x); };

  const Vector lo = set.lower_bounds();
  const Vector hi = set.upper_bounds();
  std::vector<std::pair<double, Vector>> candidates;
  for (auto& p : grid_points(lo, hi, resolution)) {
    if (agg.max_violation(p, trace.budget) <= kFeasTol) {
      candidates.emplace_back(objective(p), std::move(p));
    }
  }
  candidates.emplace_back(objective(trace.witness), trace.witness);
  const std::size_t keep =
      std::min<std::size_t>(kPolishStarts, candidates.size());
  std::partial_sort(
      candidates.begin(), candidates.begin() + static_cast<long>(keep),
      candidates.end(),
      [](const auto& a, const auto& b) { return a.first < b.first; });

  double best = candidates.front().first;
  Vector best_x = candidates.front().second;
  if (agg.consumption.size() <= 1) {
    const Vector b = agg.consumption.empty() ? Vector::Zero(lo.size())
                                             : agg.consumption.front();
    const double D = diameter(set);
    for (std::size_t s = 0; s < keep; ++s) {
      Vector x = candidates[s].second;
      for (int it = 0; it < kPolishSteps; ++it) {
        const Vector g = sign * agg.gradient(x);
        const double gn = g.norm();
        if (gn == 0.0) break;
        const double step = 0.5 * D / (gn * std::sqrt(it + 1.0));
        x = project_box_halfspace(x - step * g, lo, hi, b, trace.budget);
        const double v = objective(x);
        if (v < best && agg.max_violation(x, trace.budget) <= kFeasTol) {
          best = v;
          best_x = x;
        }
      }
    }
  }
  return finish(trace, agg, std::move(best_x),
                agg.has_coverage ? "multi_start" : "grid", false);
}

}  // namespace

Vector fractional_knapsack(const Vector& c, const Vector& b, double budget,
                           const Vector& lo, const Vector& hi) {
  const Eigen::Index d = c.size();
  if (b.size() != d || lo.size() != d || hi.size() != d) {
    throw InvalidInput("fractional_knapsack: dimension mismatch");
  }
  // Multiplier 0: every coordinate at its cheaper end, ties broken toward
  // lower consumption.
  Vector x(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    if (c[j] < 0.0 || (c[j] == 0.0 && b[j] < 0.0)) {
      x[j] = hi[j];
    } else {
      x[j] = lo[j];
    }
  }
  double used = b.dot(x);
  if (used <= budget) return x;

  std::vector<Eigen::Index> order;
  for (Eigen::Index j = 0; j < d; ++j) {
    if (b[j] != 0.0 && -c[j] / b[j] > 0.0) order.push_back(j);
  }
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) {
    return -c[i] / b[i] < -c[j] / b[j];
  });
  for (const auto j : order) {
    const double other = used - b[j] * x[j];
    const double flipped = b[j] > 0.0 ? lo[j] : hi[j];
    if (other + b[j] * flipped <= budget) {
      x[j] = std::clamp((budget - other) / b[j], lo[j], hi[j]);
      return x;
    }
    x[j] = flipped;
    used = other + b[j] * flipped;
  }
  throw InfeasibleError("no point of the box meets the budget");
}

Vector project_box_halfspace(const Vector& point, const Vector& lo,
                             const Vector& hi, const Vector& b,
                             double budget) {
  auto clamp_at = [&](double mu) -> Vector {
    return (point - mu * b).cwiseMax(lo).cwiseMin(hi);
  };
  Vector x = clamp_at(0.0);
  if (b.dot(x) <= budget) return x;
  // b . clamp(point - mu b) is nonincreasing in mu; bracket then bisect.
  double lo_mu = 0.0;
  double hi_mu = 1.0;
  int doublings = 0;
  while (b.dot(clamp_at(hi_mu)) > budget) {
    lo_mu = hi_mu;
    hi_mu *= 2.0;
    if (++doublings > 200) {
      throw InfeasibleError("box and budget half-space do not intersect");
    }
  }
  for (int it = 0; it < 200 && hi_mu - lo_mu > 1e-15 * hi_mu; ++it) {
    const double mid = 0.5 * (lo_mu + hi_mu);
    if (b.dot(clamp_at(mid)) > budget) {
      lo_mu = mid;
    } else {
      hi_mu = mid;
    }
  }
  return clamp_at(hi_mu);
}

BenchmarkResult best_fixed_feasible(const InstanceTrace& trace,
                                    double resolution, BenchmarkMethod method) {
  const Aggregate agg = aggregate(trace);
  if (agg.max_violation(trace.witness, trace.budget) > kFeasTol) {
    throw InfeasibleError("trace witness violates the budget");
  }
  if (method == BenchmarkMethod::kGrid || agg.has_coverage) {
    return grid_benchmark(trace, agg, resolution);
  }
  const double sign = trace.direction.is_convex() ? 1.0 : -1.0;
  const Vector c = sign * agg.linear;
  const int d = trace.set.dimension();
  const std::size_t k = agg.consumption.size();

  if (std::holds_alternative<Simplex>(trace.set.shape())) {
    if (k > 1) {
      throw UnsupportedError("simplex benchmark supports one resource");
    }
    const Vector b = k == 0 ? Vector::Zero(d) : agg.consumption.front();
    return finish(trace, agg, simplex_lp(c, b, trace.budget), "closed_form",
                  true);
  }
  const Vector lo = trace.set.lower_bounds();
  const Vector hi = trace.set.upper_bounds();
  if (k <= 1) {
    const Vector b = k == 0 ? Vector::Zero(d) : agg.consumption.front();
    return finish(trace, agg,
                  fractional_knapsack(c, b, trace.budget, lo, hi),
                  "closed_form", true);
  }
  // Several resources: the unconstrained minimizer is optimal whenever it
  // already meets every budget.
  const Vector free =
      fractional_knapsack(c, Vector::Zero(d),
                          std::numeric_limits<double>::infinity(), lo, hi);
  if (agg.max_violation(free, trace.budget) <= kFeasTol) {
    return finish(trace, agg, free, "closed_form", true);
  }
  return grid_benchmark(trace, agg, resolution);
}

double regret_alpha(const RunReport& report, const BenchmarkResult& benchmark) {
  if (report.trace_id != benchmark.trace_id) {
    throw InvalidInput("report (" + report.trace_id +
                       ") and benchmark (" + benchmark.trace_id +
                       ") come from different traces");
  }
  const double total = report.total_cost();
  if (report.orientation == Orientation::kConvex) {
    return total - report.alpha * benchmark.opt_value;
  }
  return report.alpha * benchmark.opt_value - total;
}

ConsumptionSummary cumulative_consumption(const RunReport& report) {
  ConsumptionSummary out;
  out.raw = report.final_Q();
  out.net = out.raw;
  for (std::size_t i = 0; i < out.net.size() && i < report.Q0.size(); ++i) {
    out.net[i] -= report.Q0[i];
  }
  return out;
}

double competitive_kappa(double cc, double budget, double s_T) {
  if (!(budget > 0.0)) throw InvalidInput("competitive_kappa needs B_T > 0");
  return std::max(0.0, (cc - s_T) / budget);
}

double theorem2_log_factor(double F, double G, double D, int T) {
  return std::log(2.0 * (1.0 + F * T / (G * D) + std::sqrt(2.0 * T)));
}

double default_additive_term(const InstanceTrace& trace) {
  const double D = diameter(trace.set);
  if (!(trace.G * D > 0.0)) return 0.0;
  const int T = trace.horizon;
  return 2.0 * trace.alpha() * trace.G * D * std::sqrt(2.0 * T) *
         theorem2_log_factor(trace.F, trace.G, D, T);
}

}  // namespace cono
