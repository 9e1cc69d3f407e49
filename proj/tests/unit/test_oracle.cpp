#include <gtest/gtest.h>

#include <cmath>

#include "cono/error.hpp"
#include "cono/full_info.hpp"
#include "cono/oracle.hpp"

namespace cono {
namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// Vertices of box and {b.x <= budget}: feasible corners plus the points
// where the hyperplane crosses a box edge. The LP optimum is among them.
double lp_by_vertices(const Vector& c, const Vector& b, double budget,
                      const Vector& lo, const Vector& hi) {
  const int d = static_cast<int>(c.size());
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](const Vector& x) {
    if (b.dot(x) <= budget + 1e-12) best = std::min(best, c.dot(x));
  };
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    Vector x(d);
    for (int i = 0; i < d; ++i) x[i] = (mask >> i) & 1u ? hi[i] : lo[i];
    consider(x);
    for (int free = 0; free < d; ++free) {
      if (b[free] == 0.0) continue;
      Vector y = x;
      y[free] = 0.0;
      y[free] = (budget - b.dot(y)) / b[free];
      if (y[free] >= lo[free] && y[free] <= hi[free]) consider(y);
    }
  }
  return best;
}

TEST(Knapsack, MatchesVertexEnumeration) {
  Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 1 + trial % 4;
    Vector c(d), b(d), lo(d), hi(d);
    for (int i = 0; i < d; ++i) {
      c[i] = rng.uniform(-1, 1);
      b[i] = trial % 5 == 0 && i == 0 ? 0.0 : rng.uniform(0, 1);
      lo[i] = rng.uniform(0, 0.3);
      hi[i] = lo[i] + rng.uniform(0.1, 1.0);
    }
    const double budget = b.dot(lo) + rng.uniform(0, 1) * (b.dot(hi) - b.dot(lo));
    const Vector x = fractional_knapsack(c, b, budget, lo, hi);
    EXPECT_LE(b.dot(x), budget + 1e-9);
    EXPECT_TRUE((x.array() >= lo.array() - 1e-12).all());
    EXPECT_TRUE((x.array() <= hi.array() + 1e-12).all());
    EXPECT_NEAR(c.dot(x), lp_by_vertices(c, b, budget, lo, hi), 1e-9);
  }
}

TEST(Knapsack, InfeasibleBoxThrows) {
  EXPECT_THROW(fractional_knapsack(vec({1}), vec({1}), 0.5, vec({1}), vec({2})),
               InfeasibleError);
}

TEST(BoxHalfspaceProjection, FeasibleAndClosest) {
  Rng rng(4);
  const Vector lo = Vector::Zero(3);
  const Vector hi = Vector::Ones(3);
  const Vector b = vec({0.5, 1.0, 0.2});
  const double budget = 0.6;
  for (int trial = 0; trial < 50; ++trial) {
    const Vector p = vec({rng.uniform(-1, 2), rng.uniform(-1, 2), rng.uniform(-1, 2)});
    const Vector x = project_box_halfspace(p, lo, hi, b, budget);
    EXPECT_LE(b.dot(x), budget + 1e-9);
    EXPECT_TRUE((x.array() >= -1e-12).all() && (x.array() <= 1 + 1e-12).all());
    for (int s = 0; s < 200; ++s) {
      const Vector y = vec({rng.uniform(), rng.uniform(), rng.uniform()});
      if (b.dot(y) <= budget) EXPECT_LE((x - p).norm(), (y - p).norm() + 1e-9);
    }
  }
}

TEST(Benchmark, GridAgreesWithExactOnTwoDimensions) {
  const auto trace = gen_linear(2, 200, 40.0, 1, 3, LinearShape::kDecreasing);
  const auto exact = best_fixed_feasible(trace);
  const auto grid = best_fixed_feasible(trace, kDefaultGridResolution, BenchmarkMethod::kGrid);
  EXPECT_EQ(exact.method, "closed_form");
  EXPECT_TRUE(exact.certified);
  EXPECT_LE(exact.opt_value, grid.opt_value + 1e-9);
  EXPECT_NEAR(grid.opt_value, exact.opt_value, 1e-2 * std::abs(exact.opt_value));
  EXPECT_GE(exact.feasibility_slack[0], -1e-9);
}

TEST(Benchmark, SimplexPicksCheapestAffordableMix) {
  // Arm 0 costs 1 and is free; arm 1 costs 0 and uses 1 per round.
  std::vector<RoundRecord> records;
  for (int t = 0; t < 4; ++t) {
    LinearRound r;
    r.cost = vec({1.0, 0.0});
    r.consumption = {vec({0.0, 1.0})};
    records.emplace_back(r);
  }
  const auto trace = make_trace("mix", DecisionSet::simplex(2), Direction::convex(1.0),
                                records, 1.0, vec({1.0, 0.0}), 0);
  const auto res = best_fixed_feasible(trace);
  EXPECT_NEAR(res.x_star[1], 0.25, 1e-12);
  EXPECT_NEAR(res.opt_value, 3.0, 1e-12);
}

TEST(Benchmark, VertexCoverToy) {
  // One edge, unit prices, two rounds, budget 1: x0 + x1 <= 1/2 and the
  // best coverage puts all mass on one vertex.
  VertexCoverRound r;
  r.vertices = 2;
  r.edges = {{0, 1}};
  r.prices = vec({1.0, 1.0});
  const auto trace = make_trace("vc", DecisionSet::unit_box(2), Direction::concave(0.5),
                                {r, r}, 1.0, Vector::Zero(2), 0);
  const auto res = best_fixed_feasible(trace);
  EXPECT_NEAR(res.opt_value, 1.0, 1e-6);
  EXPECT_NEAR(res.x_star.sum(), 0.5, 1e-6);
  EXPECT_NEAR(res.x_star[0] * res.x_star[1], 0.0, 1e-6);
  EXPECT_FALSE(res.certified);
}

TEST(Benchmark, LowerBoundFamilyOptimum) {
  // Fixed action x earns x * B^2 tau (tau + 1) / (2 T) and uses x T <= B.
  const int T = 100;
  const double B = 10.0;
  for (int tau : {1, 4, 10}) {
    const auto res = best_fixed_feasible(gen_bwk_lowerbound(T, B, tau));
    EXPECT_NEAR(res.opt_value, B * B * B * tau * (tau + 1) / (2.0 * T * T), 1e-12);
    EXPECT_NEAR(res.x_star[0], B / T, 1e-12);
  }
}

TEST(Regret, OrientationAndTraceMismatch) {
  const auto trace = gen_linear(2, 50, 7.0, 1, 1, LinearShape::kDecreasing);
  const auto report = run_full_info(trace);
  const auto bench = best_fixed_feasible(trace);
  EXPECT_NEAR(regret_alpha(report, bench), report.total_cost() - bench.opt_value, 1e-12);
  const auto other = best_fixed_feasible(gen_linear(2, 50, 7.0, 1, 2));
  EXPECT_THROW(regret_alpha(report, other), InvalidInput);

  const auto vc = gen_vertex_cover(3, 20, 0.7, {0.0, 1.0}, 3.0, 2);
  const auto vc_report = run_full_info(vc);
  const auto vc_bench = best_fixed_feasible(vc);
  EXPECT_NEAR(regret_alpha(vc_report, vc_bench),
              0.5 * vc_bench.opt_value - vc_report.total_cost(), 1e-12);
}

TEST(Consumption, NetSubtractsInitialCounters) {
  RunReport r;
  r.Q0 = {2.0};
  RoundRow row;
  row.Q = {5.0};
  r.rows.push_back(row);
  const auto s = cumulative_consumption(r);
  EXPECT_DOUBLE_EQ(s.raw[0], 5.0);
  EXPECT_DOUBLE_EQ(s.net[0], 3.0);
}

TEST(Kappa, Examples) {
  EXPECT_DOUBLE_EQ(competitive_kappa(10.0, 2.0, 4.0), 3.0);
  EXPECT_DOUBLE_EQ(competitive_kappa(1.0, 2.0, 4.0), 0.0);
  EXPECT_THROW(competitive_kappa(1.0, 0.0, 0.0), InvalidInput);
  EXPECT_DOUBLE_EQ(theorem2_log_factor(1.0, 1.0, 1.0, 2), std::log(2.0 * 5.0));
}

}  // namespace
}  // namespace cono
