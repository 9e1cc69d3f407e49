#include <gtest/gtest.h>

#include <cmath>

#include "cono/error.hpp"
#include "cono/full_info.hpp"

namespace cono {
namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// f_t(x) = a_t (1 - x), g_t(x) = b_t x on [0, 1] with budget 1.
InstanceTrace three_round_trace() {
  const double a[] = {0.8, 0.3, 0.6};
  const double b[] = {0.5, 0.9, 0.2};
  std::vector<RoundRecord> records;
  for (int t = 0; t < 3; ++t) {
    LinearRound r;
    r.cost_offset = a[t];
    r.cost = vec({-a[t]});
    r.consumption = {vec({b[t]})};
    records.emplace_back(r);
  }
  return make_trace("hand", DecisionSet::interval(0, 1), Direction::convex(1.0),
                    records, 1.0, vec({0.0}), 0);
}

TEST(Lyapunov, ExponentialAndPowerLaw) {
  const auto e = LyapunovFamily::exponential(0.5);
  EXPECT_DOUBLE_EQ(e.value(2.0), std::exp(1.0));
  EXPECT_DOUBLE_EQ(e.derivative(2.0), 0.5 * std::exp(1.0));
  const auto p = LyapunovFamily::power_law(3.0);
  EXPECT_DOUBLE_EQ(p.value(2.0), 8.0);
  EXPECT_DOUBLE_EQ(p.derivative(2.0), 12.0);
  EXPECT_THROW(LyapunovFamily::exponential(0.0), InvalidInput);
}

TEST(Theorem2, ScheduleExamples) {
  // alpha = G = D = 1, T = 2: alpha G D sqrt(2T) = 2.
  auto p = theorem2_params(1.0, 1.0, 1.0, 2, 0.0);
  EXPECT_DOUBLE_EQ(p.lambda, 0.25);
  EXPECT_DOUBLE_EQ(p.V, 1.0);
  p = theorem2_params(1.0, 1.0, 1.0, 2, 2.0);
  EXPECT_DOUBLE_EQ(p.lambda, 0.125);
  EXPECT_THROW(theorem2_params(1.0, 0.0, 1.0, 2, 1.0), InvalidInput);
  EXPECT_THROW(theorem2_params(1.0, 1.0, 1.0, 0, 1.0), InvalidInput);
}

TEST(Theorem2, BoundFormulas) {
  EXPECT_DOUBLE_EQ(theorem2_regret_bound(2.0, 1.0, 1.0, 8), 2.0 * 4.0 + 1.0);
  EXPECT_DOUBLE_EQ(theorem2_consumption_bound(0.5, 1.0, 1.0, 1.0, 2),
                   2.0 * std::log(2.0 * (1.0 + 2.0 + 2.0)));
}

TEST(Surrogate, WeightedSum) {
  const std::vector<Vector> Hg = {vec({1, 1})};
  const std::vector<double> phi = {2.0};
  EXPECT_TRUE(surrogate_subgrad(vec({1, 1}), Hg, 2.0, phi).isApprox(vec({4, 4})));
  const std::vector<double> neg = {-1.0};
  EXPECT_THROW(surrogate_subgrad(vec({1, 1}), Hg, 2.0, neg), InvalidInput);
  const std::vector<Vector> wrong = {vec({1})};
  EXPECT_THROW(surrogate_subgrad(vec({1, 1}), wrong, 2.0, phi), InvalidInput);
}

TEST(Surrogate, LinearizationOfTheSurrogateObjective) {
  // V f + phi' g is convex when f, g are, so its subgradient H satisfies the
  // first-order inequality exactly for linear pieces.
  Rng rng(3);
  for (int s = 0; s < 200; ++s) {
    const Vector a = vec({rng.uniform(), rng.uniform()});
    const Vector b = vec({rng.uniform(), rng.uniform()});
    const double V = rng.uniform(0.1, 3.0);
    const double w = rng.uniform(0.0, 5.0);
    const std::vector<Vector> Hg = {b};
    const std::vector<double> phi = {w};
    const Vector H = surrogate_subgrad(a, Hg, V, phi);
    const Vector x = vec({rng.uniform(), rng.uniform()});
    const Vector u = vec({rng.uniform(), rng.uniform()});
    const double lhs = V * a.dot(x) + w * b.dot(x) - V * a.dot(u) - w * b.dot(u);
    EXPECT_NEAR(lhs, H.dot(x - u), 1e-12);
  }
}

TEST(AdaGrad, StepSizeAndFirstStep) {
  EXPECT_EQ(adagrad_step_size(0.0, 1.0), 0.0);
  FullInfoState s;
  s.action = vec({0.5, 0.5});
  adagrad_step(s, vec({2.0, 0.0}), DecisionSet::unit_box(2), 1.0);
  EXPECT_DOUBLE_EQ(s.last_step, std::sqrt(2.0) / 4.0);
  EXPECT_TRUE(s.action.isApprox(vec({0.0, 0.5})));
  EXPECT_DOUBLE_EQ(s.grad_sq_sum, 4.0);
}

TEST(RunFullInfo, MatchesHandSimulation) {
  // Values from tests/oracles/derive_constants.py.
  const auto trace = three_round_trace();
  EXPECT_DOUBLE_EQ(trace.G, 0.9);
  const auto report = run_full_info(trace);
  EXPECT_NEAR(report.metric("lambda"), 0.1560285969565881, 1e-15);
  EXPECT_NEAR(report.metric("V"), 1.1111111111111112, 1e-15);
  const double x[] = {0.5, 1.0, 1.0};
  const double cost[] = {0.4, 0.0, 0.0};
  const double use[] = {0.25, 0.9, 0.2};
  const double Q[] = {0.25, 1.15, 1.35};
  const double eta[] = {0.8753798786620564, 0.8576055249298605,
                        0.6821889766418465};
  ASSERT_EQ(report.rows.size(), 3u);
  for (int t = 0; t < 3; ++t) {
    const auto& row = report.rows[static_cast<std::size_t>(t)];
    EXPECT_EQ(row.t, t + 1);
    EXPECT_NEAR(row.action[0], x[t], 1e-12);
    EXPECT_NEAR(row.cost, cost[t], 1e-12);
    EXPECT_NEAR(row.consumption[0], use[t], 1e-12);
    EXPECT_NEAR(row.Q[0], Q[t], 1e-12);
    EXPECT_NEAR(row.step_size, eta[t], 1e-12);
  }
  EXPECT_NEAR(report.metric("cc_0"), 1.35, 1e-12);
  EXPECT_NEAR(report.metric("total_cost"), 0.4, 1e-12);
}

TEST(RunFullInfo, DriftAndSurrogateNormInvariants) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto trace = gen_linear(3, 400, 20.0, 2, seed, LinearShape::kDecreasing);
    const auto report = run_full_info(trace);
    EXPECT_LE(report.metric("max_drift_margin"), 1e-12);
    EXPECT_LE(report.metric("max_surrogate_norm"),
              report.metric("surrogate_norm_bound") * (1 + 1e-12));
    for (const auto& row : report.rows) EXPECT_TRUE(trace.set.contains(row.action));
    const auto final_q = report.final_Q();
    for (int i = 0; i < 2; ++i) {
      EXPECT_LE(final_q[static_cast<std::size_t>(i)], report.metric("cc_bound"));
    }
  }
}

TEST(RunFullInfo, ConcaveTraceAscends) {
  // Reward a x on [0, 1] with free consumption: the learner should move to 1.
  std::vector<RoundRecord> records;
  for (int t = 0; t < 200; ++t) {
    LinearRound r;
    r.cost = vec({1.0});
    r.consumption = {vec({0.0})};
    records.emplace_back(r);
  }
  const auto trace = make_trace("reward", DecisionSet::interval(0, 1),
                                Direction::concave(1.0), records, 1.0, vec({0.0}), 0);
  const auto report = run_full_info(trace);
  EXPECT_NEAR(report.rows.back().action[0], 1.0, 1e-12);
}

TEST(RunFullInfo, ExplicitParamsValidated) {
  FullInfoOptions opt;
  opt.params = Theorem2Params{.lambda = 0.0, .V = 1.0};
  EXPECT_THROW(run_full_info(three_round_trace(), opt), InvalidInput);
  opt.params = Theorem2Params{.lambda = 0.5, .V = 2.0};
  const auto report = run_full_info(three_round_trace(), opt);
  EXPECT_TRUE(std::isnan(report.metric("regret_bound")));
}

TEST(RunFullInfo, ExponentOverflowIsReported) {
  FullInfoOptions opt;
  opt.params = Theorem2Params{.lambda = 5000.0, .V = 1.0};
  EXPECT_THROW(run_full_info(three_round_trace(), opt), NumericError);
}

TEST(RunFullInfo, Deterministic) {
  const auto trace = gen_linear(2, 300, 17.0, 1, 4);
  const auto a = run_full_info(trace);
  const auto b = run_full_info(trace);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t t = 0; t < a.rows.size(); ++t) {
    EXPECT_EQ(a.rows[t].action, b.rows[t].action);
    EXPECT_EQ(a.rows[t].Q, b.rows[t].Q);
  }
}

}  // namespace
}  // namespace cono
