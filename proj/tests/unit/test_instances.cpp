#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "cono/error.hpp"
#include "cono/instances.hpp"

namespace cono {
namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

VertexCoverRound triangle() {
  VertexCoverRound r;
  r.vertices = 3;
  r.edges = {{0, 1}, {1, 2}, {0, 2}};
  r.prices = vec({1, 2, 3});
  return r;
}

TEST(VertexCover, SingleEdgeValues) {
  VertexCoverRound r;
  r.vertices = 2;
  r.edges = {{0, 1}};
  r.prices = vec({1, 1});
  EXPECT_DOUBLE_EQ(vertex_cover_reward(r, vec({1, 0})), 1.0);
  EXPECT_DOUBLE_EQ(vertex_cover_reward(r, vec({0.5, 0.5})), 0.75);
  EXPECT_DOUBLE_EQ(vertex_cover_reward(r, vec({0, 0})), 0.0);
}

TEST(VertexCover, TriangleSupergradientIsHalfDegree) {
  const auto data = make_round_data(triangle());
  EXPECT_TRUE(data.cost.subgrad(vec({0.2, 0.4, 0.9})).isApprox(vec({1, 1, 1})));
  EXPECT_DOUBLE_EQ(data.cost.norm_bound, std::sqrt(3.0));
  ASSERT_EQ(data.consumptions.size(), 1u);
  EXPECT_DOUBLE_EQ(data.consumptions[0].eval(vec({1, 1, 1})), 6.0);
}

TEST(VertexCover, HalfApproximateLinearizationHolds) {
  // f(x) >= f(u)/2 + <deg/2, x - u> on the box, the concave alpha = 1/2 form.
  const auto data = make_round_data(triangle());
  const auto report = check_linearization(data.cost, Direction::concave(0.5),
                                          DecisionSet::unit_box(3), 20000, 3);
  EXPECT_TRUE(report.passed()) << report.worst_violation;
  // alpha = 1 is not enough for the half-degree supergradient.
  EXPECT_FALSE(check_linearization(data.cost, Direction::concave(1.0),
                                   DecisionSet::unit_box(3), 20000, 3)
                   .passed());
}

TEST(VertexCover, ChainBoundsPerEdge) {
  // For each edge: (x_i + x_j) / 2 <= x_i + x_j - x_i x_j <= x_i + x_j.
  Rng rng(4);
  for (int s = 0; s < 10000; ++s) {
    const double a = rng.uniform();
    const double b = rng.uniform();
    const double r = a + b - a * b;
    EXPECT_LE(0.5 * (a + b), r + 1e-15);
    EXPECT_LE(r, a + b + 1e-15);
  }
}

TEST(VertexCover, GeneratorConstants) {
  const auto trace = gen_vertex_cover(6, 50, 0.5, {0.0, 1.0}, 5.0, 3);
  EXPECT_EQ(trace.horizon, 50);
  EXPECT_EQ(trace.num_resources, 1);
  EXPECT_FALSE(trace.direction.is_convex());
  EXPECT_DOUBLE_EQ(trace.alpha(), 0.5);
  double max_edges = 0.0;
  double max_norm = 0.0;
  for (const auto& rec : trace.records) {
    const auto& vc = std::get<VertexCoverRound>(rec);
    max_edges = std::max(max_edges, double(vc.edges.size()));
    max_norm = std::max({max_norm, 0.5 * vertex_cover_degrees(vc).norm(),
                         vc.prices.norm()});
  }
  EXPECT_DOUBLE_EQ(trace.F, max_edges);
  EXPECT_DOUBLE_EQ(trace.G, max_norm / 0.5);
}

TEST(VertexCover, RejectsBadEdges) {
  auto r = triangle();
  r.edges.emplace_back(1, 1);
  EXPECT_THROW(make_trace("vc", DecisionSet::unit_box(3), Direction::concave(0.5),
                          {r}, 1.0, Vector::Zero(3), 0),
               InvalidInput);
}

TEST(MakeTrace, WitnessOverBudgetIsInfeasible) {
  LinearRound r;
  r.cost = vec({1.0});
  r.consumption = {vec({1.0})};
  EXPECT_THROW(make_trace("x", DecisionSet::interval(0, 1), Direction::convex(1.0),
                          {r, r}, 1.5, vec({1.0}), 0),
               InfeasibleError);
  EXPECT_NO_THROW(make_trace("x", DecisionSet::interval(0, 1), Direction::convex(1.0),
                             {r, r}, 2.0, vec({1.0}), 0));
}

TEST(MakeTrace, RejectsNegativeCost) {
  LinearRound r;
  r.cost = vec({-1.0});
  EXPECT_THROW(make_trace("x", DecisionSet::interval(0, 1), Direction::convex(1.0),
                          {r}, 1.0, vec({0.0}), 0),
               InvalidInput);
}

TEST(Linear, DecreasingShapeIsNonnegativeAndFallsWithX) {
  const auto trace = gen_linear(3, 20, 4.0, 1, 9, LinearShape::kDecreasing);
  EXPECT_EQ(trace.family, "linear_decreasing");
  for (const auto& round : trace.rounds) {
    EXPECT_GE(round.cost.eval(Vector::Ones(3)), -1e-15);
    EXPECT_GE(round.cost.eval(Vector::Zero(3)), round.cost.eval(Vector::Ones(3)));
  }
}

TEST(Linear, SameSeedSameTrace) {
  EXPECT_EQ(gen_linear(2, 100, 10, 2, 5).id(), gen_linear(2, 100, 10, 2, 5).id());
  EXPECT_NE(gen_linear(2, 100, 10, 2, 5).id(), gen_linear(2, 100, 10, 2, 6).id());
}

TEST(LowerBound, PhaseStructure) {
  const auto trace = gen_bwk_lowerbound(105, 10.0, 3);
  EXPECT_EQ(trace.horizon, 100);
  EXPECT_EQ(trace.meta("phases"), "10");
  EXPECT_EQ(trace.meta("requested_horizon"), "105");
  const auto& first = std::get<LinearRound>(trace.records[0]);
  const auto& third = std::get<LinearRound>(trace.records[25]);
  const auto& late = std::get<LinearRound>(trace.records[35]);
  EXPECT_DOUBLE_EQ(first.cost[0], 10.0 / 100.0);
  EXPECT_DOUBLE_EQ(third.cost[0], 3 * 10.0 / 100.0);
  EXPECT_DOUBLE_EQ(late.cost[0], 0.0);
  EXPECT_THROW(gen_bwk_lowerbound(100, 2.5, 1), InvalidInput);
  EXPECT_THROW(gen_bwk_lowerbound(100, 10.0, 11), InvalidInput);
}

TEST(StochasticBandit, ValuesInUnitRange) {
  const auto trace = gen_stochastic_bandit(4, 200, 10.0, 1);
  for (const auto& rec : trace.records) {
    const auto& lin = std::get<LinearRound>(rec);
    EXPECT_GE(lin.cost.minCoeff(), 0.0);
    EXPECT_LE(lin.cost.maxCoeff(), 1.0);
    EXPECT_EQ(lin.consumption[0][0], 0.0);
    EXPECT_LE(lin.consumption[0].maxCoeff(), 1.0);
  }
}

TEST(OperatorNorm, MatchesJacobiSvd) {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 3 + trial;
    const int n = 2 + trial % 4;
    Matrix phi(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) phi(i, j) = rng.standard_normal();
    const double reference =
        Eigen::JacobiSVD<Matrix>(phi).singularValues()[0];
    EXPECT_NEAR(operator_norm(phi), reference, 1e-8 * reference);
  }
}

TEST(OperatorNorm, ZeroMatrixRejected) {
  EXPECT_THROW(operator_norm(Matrix::Zero(2, 2)), InvalidInput);
}

TEST(PhaseRetrieval, WitnessClosedForms) {
  const auto pr = gen_phase_retrieval(20, 4, 0.7, DecisionSet::unit_box(4), 8);
  const double g = pr.gamma();
  EXPECT_NEAR(pr.witness(Vector::Zero(4)),
              g * pr.measurements().squaredNorm() / (2 * (1 + g)), 1e-12);
  // Noise-free measurements: f(x0) is the regularizer alone.
  EXPECT_NEAR(pr.value(pr.planted()), 0.5 * 0.7 * pr.planted().squaredNorm(), 1e-12);
}

TEST(PhaseRetrieval, WitnessFormsAgree) {
  const auto pr = gen_phase_retrieval(15, 3, 2.0, DecisionSet::box(-Vector::Ones(3), Vector::Ones(3)), 2);
  Rng rng(3);
  for (int s = 0; s < 2000; ++s) {
    const Vector x = pr.set().sample(rng);
    const double a = pr.witness(x);
    EXPECT_NEAR(a, pr.witness_by_definition(x), 1e-9 * std::max(1.0, std::abs(a)));
  }
}

class PhaseRetrievalSandwich : public ::testing::TestWithParam<double> {};

TEST_P(PhaseRetrievalSandwich, WitnessSandwichAndConvexity) {
  const auto pr = gen_phase_retrieval_for_gamma(
      25, 4, GetParam(), DecisionSet::box(-Vector::Ones(4), Vector::Ones(4)), 17);
  EXPECT_NEAR(pr.gamma(), GetParam(), 1e-12 * GetParam());
  const auto report = check_sandwich(pr.f_fn(), pr.g_fn(), pr.g_subgrad_fn(),
                                     pr.alpha(), pr.set(), 20000, 5);
  EXPECT_TRUE(report.passed()) << report.worst_relative;
  const auto lin = check_linearization(pr.oracle(2000, 1), Direction::convex(pr.alpha()),
                                       pr.set(), 5000, 6);
  EXPECT_TRUE(lin.passed()) << lin.worst_relative;
}

INSTANTIATE_TEST_SUITE_P(Gammas, PhaseRetrievalSandwich, ::testing::Values(0.1, 1.0, 10.0));

TEST(Quadrature, GaussLegendreIntegratesPolynomialsExactly) {
  const auto rule = gauss_legendre(5);
  // Exact through degree 9.
  for (int p = 0; p <= 9; ++p) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      sum += rule.weights[i] * std::pow(rule.nodes[i], p);
    }
    EXPECT_NEAR(sum, p % 2 ? 0.0 : 2.0 / (p + 1), 1e-14) << p;
  }
}

TEST(Quadrature, LinearNonObliviousClosedForm) {
  const Vector c = vec({0.3, -1.2});
  for (double gamma : {0.5, 1.0, 4.0}) {
    const Vector got = non_oblivious_grad([&](const Vector&) -> Vector { return c; },
                                          gamma, vec({0.4, 0.9}));
    const double factor = (1 - std::exp(-gamma)) / gamma;
    EXPECT_LE((got - factor * c).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Quadrature, MatchesTrapezoidOracle) {
  // Smooth nonlinear grad F(y) = (sin y0, y0 y1^2).
  const VectorFn grad = [](const Vector& y) -> Vector {
    return vec({std::sin(y[0]), y[0] * y[1] * y[1]});
  };
  const Vector x = vec({0.8, 0.6});
  const double gamma = 1.0;
  const int n = 100000;
  Vector trap = Vector::Zero(2);
  for (int i = 0; i <= n; ++i) {
    const double z = double(i) / n;
    const double w = (i == 0 || i == n ? 0.5 : 1.0) / n;
    trap += w * std::exp(gamma * (z - 1)) * grad(z * x);
  }
  const Vector got = non_oblivious_grad(grad, gamma, x);
  EXPECT_LE((got - trap).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(TraceIo, RoundTripPreservesId) {
  for (const auto& trace :
       {gen_linear(3, 30, 5.0, 2, 4), gen_vertex_cover(4, 10, 0.6, {0, 1}, 3, 2),
        gen_bwk_lowerbound(40, 4.0, 2), gen_stochastic_bandit(3, 12, 2.0, 1)}) {
    std::stringstream ss;
    write_trace(ss, trace);
    const auto back = read_trace(ss);
    EXPECT_EQ(back.id(), trace.id());
    EXPECT_EQ(back.G, trace.G);
    EXPECT_EQ(back.F, trace.F);
    EXPECT_EQ(back.metadata, trace.metadata);
    std::stringstream again;
    write_trace(again, back);
    std::stringstream first;
    write_trace(first, trace);
    EXPECT_EQ(again.str(), first.str());
  }
}

TEST(TraceIo, ParseErrorsCarryLineNumbers) {
  std::stringstream bad("cono-trace 1\nfamily x\nseed 0\nbudget oops\n");
  try {
    read_trace(bad);
    FAIL() << "expected InvalidInput";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
}

}  // namespace
}  // namespace cono
