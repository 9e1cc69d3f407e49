#include "cono/approx_convex.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cono/error.hpp"

namespace cono {

Direction Direction::convex(double alpha) {
  if (!std::isfinite(alpha) || alpha < 1.0) {
    throw InvalidInput("convex direction requires finite alpha >= 1, got " +
                       std::to_string(alpha));
  }
  return Direction(Orientation::kConvex, alpha);
}

Direction Direction::concave(double alpha) {
  if (!std::isfinite(alpha) || alpha <= 0.0 || alpha > 1.0) {
    throw InvalidInput("concave direction requires 0 < alpha <= 1, got " +
                       std::to_string(alpha));
  }
  return Direction(Orientation::kConcave, alpha);
}

void ViolationReport::record(double margin, std::vector<Vector> args,
                             double scale) {
  ++samples_checked;
  worst_relative =
      std::max(worst_relative, margin / std::max(1.0, std::abs(scale)));
  if (margin > worst_violation) {
    worst_violation = margin;
    witness = std::move(args);
  }
}

ViolationReport check_linearization(const SubgradientOracle& oracle,
                                   Direction dir, const DecisionSet& set,
                                   std::size_t num_pairs, std::uint64_t seed,
                                   double tol) {
  if (num_pairs == 0) throw InvalidInput("num_pairs must be >= 1");
  ViolationReport report;
  report.tolerance = tol;
  Rng rng(seed);
  const double alpha = dir.alpha();
  for (std::size_t s = 0; s < num_pairs; ++s) {
    Vector x = set.sample(rng);
    Vector u = set.sample(rng);
    const double lhs = oracle.eval(x);
    const double rhs = alpha * oracle.eval(u) + oracle.subgrad(x).dot(x - u);
    const double margin = dir.is_convex() ? lhs - rhs : rhs - lhs;
    report.record(margin, {std::move(x), std::move(u)});
  }
  return report;
}

ViolationReport check_approx_jensen(const ScalarFn& f, Direction dir,
                                    const DecisionSet& set,
                                    std::size_t num_trials,
                                    std::size_t max_support,
                                    std::uint64_t seed, double tol) {
  if (max_support < 2) throw InvalidInput("max_support must be >= 2");
  ViolationReport report;
  report.tolerance = tol;
  Rng rng(seed);
  const double alpha = dir.alpha();
  for (std::size_t trial = 0; trial < num_trials; ++trial) {
    const std::size_t n =
        2 + static_cast<std::size_t>(rng.next() % (max_support - 1));
    std::vector<Vector> points;
    points.reserve(n + 1);
    Vector weights(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      points.push_back(set.sample(rng));
      weights[static_cast<Eigen::Index>(i)] =
          -std::log(rng.uniform_positive());
    }
    weights /= weights.sum();
    Vector mixture = Vector::Zero(set.dimension());
    double mixed_value = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = weights[static_cast<Eigen::Index>(i)];
      mixture += w * points[i];
      mixed_value += w * f(points[i]);
    }
    const double lhs = f(mixture);
    const double rhs = alpha * mixed_value;
    const double margin = dir.is_convex() ? lhs - rhs : rhs - lhs;
    points.push_back(weights);
    report.record(margin, std::move(points));
  }
  return report;
}

ViolationReport check_sandwich(const ScalarFn& f, const ScalarFn& g,
                               const VectorFn& g_subgrad, double alpha,
                               const DecisionSet& set, std::size_t num_points,
                               std::uint64_t seed, double tol) {
  if (!(alpha >= 1.0)) throw InvalidInput("check_sandwich requires alpha >= 1");
  ViolationReport report;
  report.tolerance = tol;
  Rng rng(seed);
  for (std::size_t s = 0; s < num_points; ++s) {
    const Vector x = set.sample(rng);
    const Vector y = set.sample(rng);
    const double fx = f(x);
    const double gx = g(x);
    const double gy = g(y);
    const double gm = g(0.5 * (x + y));
    report.record(gx - fx, {x}, fx);
    report.record(fx - alpha * gx, {x}, fx);
    report.record(gm - 0.5 * (gx + gy), {x, y}, 0.5 * (gx + gy));
    report.record(gx + g_subgrad(x).dot(y - x) - gy, {x, y}, gy);
  }
  return report;
}

double sampled_norm_sup(const VectorFn& grad, const DecisionSet& set,
                        std::size_t samples, std::uint64_t seed) {
  double sup = 0.0;
  Rng rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    sup = std::max(sup, grad(set.sample(rng)).norm());
  }
  const int d = set.dimension();
  if (!std::holds_alternative<Simplex>(set.shape()) && d <= 16) {
    const Vector lo = set.lower_bounds();
    const Vector hi = set.upper_bounds();
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
      Vector corner(d);
      for (int i = 0; i < d; ++i) corner[i] = (mask >> i) & 1u ? hi[i] : lo[i];
      sup = std::max(sup, grad(corner).norm());
    }
  }
  return sup;
}

SubgradientOracle subgrad_from_witness(ScalarFn f, VectorFn g_subgrad,
                                       double alpha, double g_subgrad_bound) {
  if (!(alpha >= 1.0)) throw InvalidInput("witness route requires alpha >= 1");
  if (!(g_subgrad_bound >= 0.0)) {
    throw InvalidInput("subgradient bound must be nonnegative");
  }
  SubgradientOracle out;
  out.eval = std::move(f);
  out.subgrad = [h = std::move(g_subgrad), alpha](const Vector& x) -> Vector {
    return alpha * h(x);
  };
  out.norm_bound = alpha * g_subgrad_bound;
  return out;
}

SubgradientOracle combine(std::span<const SubgradientOracle> oracles,
                          std::span<const double> weights) {
  if (oracles.size() != weights.size()) {
    throw InvalidInput("combine: one weight per oracle required");
  }
  double bound = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0)) {
      throw InvalidInput("combine: weights must be nonnegative");
    }
    bound += weights[i] * oracles[i].norm_bound;
  }
  std::vector<SubgradientOracle> parts(oracles.begin(), oracles.end());
  std::vector<double> w(weights.begin(), weights.end());

  SubgradientOracle out;
  out.norm_bound = bound;
  out.eval = [parts, w](const Vector& x) {
    double total = 0.0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (w[i] != 0.0) total += w[i] * parts[i].eval(x);
    }
    return total;
  };
  out.subgrad = [parts, w](const Vector& x) -> Vector {
    Vector total = Vector::Zero(x.size());
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (w[i] != 0.0) total += w[i] * parts[i].subgrad(x);
    }
    return total;
  };
  return out;
}

namespace {

std::vector<Vector> regular_grid(const Vector& lo, const Vector& hi,
                                 double spacing) {
  const Eigen::Index d = lo.size();
  std::vector<int> counts(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) {
    counts[static_cast<std::size_t>(i)] =
        1 + static_cast<int>(std::llround((hi[i] - lo[i]) / spacing));
  }
  std::vector<Vector> points;
  if (d == 1) {
    for (int a = 0; a < counts[0]; ++a) {
      const double t = counts[0] == 1 ? 0.0 : double(a) / (counts[0] - 1);
      points.push_back(Vector::Constant(1, lo[0] + t * (hi[0] - lo[0])));
    }
    return points;
  }
  for (int a = 0; a < counts[0]; ++a) {
    for (int b = 0; b < counts[1]; ++b) {
      const double ta = counts[0] == 1 ? 0.0 : double(a) / (counts[0] - 1);
      const double tb = counts[1] == 1 ? 0.0 : double(b) / (counts[1] - 1);
      Vector p(2);
      p << lo[0] + ta * (hi[0] - lo[0]), lo[1] + tb * (hi[1] - lo[1]);
      points.push_back(std::move(p));
    }
  }
  return points;
}

}  // namespace

SampledFunction biconjugate_grid(const ScalarFn& f, const DecisionSet& set,
                                 double resolution, double dual_radius) {
  const int d = set.dimension();
  if (d > 2) {
    throw UnsupportedError("biconjugate_grid supports dimension <= 2, got " +
                           std::to_string(d));
  }
  if (std::holds_alternative<Simplex>(set.shape())) {
    throw UnsupportedError("biconjugate_grid requires a box or interval");
  }
  if (!(resolution > 0.0) || !(dual_radius >= 0.0)) {
    throw InvalidInput("biconjugate_grid: resolution > 0, radius >= 0");
  }
  SampledFunction out;
  out.points = regular_grid(set.lower_bounds(), set.upper_bounds(), resolution);
  out.values.reserve(out.points.size());
  std::vector<double> f_values;
  f_values.reserve(out.points.size());
  for (const auto& x : out.points) f_values.push_back(f(x));

  const std::vector<Vector> duals =
      regular_grid(Vector::Constant(d, -dual_radius),
                   Vector::Constant(d, dual_radius), resolution);
  std::vector<double> conjugate(duals.size());
  for (std::size_t j = 0; j < duals.size(); ++j) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < out.points.size(); ++i) {
      best = std::max(best, duals[j].dot(out.points[i]) - f_values[i]);
    }
    conjugate[j] = best;
  }
  for (const auto& x : out.points) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < duals.size(); ++j) {
      best = std::max(best, duals[j].dot(x) - conjugate[j]);
    }
    out.values.push_back(best);
  }
  return out;
}

ViolationReport check_envelope(const ScalarFn& f,
                               const SampledFunction& envelope, double alpha,
                               double tol) {
  ViolationReport report;
  report.tolerance = tol;
  for (std::size_t i = 0; i < envelope.points.size(); ++i) {
    const double margin = f(envelope.points[i]) - alpha * envelope.values[i];
    report.record(margin, {envelope.points[i]});
  }
  return report;
}

}  // namespace cono
