#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "cono/geometry.hpp"

namespace cono {

enum class Orientation { kConvex, kConcave };

/// Inequality direction and approximation factor. Convex requires alpha >= 1,
/// concave requires 0 < alpha <= 1; alpha == 1 is valid for both.
class Direction {
 public:
  static Direction convex(double alpha);
  static Direction concave(double alpha);

  Orientation orientation() const { return orientation_; }
  double alpha() const { return alpha_; }
  bool is_convex() const { return orientation_ == Orientation::kConvex; }

  friend bool operator==(const Direction&, const Direction&) = default;

 private:
  Direction(Orientation o, double alpha) : orientation_(o), alpha_(alpha) {}
  Orientation orientation_;
  double alpha_;
};

using ScalarFn = std::function<double(const Vector&)>;
using VectorFn = std::function<Vector(const Vector&)>;

/// A nonnegative function together with a generalized (sub/super)gradient map
/// H and a uniform bound on ||H||_2.
struct SubgradientOracle {
  ScalarFn eval;
  VectorFn subgrad;
  double norm_bound = 0.0;
};

/// Outcome of a sampling falsifier. `worst_violation` is the largest observed
/// (left side - right side) of the checked inequality, oriented so that a
/// positive value is a violation. `worst_relative` divides each margin by
/// max(1, |scale|) first; the check passes when it does not exceed
/// `tolerance`. For absolute checks the two coincide.
struct ViolationReport {
  std::size_t samples_checked = 0;
  double worst_violation = -std::numeric_limits<double>::infinity();
  double worst_relative = -std::numeric_limits<double>::infinity();
  double tolerance = 0.0;
  std::vector<Vector> witness;

  bool passed() const { return worst_relative <= tolerance; }

  // Keeps the argument tuple with the largest raw margin.
  void record(double margin, std::vector<Vector> args, double scale = 0.0);
};

inline constexpr double kInequalityTol = 1e-9;

/// f(x) <= alpha f(u) + <H(x), x - u> (convex) or the reversed inequality
/// (concave) on uniformly sampled pairs.
ViolationReport check_linearization(const SubgradientOracle& oracle,
                                   Direction dir, const DecisionSet& set,
                                   std::size_t num_pairs, std::uint64_t seed,
                                   double tol = kInequalityTol);

/// f(sum p_i x_i) <= alpha sum p_i f(x_i) (convex) or reversed (concave) over
/// random mixtures of 2..max_support points.
ViolationReport check_approx_jensen(const ScalarFn& f, Direction dir,
                                    const DecisionSet& set,
                                    std::size_t num_trials,
                                    std::size_t max_support,
                                    std::uint64_t seed,
                                    double tol = kInequalityTol);

/// Checks g <= f <= alpha g at sampled points, midpoint convexity of g on
/// sampled pairs, and the first-order inequality of g_subgrad on sampled
/// pairs. Tolerances scale as tol * max(1, |value|).
ViolationReport check_sandwich(const ScalarFn& f, const ScalarFn& g,
                               const VectorFn& g_subgrad, double alpha,
                               const DecisionSet& set, std::size_t num_points,
                               std::uint64_t seed,
                               double tol = kInequalityTol);

/// Largest ||grad(x)|| over `samples` uniform points plus the corners of the
/// enclosing box (a sampled estimate of the supremum).
double sampled_norm_sup(const VectorFn& grad, const DecisionSet& set,
                        std::size_t samples, std::uint64_t seed);

/// Generalized subgradient alpha * h(x) built from a convex witness g with
/// g <= f <= alpha g and h a subgradient of g.
SubgradientOracle subgrad_from_witness(ScalarFn f, VectorFn g_subgrad,
                                       double alpha, double g_subgrad_bound);

/// Nonnegative linear combination sum c_i f_i with H = sum c_i H_i.
SubgradientOracle combine(std::span<const SubgradientOracle> oracles,
                          std::span<const double> weights);

/// A function sampled on a regular grid over a 1-d or 2-d box.
struct SampledFunction {
  std::vector<Vector> points;
  std::vector<double> values;
};

/// Discrete Fenchel biconjugate f** on a primal grid of spacing `resolution`,
/// using a dual grid over [-dual_radius, dual_radius]^d with the same spacing.
/// Throws UnsupportedError for dimension > 2 or non-box sets.
SampledFunction biconjugate_grid(const ScalarFn& f, const DecisionSet& set,
                                 double resolution, double dual_radius);

/// Grid form of the envelope characterization: reports the largest
/// f(x) - alpha f**(x) over the grid, passing when it is <= tol.
ViolationReport check_envelope(const ScalarFn& f,
                               const SampledFunction& envelope, double alpha,
                               double tol);

}  // namespace cono
