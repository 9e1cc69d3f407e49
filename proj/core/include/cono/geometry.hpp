#pragma once

#include <Eigen/Dense>

#include <variant>

#include "cono/rng.hpp"

namespace cono {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Absolute tolerance used for set membership tests.
inline constexpr double kMembershipTol = 1e-9;

struct Box {
  Vector lower;
  Vector upper;
};

/// Probability simplex {x >= 0, sum x = 1} in `dimension` coordinates.
struct Simplex {
  int dimension = 1;
};

/// One-dimensional box [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// A convex action domain. Immutable once constructed; the factories validate
/// the shape invariants and throw InvalidInput otherwise.
class DecisionSet {
 public:
  using Shape = std::variant<Box, Simplex, Interval>;

  static DecisionSet box(Vector lower, Vector upper);
  static DecisionSet unit_box(int dimension);
  static DecisionSet simplex(int dimension);
  static DecisionSet interval(double lo, double hi);

  const Shape& shape() const { return shape_; }
  int dimension() const;

  bool contains(const Vector& point, double tol = kMembershipTol) const;

  /// Box midpoint, or the uniform distribution for a simplex.
  Vector center() const;

  /// Uniform sample (Dirichlet(1, ..., 1) for the simplex).
  Vector sample(Rng& rng) const;

  /// Lower/upper coordinate bounds of the smallest enclosing box.
  Vector lower_bounds() const;
  Vector upper_bounds() const;

 private:
  explicit DecisionSet(Shape shape) : shape_(std::move(shape)) {}
  Shape shape_;
};

/// Euclidean projection. Throws InvalidInput on a dimension mismatch.
Vector project(const DecisionSet& set, const Vector& point);

/// Sorted-threshold projection onto the probability simplex.
Vector project_simplex(const Vector& point);

/// Largest distance between two members of the set.
double diameter(const DecisionSet& set);

}  // namespace cono
