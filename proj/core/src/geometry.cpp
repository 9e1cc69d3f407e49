#include "cono/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "cono/error.hpp"

namespace cono {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_dimension(const DecisionSet& set, const Vector& point) {
  if (point.size() != set.dimension()) {
    throw InvalidInput("dimension mismatch: set has " +
                       std::to_string(set.dimension()) + ", point has " +
                       std::to_string(point.size()));
  }
}

}  // namespace

DecisionSet DecisionSet::box(Vector lower, Vector upper) {
  if (lower.size() == 0 || lower.size() != upper.size()) {
    throw InvalidInput("box bounds must be nonempty and of equal length");
  }
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) ||
        lower[i] > upper[i]) {
      throw InvalidInput("box requires finite lower[i] <= upper[i]");
    }
  }
  return DecisionSet(Box{std::move(lower), std::move(upper)});
}

DecisionSet DecisionSet::unit_box(int dimension) {
  if (dimension < 1) throw InvalidInput("box dimension must be >= 1");
  return box(Vector::Zero(dimension), Vector::Ones(dimension));
}

DecisionSet DecisionSet::simplex(int dimension) {
  if (dimension < 1) throw InvalidInput("simplex dimension must be >= 1");
  return DecisionSet(Simplex{dimension});
}

DecisionSet DecisionSet::interval(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
    throw InvalidInput("interval requires finite lo <= hi");
  }
  return DecisionSet(Interval{lo, hi});
}

int DecisionSet::dimension() const {
  return std::visit(
      Overloaded{[](const Box& b) { return static_cast<int>(b.lower.size()); },
                 [](const Simplex& s) { return s.dimension; },
                 [](const Interval&) { return 1; }},
      shape_);
}

Vector DecisionSet::lower_bounds() const {
  return std::visit(
      Overloaded{[](const Box& b) -> Vector { return b.lower; },
                 [](const Simplex& s) -> Vector {
                   return Vector::Zero(s.dimension);
                 },
                 [](const Interval& i) -> Vector {
                   return Vector::Constant(1, i.lo);
                 }},
      shape_);
}

Vector DecisionSet::upper_bounds() const {
  return std::visit(
      Overloaded{[](const Box& b) -> Vector { return b.upper; },
                 [](const Simplex& s) -> Vector {
                   return Vector::Ones(s.dimension);
                 },
                 [](const Interval& i) -> Vector {
                   return Vector::Constant(1, i.hi);
                 }},
      shape_);
}

bool DecisionSet::contains(const Vector& point, double tol) const {
  if (point.size() != dimension()) return false;
  if (std::holds_alternative<Simplex>(shape_)) {
    return point.minCoeff() >= -tol && std::abs(point.sum() - 1.0) <= tol;
  }
  const Vector lo = lower_bounds();
  const Vector hi = upper_bounds();
  for (Eigen::Index i = 0; i < point.size(); ++i) {
    if (point[i] < lo[i] - tol || point[i] > hi[i] + tol) return false;
  }
  return true;
}

Vector DecisionSet::center() const {
  if (const auto* s = std::get_if<Simplex>(&shape_)) {
    return Vector::Constant(s->dimension, 1.0 / s->dimension);
  }
  return 0.5 * (lower_bounds() + upper_bounds());
}

Vector DecisionSet::sample(Rng& rng) const {
  const int d = dimension();
  Vector x(d);
  if (std::holds_alternative<Simplex>(shape_)) {
    for (int i = 0; i < d; ++i) x[i] = -std::log(rng.uniform_positive());
    return x / x.sum();
  }
  const Vector lo = lower_bounds();
  const Vector hi = upper_bounds();
  for (int i = 0; i < d; ++i) x[i] = rng.uniform(lo[i], hi[i]);
  return x;
}

Vector project_simplex(const Vector& point) {
  const Eigen::Index n = point.size();
  if (n == 0) throw InvalidInput("project_simplex: empty vector");
  std::vector<double> sorted(point.data(), point.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());

  // rho is the largest index whose sorted entry stays positive after the
  // uniform shift that restores sum = 1.
  double cumsum = 0.0;
  double shift = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumsum += sorted[j];
    const double candidate = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) shift = candidate;
  }
  return (point.array() - shift).max(0.0).matrix();
}

Vector project(const DecisionSet& set, const Vector& point) {
  require_dimension(set, point);
  if (std::holds_alternative<Simplex>(set.shape())) {
    return project_simplex(point);
  }
  return point.cwiseMax(set.lower_bounds()).cwiseMin(set.upper_bounds());
}

double diameter(const DecisionSet& set) {
  return std::visit(
      Overloaded{[](const Box& b) { return (b.upper - b.lower).norm(); },
                 [](const Simplex& s) {
                   return s.dimension >= 2 ? std::sqrt(2.0) : 0.0;
                 },
                 [](const Interval& i) { return i.hi - i.lo; }},
      set.shape());
}

}  // namespace cono
