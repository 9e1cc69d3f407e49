#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cono/geometry.hpp"
#include "cono/instances.hpp"
#include "cono/report.hpp"

namespace cono {

/// Potential of consumed budget: e^{lambda q} or q^m.
class LyapunovFamily {
 public:
  enum class Kind { kExponential, kPowerLaw };

  static LyapunovFamily exponential(double lambda);
  static LyapunovFamily power_law(double m);

  Kind kind() const { return kind_; }
  double parameter() const { return parameter_; }
  double value(double q) const;
  double derivative(double q) const;

 private:
  LyapunovFamily(Kind kind, double parameter)
      : kind_(kind), parameter_(parameter) {}
  Kind kind_;
  double parameter_;
};

struct Theorem2Params {
  double lambda = 0.0;
  double V = 0.0;
};

Theorem2Params theorem2_params(double alpha, double G, double D, int T,
                               double budget);

/// V * H_f + sum_i phi_prime[i] * H_g[i].
Vector surrogate_subgrad(const Vector& H_f, std::span<const Vector> H_g,
                         double V, std::span<const double> phi_prime);

struct FullInfoState {
  Vector action;
  Vector Q;
  double grad_sq_sum = 0.0;
  double V = 1.0;
  double last_step = 0.0;
  int round = 0;
};

/// sqrt(2) D / (2 sqrt(grad_sq_sum)), and 0 when nothing has been observed.
double adagrad_step_size(double grad_sq_sum, double D);

/// Accumulates ||H||^2, stores the step size and moves state.action to
/// Proj(x - eta H). Returns the new action.
Vector adagrad_step(FullInfoState& state, const Vector& H,
                    const DecisionSet& set, double D);

struct FullInfoOptions {
  /// Defaults to theorem2_params from the trace constants.
  std::optional<Theorem2Params> params;
  /// Defaults to exponential(params.lambda).
  std::optional<LyapunovFamily> lyapunov;
};

/// Upper limit on lambda * Q before the exponential potential is considered
/// to have overflowed.
inline constexpr double kMaxExponent = 700.0;

RunReport run_full_info(const InstanceTrace& trace,
                        const FullInfoOptions& options = {});

/// alpha G D sqrt(2T) + (alpha / 2) G D.
double theorem2_regret_bound(double alpha, double G, double D, int T);
/// (1 / lambda) ln(2 (1 + F T / (G D) + sqrt(2T))).
double theorem2_consumption_bound(double lambda, double F, double G, double D,
                                  int T);

}  // namespace cono
