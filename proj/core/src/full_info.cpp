#include "cono/full_info.hpp"

#include <cmath>
#include <string>

#include "cono/error.hpp"

namespace cono {

LyapunovFamily LyapunovFamily::exponential(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidInput("exponential potential needs lambda > 0");
  }
  return LyapunovFamily(Kind::kExponential, lambda);
}

LyapunovFamily LyapunovFamily::power_law(double m) {
  if (!(m >= 1.0) || !std::isfinite(m)) {
    throw InvalidInput("power-law potential needs m >= 1");
  }
  return LyapunovFamily(Kind::kPowerLaw, m);
}

double LyapunovFamily::value(double q) const {
  if (kind_ == Kind::kExponential) return std::exp(parameter_ * q);
  return std::pow(q, parameter_);
}

double LyapunovFamily::derivative(double q) const {
  if (kind_ == Kind::kExponential) {
    return parameter_ * std::exp(parameter_ * q);
  }
  return parameter_ * std::pow(q, parameter_ - 1.0);
}

Theorem2Params theorem2_params(double alpha, double G, double D, int T,
                               double budget) {
  if (!(alpha > 0.0) || !(G > 0.0) || !(D > 0.0) || T < 1) {
    throw InvalidInput("theorem2_params needs alpha, G, D, T > 0");
  }
  if (!(budget >= 0.0)) throw InvalidInput("budget must be >= 0");
  const double agd = alpha * G * D;
  return {.lambda = 1.0 / (2.0 * (agd * std::sqrt(2.0 * T) + alpha * budget)),
          .V = 1.0 / agd};
}

double theorem2_regret_bound(double alpha, double G, double D, int T) {
  return alpha * G * D * std::sqrt(2.0 * T) + 0.5 * alpha * G * D;
}

double theorem2_consumption_bound(double lambda, double F, double G, double D,
                                  int T) {
  const double ratio = F * T / (G * D);
  return std::log(2.0 * (1.0 + ratio + std::sqrt(2.0 * T))) / lambda;
}

Vector surrogate_subgrad(const Vector& H_f, std::span<const Vector> H_g,
                         double V, std::span<const double> phi_prime) {
  if (H_g.size() != phi_prime.size()) {
    throw InvalidInput("one Lyapunov derivative per consumption gradient");
  }
  Vector H = V * H_f;
  for (std::size_t i = 0; i < H_g.size(); ++i) {
    if (H_g[i].size() != H_f.size()) {
      throw InvalidInput("consumption gradient " + std::to_string(i) +
                         " has the wrong dimension");
    }
    if (phi_prime[i] < 0.0) {
      throw InvalidInput("Lyapunov derivatives must be nonnegative");
    }
    H += phi_prime[i] * H_g[i];
  }
  return H;
}

double adagrad_step_size(double grad_sq_sum, double D) {
  if (grad_sq_sum <= 0.0) return 0.0;
  return std::sqrt(2.0) * D / (2.0 * std::sqrt(grad_sq_sum));
}

Vector adagrad_step(FullInfoState& state, const Vector& H,
                    const DecisionSet& set, double D) {
  state.grad_sq_sum += H.squaredNorm();
  state.last_step = adagrad_step_size(state.grad_sq_sum, D);
  state.action = project(set, state.action - state.last_step * H);
  return state.action;
}

RunReport run_full_info(const InstanceTrace& trace,
                        const FullInfoOptions& options) {
  const DecisionSet& set = trace.set;
  const double D = diameter(set);
  const double alpha = trace.alpha();
  const int T = trace.horizon;
  const int k = trace.num_resources;
  const bool auto_params = !options.params.has_value();

  Theorem2Params params;
  if (options.params) {
    params = *options.params;
    if (!(params.V > 0.0) || !(params.lambda > 0.0)) {
      throw InvalidInput("explicit parameters need V > 0 and lambda > 0");
    }
  } else if (trace.G > 0.0 && D > 0.0) {
    params = theorem2_params(alpha, trace.G, D, T, trace.budget);
  } else {
    // Degenerate trace: every surrogate gradient vanishes, so the schedule
    // only matters for the reported bounds.
    params = {.lambda = 1.0, .V = 1.0};
  }
  const LyapunovFamily lyap =
      options.lyapunov.value_or(LyapunovFamily::exponential(params.lambda));
  const bool exponential = lyap.kind() == LyapunovFamily::Kind::kExponential;
  // Reward traces are ascended by descending the negated reward.
  const double orientation_sign =
      trace.direction.is_convex() ? 1.0 : -1.0;

  FullInfoState state;
  state.action = set.center();
  state.Q = Vector::Zero(k);
  state.V = params.V;

  RunReport report;
  report.learner = "full_info";
  report.trace_id = trace.id();
  report.orientation = trace.direction.orientation();
  report.alpha = alpha;
  report.num_resources = k;
  report.Q0.assign(static_cast<std::size_t>(k), 0.0);
  report.rows.reserve(static_cast<std::size_t>(T));

  double max_drift_margin = -std::numeric_limits<double>::infinity();
  double max_surrogate_norm = 0.0;
  std::vector<Vector> H_g(static_cast<std::size_t>(k));
  std::vector<double> phi_prime(static_cast<std::size_t>(k));

  for (int t = 1; t <= T; ++t) {
    const RoundData& round = trace.rounds[static_cast<std::size_t>(t - 1)];
    const Vector x = state.action;
    RoundRow row;
    row.t = t;
    row.action = x;
    Vector H_f;
    try {
      row.cost = round.cost.eval(x);
      H_f = orientation_sign * round.cost.subgrad(x);
      for (int i = 0; i < k; ++i) {
        const auto& g = round.consumptions[static_cast<std::size_t>(i)];
        const double use = g.eval(x);
        if (!std::isfinite(use)) throw NumericError("non-finite consumption");
        const double before = state.Q[i];
        state.Q[i] += use;
        if (exponential && lyap.parameter() * state.Q[i] > kMaxExponent) {
          throw NumericError("lambda * Q exceeds " +
                             std::to_string(kMaxExponent));
        }
        phi_prime[static_cast<std::size_t>(i)] = lyap.derivative(state.Q[i]);
        H_g[static_cast<std::size_t>(i)] = g.subgrad(x);
        if (exponential) {
          const double drift = lyap.value(state.Q[i]) - lyap.value(before) -
                               phi_prime[static_cast<std::size_t>(i)] * use;
          max_drift_margin = std::max(max_drift_margin, drift);
        }
        row.consumption.push_back(use);
      }
      if (!std::isfinite(row.cost)) throw NumericError("non-finite cost");
    } catch (const std::exception& e) {
      throw NumericError("round " + std::to_string(t) + ": " + e.what());
    }
    const Vector H = surrogate_subgrad(H_f, H_g, params.V, phi_prime);
    max_surrogate_norm = std::max(max_surrogate_norm, H.norm());
    adagrad_step(state, H, set, D);
    ++state.round;
    row.Q.assign(state.Q.data(), state.Q.data() + k);
    row.step_size = state.last_step;
    report.rows.push_back(std::move(row));
  }

  double phi_prime_sum = 0.0;
  for (int i = 0; i < k; ++i) phi_prime_sum += lyap.derivative(state.Q[i]);

  report.set_metric("V", params.V);
  report.set_metric("lambda", params.lambda);
  report.set_metric("D", D);
  report.set_metric("G", trace.G);
  report.set_metric("F", trace.F);
  report.set_metric("total_cost", report.total_cost());
  for (int i = 0; i < k; ++i) {
    report.set_metric("cc_" + std::to_string(i), state.Q[i]);
  }
  const bool bounds_defined = trace.G > 0.0 && D > 0.0;
  report.set_metric("regret_bound",
                    bounds_defined && auto_params
                        ? theorem2_regret_bound(alpha, trace.G, D, T)
                        : kNotApplicable);
  report.set_metric("cc_bound",
                    bounds_defined && exponential
                        ? theorem2_consumption_bound(lyap.parameter(),
                                                     trace.F, trace.G, D, T)
                        : kNotApplicable);
  report.set_metric("max_drift_margin",
                    exponential && k > 0 ? max_drift_margin : kNotApplicable);
  report.set_metric("max_surrogate_norm", max_surrogate_norm);
  report.set_metric("surrogate_norm_bound",
                    alpha * trace.G * (params.V + phi_prime_sum));
  return report;
}

}  // namespace cono
