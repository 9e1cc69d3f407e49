#include "cono/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cono/error.hpp"
#include "cono/rng.hpp"

namespace cono {

namespace {

constexpr double kE = std::numbers::e;

void require_distribution(const Vector& p, const char* what) {
  if (p.size() == 0 || p.minCoeff() <= 0.0 ||
      std::abs(p.sum() - 1.0) > 1e-9) {
    throw InvalidInput(std::string(what) +
                       " must be a strictly positive distribution");
  }
}

}  // namespace

BanditParams bandit_params(int K, int T, double budget, VSchedule schedule) {
  if (K < 1) throw InvalidInput("bandit needs K >= 1");
  if (T <= 2) {
    throw InvalidInput("bandit schedule needs T >= 3 so that ln T > 1");
  }
  if (!(budget >= 0.0)) throw InvalidInput("budget must be >= 0");
  const double m = std::log(static_cast<double>(T));
  const double root_t = std::sqrt(static_cast<double>(T));
  const double denom = 36.0 * K * root_t * m * m;
  double log_numer = 0.0;
  if (schedule == VSchedule::kProof) {
    log_numer = m * std::log(m * kE * (18.0 * K * root_t * m * m + budget));
  } else {
    log_numer = m * std::log(kE * (18.0 * K * root_t * m * m * m + budget * m));
  }
  const double log_v = log_numer - std::log(denom);
  BanditParams out;
  out.m = m;
  out.Q0 = m;
  out.log10_V = log_v / std::numbers::ln10;
  if (out.log10_V > kMaxLog10) {
    throw NumericError("scheduled V = 10^" + std::to_string(out.log10_V) +
                       " exceeds 10^" + std::to_string(kMaxLog10));
  }
  out.V = std::exp(log_v);
  return out;
}

double exploration_rate(int t, int K) {
  if (t < 1 || K < 1) throw InvalidInput("exploration_rate needs t, K >= 1");
  return std::min(0.5, std::sqrt(static_cast<double>(K) / t));
}

Vector mixed_sampling(const Vector& p, double gamma) {
  const auto K = static_cast<double>(p.size());
  return ((1.0 - gamma) * p.array() + gamma / K).matrix();
}

Vector ips_estimate(double observed_loss, int arm, const Vector& p_mixed) {
  if (arm < 0 || arm >= p_mixed.size()) {
    throw InvalidInput("arm index out of range");
  }
  if (!(p_mixed[arm] > 0.0)) {
    throw NumericError("sampling probability of the pulled arm is zero");
  }
  Vector est = Vector::Zero(p_mixed.size());
  est[arm] = observed_loss / p_mixed[arm];
  return est;
}

double learning_rate(int K, double stability_sum) {
  if (!(stability_sum >= 0.0)) {
    throw InvalidInput("stability sum must be >= 0");
  }
  return K / (1.0 + stability_sum);
}

double surrogate_loss(double loss, double consumption, double V,
                      const LyapunovFamily& lyapunov, double Q_prev) {
  return V * loss + kE * lyapunov.derivative(Q_prev) * consumption;
}

double solve_reciprocal_sum(const Vector& a) {
  const auto K = static_cast<double>(a.size());
  if (a.size() == 0) throw InvalidInput("empty coefficient vector");
  if (a.minCoeff() != 0.0) {
    throw InvalidInput("coefficients must be shifted to minimum 0");
  }
  auto excess = [&a](double s, double& slope) {
    const Eigen::ArrayXd inv = 1.0 / (a.array() + s);
    slope = -inv.square().sum();
    return inv.sum() - 1.0;
  };
  // sum 1/(a_j + s) >= 1/s puts the root at s >= 1, and the sum is at most
  // K / s, so the root lies in [1, K].
  double lo = 1.0;
  double hi = std::max(1.0, K);
  double s = lo;
  for (int it = 0; it < 200; ++it) {
    double slope = 0.0;
    const double h = excess(s, slope);
    if (std::abs(h) <= 1e-14) return s;
    if (h > 0.0) {
      lo = s;
    } else {
      hi = s;
    }
    double next = s - h / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) <= 1e-16 * std::max(1.0, s)) return next;
    s = next;
  }
  double slope = 0.0;
  const double residual = excess(s, slope);
  if (std::abs(residual) <= 1e-12) return s;
  throw NumericError("reciprocal-sum solver stalled: bracket [" +
                     std::to_string(lo) + ", " + std::to_string(hi) +
                     "], residual " + std::to_string(residual));
}

StabilityResult stability_term(const Vector& est_loss, const Vector& p,
                               double eta) {
  if (!(eta > 0.0)) throw InvalidInput("stability_term needs eta > 0");
  if (est_loss.size() != p.size()) {
    throw InvalidInput("loss and distribution sizes differ");
  }
  require_distribution(p, "p");
  // Stationarity: q_j = 1 / (1/p_j + eta l_j + eta nu).
  const Vector a = (p.array().inverse() + eta * est_loss.array()).matrix();
  const Vector shifted = (a.array() - a.minCoeff()).matrix();
  const double s = solve_reciprocal_sum(shifted);
  StabilityResult out;
  out.maximizer = (shifted.array() + s).inverse().matrix();
  out.maximizer /= out.maximizer.sum();
  const Eigen::ArrayXd ratio = out.maximizer.array() / p.array();
  const double bregman = (-ratio.log() + ratio - 1.0).sum();
  const double value = est_loss.dot(p - out.maximizer) - bregman / eta;
  out.value = std::max(0.0, value);
  return out;
}

Vector ftrl_update(const Vector& cum_est_loss, double eta) {
  if (!(eta > 0.0)) throw InvalidInput("ftrl_update needs eta > 0");
  if (cum_est_loss.size() == 0) throw InvalidInput("no arms");
  const Vector a = eta * cum_est_loss;
  const Vector shifted = (a.array() - a.minCoeff()).matrix();
  const double s = solve_reciprocal_sum(shifted);
  Vector q = (shifted.array() + s).inverse().matrix();
  return q / q.sum();
}

ScaleFreeMab::ScaleFreeMab(int K)
    : K_(K),
      p_(Vector::Constant(K, 1.0 / K)),
      cum_est_loss_(Vector::Zero(K)),
      eta_(K),
      gamma_(0.5) {
  if (K < 1) throw InvalidInput("bandit needs K >= 1");
}

Vector ScaleFreeMab::sampling_distribution() const {
  return mixed_sampling(p_, gamma_);
}

int ScaleFreeMab::choose_arm(double u) const {
  const Vector pm = sampling_distribution();
  double cumulative = 0.0;
  for (int j = 0; j < K_; ++j) {
    cumulative += pm[j];
    if (u < cumulative) return j;
  }
  return K_ - 1;
}

ScaleFreeMab::Feedback ScaleFreeMab::update(int arm, double observed_loss) {
  Feedback fb;
  fb.p_mixed = sampling_distribution();
  fb.estimate = ips_estimate(observed_loss, arm, fb.p_mixed);
  ++t_;
  fb.stability = stability_term(fb.estimate, p_, eta_).value;
  stability_sum_ += fb.stability;
  gamma_ = exploration_rate(t_, K_);
  eta_ = learning_rate(K_, stability_sum_);
  cum_est_loss_ += fb.estimate;
  p_ = ftrl_update(cum_est_loss_, eta_);
  return fb;
}

double bandit_regret_bound(int K, int T) {
  const double m = std::log(static_cast<double>(T));
  return 54.0 * K * std::sqrt(static_cast<double>(T)) * m * m;
}

double bandit_consumption_bound(int K, int T, double budget) {
  const double m = std::log(static_cast<double>(T));
  return kE * kE *
         (18.0 * K * std::sqrt(static_cast<double>(T)) * m * m * m +
          budget * m);
}

double log10_surrogate_ceiling(int T) {
  const double m = std::log(static_cast<double>(T));
  return m * std::log10(kE * kE * T * m);
}

RunReport run_bandit(const InstanceTrace& trace, std::uint64_t seed,
                     const BanditOptions& options) {
  if (!std::holds_alternative<Simplex>(trace.set.shape())) {
    throw InvalidInput("bandit traces must live on the simplex");
  }
  if (trace.num_resources > 1) {
    throw InvalidInput("bandit learner supports a single resource");
  }
  if (!trace.direction.is_convex() || trace.alpha() != 1.0) {
    throw InvalidInput("bandit traces must be convex losses with alpha = 1");
  }
  if (!(options.loss_divisor > 0.0) || !std::isfinite(options.loss_divisor)) {
    throw InvalidInput("loss divisor must be a positive finite number");
  }
  const int K = trace.set.dimension();
  const int T = trace.horizon;
  for (std::size_t t = 0; t < trace.records.size(); ++t) {
    const auto* lin = std::get_if<LinearRound>(&trace.records[t]);
    const std::string where = "round " + std::to_string(t + 1);
    if (lin == nullptr || lin->cost_offset != 0.0) {
      throw InvalidInput(where + ": bandit rounds must be pure loss vectors");
    }
    auto in_unit = [](const Vector& v) {
      return v.size() == 0 || (v.minCoeff() >= 0.0 && v.maxCoeff() <= 1.0);
    };
    if (!in_unit(lin->cost)) throw InvalidInput(where + ": loss outside [0, 1]");
    for (const auto& c : lin->consumption) {
      if (!in_unit(c)) throw InvalidInput(where + ": consumption outside [0, 1]");
    }
  }

  const BanditParams params =
      bandit_params(K, T, trace.budget, options.schedule);
  const LyapunovFamily lyap = LyapunovFamily::power_law(params.m);
  ScaleFreeMab mab(K);
  double Q = params.Q0;
  double max_surrogate = 0.0;

  RunReport report;
  report.learner = "bandit";
  report.trace_id = trace.id();
  report.orientation = Orientation::kConvex;
  report.alpha = 1.0;
  report.num_resources = 1;
  report.Q0 = {params.Q0};
  report.rows.reserve(static_cast<std::size_t>(T));

  for (int t = 1; t <= T; ++t) {
    const auto& round =
        std::get<LinearRound>(trace.records[static_cast<std::size_t>(t - 1)]);
    const Vector use = round.consumption.empty() ? Vector::Zero(K)
                                                 : round.consumption.front();
    const Vector p_mixed = mab.sampling_distribution();
    const int arm = mab.choose_arm(counter_uniform(seed, 0, t));
    // Only the pulled arm's surrogate reaches the learner; the full vector
    // is computed for the magnitude audit.
    const double phi_prime = lyap.derivative(Q);
    for (int a = 0; a < K; ++a) {
      max_surrogate = std::max(
          max_surrogate, params.V * round.cost[a] + kE * phi_prime * use[a]);
    }
    const double surrogate =
        surrogate_loss(round.cost[arm], use[arm], params.V, lyap, Q);
    Q += use[arm];
    const auto fb = mab.update(arm, surrogate / options.loss_divisor);

    RoundRow row;
    row.t = t;
    row.action = p_mixed;
    row.cost = round.cost.dot(p_mixed);
    row.consumption = {use[arm]};
    row.Q = {Q};
    row.step_size = mab.eta();
    row.gamma = mab.gamma();
    row.arm = arm;
    row.est_loss_norm = fb.estimate.lpNorm<Eigen::Infinity>();
    row.realized_loss = round.cost[arm];
    row.surrogate_loss = surrogate;
    report.rows.push_back(std::move(row));
  }

  report.set_metric("V", params.V);
  report.set_metric("log10_V", params.log10_V);
  report.set_metric("m", params.m);
  report.set_metric("Q0", params.Q0);
  report.set_metric("loss_divisor", options.loss_divisor);
  report.set_metric("total_cost", report.total_cost());
  report.set_metric("cc_0", Q - params.Q0);
  report.set_metric("Q_T", Q);
  report.set_metric("regret_bound", bandit_regret_bound(K, T));
  report.set_metric("cc_bound", bandit_consumption_bound(K, T, trace.budget));
  report.set_metric("max_surrogate_inf", max_surrogate);
  report.set_metric("surrogate_magnitude_bound",
                    params.V + kE * lyap.derivative(Q));
  report.set_metric("log10_surrogate_ceiling", log10_surrogate_ceiling(T));
  return report;
}

}  // namespace cono
