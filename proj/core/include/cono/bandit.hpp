#pragma once

#include <cstdint>
#include <utility>

#include "cono/full_info.hpp"
#include "cono/geometry.hpp"
#include "cono/instances.hpp"
#include "cono/report.hpp"

namespace cono {

enum class VSchedule {
  /// (m e (18 K sqrt(T) ln^2 T + B))^m / (36 K sqrt(T) ln^2 T)
  kProof,
  /// (e (18 K sqrt(T) ln^3 T + B ln T))^{ln T} / (36 K sqrt(T) ln^2 T)
  kAlgorithmLine,
};

struct BanditParams {
  double V = 0.0;
  double m = 0.0;
  double Q0 = 0.0;
  double log10_V = 0.0;
};

/// Scheduled constants with log10(V) computed in the log domain. Throws
/// NumericError if log10(V) exceeds kMaxLog10.
BanditParams bandit_params(int K, int T, double budget,
                           VSchedule schedule = VSchedule::kProof);
inline constexpr double kMaxLog10 = 300.0;

double exploration_rate(int t, int K);
Vector mixed_sampling(const Vector& p, double gamma);
Vector ips_estimate(double observed_loss, int arm, const Vector& p_mixed);
double learning_rate(int K, double stability_sum);
double surrogate_loss(double loss, double consumption, double V,
                      const LyapunovFamily& lyapunov, double Q_prev);

/// Root s in (0, max(1, K)] of sum_j 1 / (a_j + s) = 1 for a_j >= 0 with
/// min_j a_j = 0. Safeguarded Newton with a bisection fallback.
double solve_reciprocal_sum(const Vector& a);

struct StabilityResult {
  double value = 0.0;
  Vector maximizer;
};

/// sup over the simplex of l^T (p - q) - B(q, p) / eta for the log-barrier
/// Bregman divergence. The value is clamped at 0 (q = p is feasible).
StabilityResult stability_term(const Vector& est_loss, const Vector& p,
                               double eta);

/// argmin over the simplex of sum_j -ln q_j + eta <q, L>.
Vector ftrl_update(const Vector& cum_est_loss, double eta);

/// Scale-free MAB state: log-barrier FTRL with IPS estimates and adaptive
/// eta and gamma.
class ScaleFreeMab {
 public:
  explicit ScaleFreeMab(int K);

  int arms() const { return K_; }
  int round() const { return t_; }
  const Vector& p() const { return p_; }
  double eta() const { return eta_; }
  double gamma() const { return gamma_; }
  double stability_sum() const { return stability_sum_; }
  const Vector& cum_est_loss() const { return cum_est_loss_; }

  /// Sampling distribution p'_t for the coming round.
  Vector sampling_distribution() const;
  /// Picks an arm by inverse CDF of p'_t at uniform draw u in [0, 1).
  int choose_arm(double u) const;

  struct Feedback {
    Vector p_mixed;
    Vector estimate;
    double stability = 0.0;
  };
  /// Processes the observed loss of the pulled arm and advances to t + 1.
  Feedback update(int arm, double observed_loss);

 private:
  int K_;
  int t_ = 0;
  Vector p_;
  Vector cum_est_loss_;
  double eta_;
  double gamma_;
  double stability_sum_ = 0.0;
};

struct BanditOptions {
  VSchedule schedule = VSchedule::kProof;
  /// Surrogate losses are divided by this before reaching the MAB.
  double loss_divisor = 1.0;
};

/// Budgeted bandit learner on a K-armed trace (simplex set, linear rounds
/// with zero offset and at most one resource). Randomness is counter-based
/// in (seed, round).
RunReport run_bandit(const InstanceTrace& trace, std::uint64_t seed,
                     const BanditOptions& options = {});

double bandit_regret_bound(int K, int T);
double bandit_consumption_bound(int K, int T, double budget);
/// (e^2 T ln T)^{ln T}, returned as log10.
double log10_surrogate_ceiling(int T);

}  // namespace cono
