#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cono/approx_convex.hpp"
#include "cono/geometry.hpp"

namespace cono {

/// Affine cost offset + <cost, x> with linear consumptions <consumption[i], x>.
struct LinearRound {
  double cost_offset = 0.0;
  Vector cost;
  std::vector<Vector> consumption;
};

/// One round of online vertex cover: the revealed edge set and vertex prices.
/// Vertices are 0-based.
struct VertexCoverRound {
  int vertices = 0;
  std::vector<std::pair<int, int>> edges;
  Vector prices;
};

/// Serializable description of a round; oracles are rebuilt from it.
using RoundRecord = std::variant<LinearRound, VertexCoverRound>;

struct RoundData {
  SubgradientOracle cost;
  std::vector<SubgradientOracle> consumptions;
};

/// Builds the cost and consumption oracles for a record. For vertex-cover
/// records the cost oracle is the coverage reward with supergradient
/// 0.5 * degree vector.
RoundData make_round_data(const RoundRecord& record);

/// Expected number of covered edges, sum over edges of x_i + x_j - x_i x_j.
double vertex_cover_reward(const VertexCoverRound& round, const Vector& x);
Vector vertex_cover_degrees(const VertexCoverRound& round);

/// A generated instance: per-round oracles plus the constants the learners
/// and verifiers need. Immutable after construction.
struct InstanceTrace {
  std::string family;
  DecisionSet set;
  Direction direction;
  int horizon = 0;
  double budget = 0.0;
  int num_resources = 0;
  /// Uniform subgradient-norm bound before the alpha factor, covering the
  /// cost and every consumption oracle.
  double G = 0.0;
  /// Uniform bound on |f_t| over the decision set.
  double F = 0.0;
  std::uint64_t seed = 0;
  /// A fixed action meeting every long-term budget.
  Vector witness;
  std::vector<RoundRecord> records;
  std::vector<RoundData> rounds;
  std::vector<std::pair<std::string, std::string>> metadata;

  double alpha() const { return direction.alpha(); }
  /// Stable content fingerprint; reports carry it to detect mismatches.
  std::string id() const;
  std::string meta(const std::string& key, const std::string& fallback = "") const;
};

/// Assembles a trace from explicit rounds (e.g. a user-supplied adversarial
/// schedule), deriving G, F and oracles and validating the witness.
InstanceTrace make_trace(std::string family, DecisionSet set,
                         Direction direction, std::vector<RoundRecord> records,
                         double budget, Vector witness, std::uint64_t seed,
                         std::vector<std::pair<std::string, std::string>>
                             metadata = {});

/// Default budget rule for generated instances, B_T = sqrt(T).
double default_budget(int horizon);

InstanceTrace gen_vertex_cover(int vertices, int horizon, double edge_prob,
                               std::pair<double, double> price_range,
                               double budget, std::uint64_t seed);

enum class LinearShape {
  /// f_t(x) = <a_t, x>; the zero action is optimal and feasible.
  kIncreasing,
  /// f_t(x) = <a_t, 1 - x>; cost falls as consumption rises.
  kDecreasing,
};

InstanceTrace gen_linear(int dimension, int horizon, double budget,
                         int num_resources, std::uint64_t seed,
                         LinearShape shape = LinearShape::kIncreasing);

/// Phased two-arm family I_tau on [0, 1] (probability of the paying arm).
/// The budget must be a positive integer; the horizon is rounded down to a
/// multiple of it and the original recorded in metadata.
InstanceTrace gen_bwk_lowerbound(int horizon, double budget, int tau);

/// K-armed stochastic bandit instance on the simplex with losses and
/// consumptions in [0, 1]. Arm 0 has the lowest mean loss and never consumes.
InstanceTrace gen_stochastic_bandit(int arms, int horizon, double budget,
                                    std::uint64_t seed);

/// Largest singular value by power iteration on Phi^T Phi. Stops when the
/// relative eigen-residual drops below `rel_tol`; throws NumericError after
/// `max_iterations`.
double operator_norm(const Matrix& phi, double rel_tol = 1e-10,
                     int max_iterations = 10000);

/// l2-regularized phase retrieval f(x) = 0.5 ||y - |Phi x|||^2 +
/// 0.5 lambda ||x||^2 with its convex lower witness g and alpha = 1 + 1/gamma,
/// gamma = lambda / ||Phi||^2.
class PhaseRetrieval {
 public:
  PhaseRetrieval(Matrix phi, Vector y, double lambda, DecisionSet set);

  double value(const Vector& x) const;
  /// Witness assembled as constant + PSD quadratic + squared-hinge terms.
  double witness(const Vector& x) const;
  /// Witness from its defining formula, f - (1+gamma)/2 ||(y/(1+gamma) - |Phi x|)_+||^2.
  double witness_by_definition(const Vector& x) const;
  Vector witness_subgradient(const Vector& x) const;

  double lambda() const { return lambda_; }
  double gamma() const { return gamma_; }
  double alpha() const { return 1.0 + 1.0 / gamma_; }
  double phi_norm() const { return phi_norm_; }
  const Matrix& phi() const { return phi_; }
  const Vector& measurements() const { return y_; }
  const Vector& planted() const { return planted_; }
  const DecisionSet& set() const { return set_; }

  ScalarFn f_fn() const;
  ScalarFn g_fn() const;
  VectorFn g_subgrad_fn() const;
  /// Generalized subgradient oracle alpha * grad g with a sampled norm bound.
  SubgradientOracle oracle(std::size_t bound_samples = 10000,
                           std::uint64_t seed = 0) const;

 private:
  friend PhaseRetrieval gen_phase_retrieval(int, int, double, DecisionSet,
                                            std::uint64_t);
  Matrix phi_;
  Vector y_;
  Vector planted_;
  double lambda_;
  DecisionSet set_;
  double phi_norm_;
  double gamma_;
  Matrix psd_part_;  // lambda (I - Phi^T Phi / ||Phi||^2)
};

/// Gaussian Phi (m x n), planted x0 drawn uniformly in the set, y = |Phi x0|.
PhaseRetrieval gen_phase_retrieval(int measurements, int dimension,
                                   double lambda, DecisionSet set,
                                   std::uint64_t seed);

/// Same draw as gen_phase_retrieval with lambda = gamma ||Phi||^2.
PhaseRetrieval gen_phase_retrieval_for_gamma(int measurements, int dimension,
                                             double gamma, DecisionSet set,
                                             std::uint64_t seed);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre(int num_nodes);

/// Non-oblivious gradient: integral over z in [0, 1] of
/// exp(gamma (z - 1)) grad F(z x), by Gauss-Legendre quadrature.
Vector non_oblivious_grad(const VectorFn& grad_F, double gamma, const Vector& x,
                          int num_nodes = 32);

/// Plain-text round-record format (see README): one header block and one
/// `round` line per round. Doubles use 17 significant digits.
void write_trace(std::ostream& out, const InstanceTrace& trace);
InstanceTrace read_trace(std::istream& in);

}  // namespace cono
