#include "cono/instances.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "cono/error.hpp"

namespace cono {

namespace {

SubgradientOracle linear_oracle(double offset, Vector coeffs) {
  SubgradientOracle o;
  o.norm_bound = coeffs.norm();
  o.eval = [offset, coeffs](const Vector& x) {
    return offset + coeffs.dot(x);
  };
  o.subgrad = [coeffs](const Vector&) -> Vector { return coeffs; };
  return o;
}

// Max and min of offset + <c, x> over the set.
std::pair<double, double> affine_range(const DecisionSet& set, double offset,
                                       const Vector& c) {
  if (std::holds_alternative<Simplex>(set.shape())) {
    return {offset + c.minCoeff(), offset + c.maxCoeff()};
  }
  const Vector lo = set.lower_bounds();
  const Vector hi = set.upper_bounds();
  double mn = offset;
  double mx = offset;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    mn += std::min(c[i] * lo[i], c[i] * hi[i]);
    mx += std::max(c[i] * lo[i], c[i] * hi[i]);
  }
  return {mn, mx};
}

void require_dim(const Vector& v, int d, const char* what) {
  if (v.size() != d) {
    throw InvalidInput(std::string(what) + ": expected dimension " +
                       std::to_string(d) + ", got " + std::to_string(v.size()));
  }
}

void validate_record(const RoundRecord& record, const DecisionSet& set,
                     int num_resources) {
  const int d = set.dimension();
  if (const auto* lin = std::get_if<LinearRound>(&record)) {
    require_dim(lin->cost, d, "cost coefficients");
    if (static_cast<int>(lin->consumption.size()) != num_resources) {
      throw InvalidInput("every round must carry the same resource count");
    }
    if (affine_range(set, lin->cost_offset, lin->cost).first < -1e-12) {
      throw InvalidInput("cost must be nonnegative on the decision set");
    }
    for (const auto& b : lin->consumption) {
      require_dim(b, d, "consumption coefficients");
      if (affine_range(set, 0.0, b).first < -1e-12) {
        throw InvalidInput("consumption must be nonnegative on the set");
      }
    }
    return;
  }
  const auto& vc = std::get<VertexCoverRound>(record);
  if (vc.vertices != d) throw InvalidInput("vertex count must match the set");
  require_dim(vc.prices, d, "prices");
  if (num_resources != 1) {
    throw InvalidInput("vertex cover has exactly one resource");
  }
  if (vc.prices.size() > 0 && vc.prices.minCoeff() < 0.0) {
    throw InvalidInput("prices must be nonnegative");
  }
  for (const auto& [i, j] : vc.edges) {
    if (i < 0 || j < 0 || i >= d || j >= d || i == j) {
      throw InvalidInput("edge endpoints out of range");
    }
  }
}

int resource_count(const RoundRecord& record) {
  if (const auto* lin = std::get_if<LinearRound>(&record)) {
    return static_cast<int>(lin->consumption.size());
  }
  return 1;
}

void hash_bytes(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
}

void hash_double(std::uint64_t& h, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  hash_bytes(h, &bits, sizeof bits);
}

void hash_vector(std::uint64_t& h, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) hash_double(h, v[i]);
}

}  // namespace

double vertex_cover_reward(const VertexCoverRound& round, const Vector& x) {
  double total = 0.0;
  for (const auto& [i, j] : round.edges) {
    total += x[i] + x[j] - x[i] * x[j];
  }
  return total;
}

Vector vertex_cover_degrees(const VertexCoverRound& round) {
  Vector deg = Vector::Zero(round.vertices);
  for (const auto& [i, j] : round.edges) {
    deg[i] += 1.0;
    deg[j] += 1.0;
  }
  return deg;
}

RoundData make_round_data(const RoundRecord& record) {
  RoundData data;
  if (const auto* lin = std::get_if<LinearRound>(&record)) {
    data.cost = linear_oracle(lin->cost_offset, lin->cost);
    for (const auto& b : lin->consumption) {
      data.consumptions.push_back(linear_oracle(0.0, b));
    }
    return data;
  }
  const auto& vc = std::get<VertexCoverRound>(record);
  const Vector half_degree = 0.5 * vertex_cover_degrees(vc);
  data.cost.norm_bound = half_degree.norm();
  data.cost.eval = [vc](const Vector& x) { return vertex_cover_reward(vc, x); };
  data.cost.subgrad = [half_degree](const Vector&) -> Vector {
    return half_degree;
  };
  data.consumptions.push_back(linear_oracle(0.0, vc.prices));
  return data;
}

std::string InstanceTrace::id() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  hash_bytes(h, family.data(), family.size());
  hash_bytes(h, &seed, sizeof seed);
  hash_bytes(h, &horizon, sizeof horizon);
  hash_double(h, budget);
  for (const auto& record : records) {
    if (const auto* lin = std::get_if<LinearRound>(&record)) {
      hash_double(h, lin->cost_offset);
      hash_vector(h, lin->cost);
      for (const auto& b : lin->consumption) hash_vector(h, b);
    } else {
      const auto& vc = std::get<VertexCoverRound>(record);
      for (const auto& [i, j] : vc.edges) {
        hash_bytes(h, &i, sizeof i);
        hash_bytes(h, &j, sizeof j);
      }
      hash_vector(h, vc.prices);
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return family + "-" + buf;
}

std::string InstanceTrace::meta(const std::string& key,
                                const std::string& fallback) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return fallback;
}

InstanceTrace make_trace(std::string family, DecisionSet set,
                         Direction direction, std::vector<RoundRecord> records,
                         double budget, Vector witness, std::uint64_t seed,
                         std::vector<std::pair<std::string, std::string>>
                             metadata) {
  if (records.empty()) throw InvalidInput("a trace needs at least one round");
  if (!(budget >= 0.0)) throw InvalidInput("budget must be >= 0");
  const int k = resource_count(records.front());
  std::vector<RoundData> rounds;
  rounds.reserve(records.size());
  double max_norm = 0.0;
  double max_value = 0.0;
  std::vector<double> witness_use(static_cast<std::size_t>(k), 0.0);
  require_dim(witness, set.dimension(), "witness");
  if (!set.contains(witness)) throw InvalidInput("witness outside the set");

  for (const auto& record : records) {
    validate_record(record, set, k);
    RoundData data = make_round_data(record);
    max_norm = std::max(max_norm, data.cost.norm_bound);
    for (int i = 0; i < k; ++i) {
      max_norm = std::max(max_norm, data.consumptions[i].norm_bound);
      witness_use[static_cast<std::size_t>(i)] +=
          data.consumptions[i].eval(witness);
    }
    if (const auto* lin = std::get_if<LinearRound>(&record)) {
      max_value = std::max(
          max_value, affine_range(set, lin->cost_offset, lin->cost).second);
    } else {
      // Coverage reward is monotone, so the all-ones action maximizes it.
      max_value = std::max(
          max_value,
          static_cast<double>(std::get<VertexCoverRound>(record).edges.size()));
    }
    rounds.push_back(std::move(data));
  }
  for (double use : witness_use) {
    if (use > budget + 1e-9) {
      throw InfeasibleError("witness action exceeds the budget");
    }
  }
  InstanceTrace trace{
      .family = std::move(family),
      .set = std::move(set),
      .direction = direction,
      .horizon = static_cast<int>(records.size()),
      .budget = budget,
      .num_resources = k,
      .G = max_norm / direction.alpha(),
      .F = max_value,
      .seed = seed,
      .witness = std::move(witness),
      .records = std::move(records),
      .rounds = std::move(rounds),
      .metadata = std::move(metadata),
  };
  return trace;
}

double default_budget(int horizon) {
  return std::sqrt(static_cast<double>(horizon));
}

InstanceTrace gen_vertex_cover(int vertices, int horizon, double edge_prob,
                               std::pair<double, double> price_range,
                               double budget, std::uint64_t seed) {
  if (vertices < 2) throw InvalidInput("vertex cover needs n >= 2");
  if (horizon < 1) throw InvalidInput("horizon must be >= 1");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) {
    throw InvalidInput("edge probability must lie in [0, 1]");
  }
  const auto [lo, hi] = price_range;
  if (!(lo >= 0.0 && lo <= hi && std::isfinite(hi))) {
    throw InvalidInput("price range must satisfy 0 <= lo <= hi");
  }
  Rng rng(seed);
  std::vector<RoundRecord> records;
  records.reserve(static_cast<std::size_t>(horizon));
  for (int t = 0; t < horizon; ++t) {
    VertexCoverRound round;
    round.vertices = vertices;
    for (int i = 0; i < vertices; ++i) {
      for (int j = i + 1; j < vertices; ++j) {
        if (rng.bernoulli(edge_prob)) round.edges.emplace_back(i, j);
      }
    }
    round.prices.resize(vertices);
    for (int i = 0; i < vertices; ++i) round.prices[i] = rng.uniform(lo, hi);
    records.emplace_back(std::move(round));
  }
  return make_trace("vertex_cover", DecisionSet::unit_box(vertices),
                    Direction::concave(0.5), std::move(records), budget,
                    Vector::Zero(vertices), seed,
                    {{"edge_prob", std::to_string(edge_prob)}});
}

InstanceTrace gen_linear(int dimension, int horizon, double budget,
                         int num_resources, std::uint64_t seed,
                         LinearShape shape) {
  if (dimension < 1) throw InvalidInput("dimension must be >= 1");
  if (horizon < 1) throw InvalidInput("horizon must be >= 1");
  if (num_resources < 0) throw InvalidInput("resource count must be >= 0");
  Rng rng(seed);
  std::vector<RoundRecord> records;
  records.reserve(static_cast<std::size_t>(horizon));
  for (int t = 0; t < horizon; ++t) {
    LinearRound round;
    round.cost.resize(dimension);
    for (int i = 0; i < dimension; ++i) round.cost[i] = rng.uniform();
    if (shape == LinearShape::kDecreasing) {
      round.cost_offset = round.cost.sum();
      round.cost = -round.cost;
    }
    for (int r = 0; r < num_resources; ++r) {
      Vector b(dimension);
      for (int i = 0; i < dimension; ++i) b[i] = rng.uniform();
      round.consumption.push_back(std::move(b));
    }
    records.emplace_back(std::move(round));
  }
  return make_trace(
      shape == LinearShape::kIncreasing ? "linear" : "linear_decreasing",
      DecisionSet::unit_box(dimension), Direction::convex(1.0),
      std::move(records), budget, Vector::Zero(dimension), seed);
}

InstanceTrace gen_bwk_lowerbound(int horizon, double budget, int tau) {
  if (!(budget >= 1.0) || budget != std::floor(budget)) {
    throw InvalidInput("lower-bound family needs a positive integer budget");
  }
  const int phase = static_cast<int>(budget);
  if (horizon < phase) throw InvalidInput("horizon shorter than one phase");
  const int effective = (horizon / phase) * phase;
  const int phases = effective / phase;
  if (tau < 1 || tau > phases) {
    throw InvalidInput("tau must lie in [1, " + std::to_string(phases) + "]");
  }
  std::vector<RoundRecord> records;
  records.reserve(static_cast<std::size_t>(effective));
  for (int t = 0; t < effective; ++t) {
    const int sigma = t / phase + 1;
    LinearRound round;
    const double reward =
        sigma <= tau ? sigma * budget / static_cast<double>(effective) : 0.0;
    round.cost = Vector::Constant(1, reward);
    round.consumption.push_back(Vector::Ones(1));
    records.emplace_back(std::move(round));
  }
  std::vector<std::pair<std::string, std::string>> meta{
      {"tau", std::to_string(tau)},
      {"phases", std::to_string(phases)},
      {"requested_horizon", std::to_string(horizon)}};
  return make_trace("bwk_lowerbound", DecisionSet::interval(0.0, 1.0),
                    Direction::concave(1.0), std::move(records), budget,
                    Vector::Constant(1, budget / effective),
                    static_cast<std::uint64_t>(tau), std::move(meta));
}

InstanceTrace gen_stochastic_bandit(int arms, int horizon, double budget,
                                    std::uint64_t seed) {
  if (arms < 1) throw InvalidInput("need at least one arm");
  if (horizon < 1) throw InvalidInput("horizon must be >= 1");
  Vector loss_mean(arms);
  Vector use_mean(arms);
  for (int a = 0; a < arms; ++a) {
    const double s = arms == 1 ? 0.0 : double(a) / (arms - 1);
    loss_mean[a] = 0.35 + 0.3 * s;
    use_mean[a] = a == 0 ? 0.0 : 0.3 + 0.5 * s;
  }
  Rng rng(seed);
  std::vector<RoundRecord> records;
  records.reserve(static_cast<std::size_t>(horizon));
  for (int t = 0; t < horizon; ++t) {
    LinearRound round;
    round.cost.resize(arms);
    Vector use(arms);
    for (int a = 0; a < arms; ++a) {
      round.cost[a] = std::clamp(loss_mean[a] + rng.uniform(-0.2, 0.2), 0.0, 1.0);
      const double noise = rng.uniform(-0.2, 0.2);
      use[a] = a == 0 ? 0.0 : std::clamp(use_mean[a] + noise, 0.0, 1.0);
    }
    round.consumption.push_back(std::move(use));
    records.emplace_back(std::move(round));
  }
  Vector witness = Vector::Zero(arms);
  witness[0] = 1.0;
  return make_trace("bandit", DecisionSet::simplex(arms),
                    Direction::convex(1.0), std::move(records), budget,
                    std::move(witness), seed);
}

double operator_norm(const Matrix& phi, double rel_tol, int max_iterations) {
  if (phi.size() == 0 || phi.isZero(0.0)) {
    throw InvalidInput("operator_norm requires a nonzero matrix");
  }
  const Matrix gram = phi.transpose() * phi;
  const Eigen::Index n = gram.rows();
  // Fixed, generic start vector so that the result is deterministic.
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v[i] = 1.0 + 0.5 * counter_uniform(0x5eed, 0, static_cast<std::uint64_t>(i));
  }
  v.normalize();
  for (int it = 1; it <= max_iterations; ++it) {
    const Vector w = gram * v;
    const double mu = v.dot(w);
    const double residual = (w - mu * v).norm();
    if (mu > 0.0 && residual <= rel_tol * mu) return std::sqrt(mu);
    const double wn = w.norm();
    if (wn == 0.0) {
      throw NumericError("power iteration collapsed to zero at iteration " +
                         std::to_string(it));
    }
    v = w / wn;
  }
  throw NumericError("power iteration did not converge in " +
                     std::to_string(max_iterations) + " iterations");
}

PhaseRetrieval::PhaseRetrieval(Matrix phi, Vector y, double lambda,
                               DecisionSet set)
    : phi_(std::move(phi)),
      y_(std::move(y)),
      lambda_(lambda),
      set_(std::move(set)),
      phi_norm_(0.0),
      gamma_(0.0) {
  if (!(lambda > 0.0)) throw InvalidInput("lambda must be > 0");
  if (y_.size() != phi_.rows()) throw InvalidInput("y must have m entries");
  if (y_.size() > 0 && y_.minCoeff() < 0.0) {
    throw InvalidInput("measurements must be nonnegative");
  }
  if (set_.dimension() != phi_.cols()) {
    throw InvalidInput("set dimension must equal the signal dimension");
  }
  phi_norm_ = operator_norm(phi_);
  gamma_ = lambda_ / (phi_norm_ * phi_norm_);
  const Eigen::Index n = phi_.cols();
  psd_part_ = lambda_ * (Matrix::Identity(n, n) -
                         phi_.transpose() * phi_ / (phi_norm_ * phi_norm_));
}

double PhaseRetrieval::value(const Vector& x) const {
  const Vector residual = y_ - (phi_ * x).cwiseAbs();
  return 0.5 * residual.squaredNorm() + 0.5 * lambda_ * x.squaredNorm();
}

double PhaseRetrieval::witness(const Vector& x) const {
  const double constant = y_.squaredNorm() * gamma_ / (2.0 * (1.0 + gamma_));
  const double quadratic = 0.5 * x.dot(psd_part_ * x);
  const Vector u = phi_ * x;
  double hinge = 0.0;
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    const double h = std::max(0.0, std::abs(u[j]) - y_[j] / (1.0 + gamma_));
    hinge += h * h;
  }
  return constant + quadratic + 0.5 * (1.0 + gamma_) * hinge;
}

double PhaseRetrieval::witness_by_definition(const Vector& x) const {
  const Vector gap =
      (y_ / (1.0 + gamma_) - (phi_ * x).cwiseAbs()).cwiseMax(0.0);
  return value(x) - 0.5 * (1.0 + gamma_) * gap.squaredNorm();
}

Vector PhaseRetrieval::witness_subgradient(const Vector& x) const {
  Vector grad = psd_part_ * x;
  const Vector u = phi_ * x;
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    const double h = std::max(0.0, std::abs(u[j]) - y_[j] / (1.0 + gamma_));
    // sign(0) = 0 picks the zero element of the subdifferential of |.|.
    const double sign = u[j] > 0.0 ? 1.0 : (u[j] < 0.0 ? -1.0 : 0.0);
    if (h > 0.0) grad += (1.0 + gamma_) * h * sign * phi_.row(j).transpose();
  }
  return grad;
}

ScalarFn PhaseRetrieval::f_fn() const {
  return [self = *this](const Vector& x) { return self.value(x); };
}

ScalarFn PhaseRetrieval::g_fn() const {
  return [self = *this](const Vector& x) { return self.witness(x); };
}

VectorFn PhaseRetrieval::g_subgrad_fn() const {
  return [self = *this](const Vector& x) -> Vector {
    return self.witness_subgradient(x);
  };
}

SubgradientOracle PhaseRetrieval::oracle(std::size_t bound_samples,
                                         std::uint64_t seed) const {
  const double bound =
      sampled_norm_sup(g_subgrad_fn(), set_, bound_samples, seed);
  return subgrad_from_witness(f_fn(), g_subgrad_fn(), alpha(), bound);
}

PhaseRetrieval gen_phase_retrieval(int measurements, int dimension,
                                   double lambda, DecisionSet set,
                                   std::uint64_t seed) {
  if (measurements < 1 || dimension < 1) {
    throw InvalidInput("phase retrieval needs m >= 1 and n >= 1");
  }
  if (!(lambda > 0.0)) throw InvalidInput("lambda must be > 0");
  if (set.dimension() != dimension) {
    throw InvalidInput("set dimension must equal n");
  }
  Rng rng(seed);
  Matrix phi(measurements, dimension);
  for (int i = 0; i < measurements; ++i) {
    for (int j = 0; j < dimension; ++j) phi(i, j) = rng.standard_normal();
  }
  Vector planted = set.sample(rng);
  Vector y = (phi * planted).cwiseAbs();
  PhaseRetrieval problem(std::move(phi), std::move(y), lambda, std::move(set));
  problem.planted_ = std::move(planted);
  return problem;
}

PhaseRetrieval gen_phase_retrieval_for_gamma(int measurements, int dimension,
                                             double gamma, DecisionSet set,
                                             std::uint64_t seed) {
  if (!(gamma > 0.0)) throw InvalidInput("gamma must be > 0");
  // Draw once with a placeholder lambda to read off ||Phi||.
  const PhaseRetrieval probe =
      gen_phase_retrieval(measurements, dimension, 1.0, set, seed);
  const double lambda = gamma * probe.phi_norm() * probe.phi_norm();
  return gen_phase_retrieval(measurements, dimension, lambda, std::move(set),
                             seed);
}

QuadratureRule gauss_legendre(int num_nodes) {
  if (num_nodes < 1) throw InvalidInput("quadrature needs >= 1 node");
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(num_nodes));
  rule.weights.resize(static_cast<std::size_t>(num_nodes));
  const int n = num_nodes;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Three-term recurrence for P_n(z) and its derivative.
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? z : p1;
      const double pn1 = n == 1 ? 1.0 : p0;
      dp = n * (z * pn - pn1) / (z * z - 1.0);
      const double step = pn / dp;
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -z;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = z;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return rule;
}

Vector non_oblivious_grad(const VectorFn& grad_F, double gamma, const Vector& x,
                          int num_nodes) {
  if (!(gamma > 0.0)) throw InvalidInput("gamma must be > 0");
  if (num_nodes < 2) throw InvalidInput("quadrature needs >= 2 nodes");
  const QuadratureRule rule = gauss_legendre(num_nodes);
  Vector total = Vector::Zero(x.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double z = 0.5 * (rule.nodes[i] + 1.0);
    const double w = 0.5 * rule.weights[i] * std::exp(gamma * (z - 1.0));
    total += w * grad_F(z * x);
  }
  return total;
}

namespace {

void put(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << ' ' << buf;
}

void put_vector(std::ostream& out, const Vector& v) {
  out << ' ' << v.size();
  for (Eigen::Index i = 0; i < v.size(); ++i) put(out, v[i]);
}

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw InvalidInput("trace line " + std::to_string(line) + ": " + what);
}

struct LineReader {
  std::istream& in;
  int line_no = 0;

  // Next non-empty, non-comment line split into a stream.
  bool next(std::istringstream& fields) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line[0] == '#') continue;
      fields.clear();
      fields.str(line);
      return true;
    }
    return false;
  }
};

template <class T>
T take(std::istringstream& fields, int line, const char* what) {
  T value;
  if (!(fields >> value)) parse_fail(line, std::string("expected ") + what);
  return value;
}

Vector take_vector(std::istringstream& fields, int line, const char* what) {
  const auto n = take<long>(fields, line, what);
  if (n < 0) parse_fail(line, "negative length");
  Vector v(n);
  for (long i = 0; i < n; ++i) v[i] = take<double>(fields, line, what);
  return v;
}

}  // namespace

void write_trace(std::ostream& out, const InstanceTrace& trace) {
  out << "cono-trace 1\n";
  out << "family " << trace.family << '\n';
  out << "seed " << trace.seed << '\n';
  out << "budget";
  put(out, trace.budget);
  out << "\ndirection " << (trace.direction.is_convex() ? "convex" : "concave");
  put(out, trace.alpha());
  out << "\nset ";
  std::visit(
      [&out](const auto& shape) {
        using S = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<S, Box>) {
          out << "box";
          put_vector(out, shape.lower);
          put_vector(out, shape.upper);
        } else if constexpr (std::is_same_v<S, Simplex>) {
          out << "simplex " << shape.dimension;
        } else {
          out << "interval";
          put(out, shape.lo);
          put(out, shape.hi);
        }
      },
      trace.set.shape());
  out << "\nwitness";
  put_vector(out, trace.witness);
  out << '\n';
  for (const auto& [k, v] : trace.metadata) out << "meta " << k << ' ' << v << '\n';
  out << "rounds " << trace.horizon << '\n';
  for (std::size_t t = 0; t < trace.records.size(); ++t) {
    out << "round " << t + 1;
    if (const auto* lin = std::get_if<LinearRound>(&trace.records[t])) {
      out << " linear";
      put(out, lin->cost_offset);
      put_vector(out, lin->cost);
      out << ' ' << lin->consumption.size();
      for (const auto& b : lin->consumption) put_vector(out, b);
    } else {
      const auto& vc = std::get<VertexCoverRound>(trace.records[t]);
      out << " vertex_cover " << vc.vertices << ' ' << vc.edges.size();
      for (const auto& [i, j] : vc.edges) out << ' ' << i << ' ' << j;
      put_vector(out, vc.prices);
    }
    out << '\n';
  }
  out << "end\n";
}

InstanceTrace read_trace(std::istream& in) {
  LineReader reader{in};
  std::istringstream f;
  auto expect_key = [&](const char* key) {
    if (!reader.next(f)) parse_fail(reader.line_no, std::string("missing ") + key);
    const auto got = take<std::string>(f, reader.line_no, key);
    if (got != key) parse_fail(reader.line_no, "expected '" + std::string(key) + "', got '" + got + "'");
  };
  expect_key("cono-trace");
  if (take<int>(f, reader.line_no, "version") != 1) {
    parse_fail(reader.line_no, "unsupported trace version");
  }
  expect_key("family");
  auto family = take<std::string>(f, reader.line_no, "family name");
  expect_key("seed");
  const auto seed = take<std::uint64_t>(f, reader.line_no, "seed");
  expect_key("budget");
  const auto budget = take<double>(f, reader.line_no, "budget");
  expect_key("direction");
  const auto orient = take<std::string>(f, reader.line_no, "orientation");
  const auto alpha = take<double>(f, reader.line_no, "alpha");
  if (orient != "convex" && orient != "concave") {
    parse_fail(reader.line_no, "orientation must be convex or concave");
  }
  const Direction direction =
      orient == "convex" ? Direction::convex(alpha) : Direction::concave(alpha);
  expect_key("set");
  const auto kind = take<std::string>(f, reader.line_no, "set kind");
  const int set_line = reader.line_no;
  auto set = [&]() {
    if (kind == "box") {
      Vector lo = take_vector(f, set_line, "box lower");
      Vector hi = take_vector(f, set_line, "box upper");
      return DecisionSet::box(std::move(lo), std::move(hi));
    }
    if (kind == "simplex") {
      return DecisionSet::simplex(take<int>(f, set_line, "simplex dimension"));
    }
    if (kind == "interval") {
      const auto lo = take<double>(f, set_line, "interval lo");
      return DecisionSet::interval(lo, take<double>(f, set_line, "interval hi"));
    }
    parse_fail(set_line, "unknown set kind '" + kind + "'");
  }();
  expect_key("witness");
  Vector witness = take_vector(f, reader.line_no, "witness");

  std::vector<std::pair<std::string, std::string>> metadata;
  int horizon = -1;
  while (reader.next(f)) {
    const auto key = take<std::string>(f, reader.line_no, "key");
    if (key == "meta") {
      auto name = take<std::string>(f, reader.line_no, "meta key");
      std::string value;
      std::getline(f >> std::ws, value);
      metadata.emplace_back(std::move(name), std::move(value));
    } else if (key == "rounds") {
      horizon = take<int>(f, reader.line_no, "round count");
      break;
    } else {
      parse_fail(reader.line_no, "unexpected '" + key + "'");
    }
  }
  if (horizon < 1) parse_fail(reader.line_no, "missing or invalid round count");

  std::vector<RoundRecord> records;
  records.reserve(static_cast<std::size_t>(horizon));
  for (int t = 1; t <= horizon; ++t) {
    expect_key("round");
    const int line = reader.line_no;
    if (take<int>(f, line, "round index") != t) parse_fail(line, "rounds out of order");
    const auto tag = take<std::string>(f, line, "family tag");
    if (tag == "linear") {
      LinearRound round;
      round.cost_offset = take<double>(f, line, "cost offset");
      round.cost = take_vector(f, line, "cost");
      const auto k = take<int>(f, line, "resource count");
      for (int i = 0; i < k; ++i) round.consumption.push_back(take_vector(f, line, "consumption"));
      records.emplace_back(std::move(round));
    } else if (tag == "vertex_cover") {
      VertexCoverRound round;
      round.vertices = take<int>(f, line, "vertex count");
      const auto m = take<int>(f, line, "edge count");
      for (int e = 0; e < m; ++e) {
        const auto i = take<int>(f, line, "edge endpoint");
        round.edges.emplace_back(i, take<int>(f, line, "edge endpoint"));
      }
      round.prices = take_vector(f, line, "prices");
      records.emplace_back(std::move(round));
    } else {
      parse_fail(line, "unknown round family '" + tag + "'");
    }
  }
  expect_key("end");
  return make_trace(std::move(family), std::move(set), direction,
                    std::move(records), budget, std::move(witness), seed,
                    std::move(metadata));
}

}  // namespace cono
