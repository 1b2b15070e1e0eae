#include "rsapi/envs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rsapi/errors.hpp"
#include "rsapi/grid.hpp"

namespace rsapi {

namespace {

// sum_{t=1}^{T-1} gamma^t
double tail_discount(std::size_t horizon, double gamma) {
  double total = 0.0;
  double g = 1.0;
  for (std::size_t t = 1; t < horizon; ++t) {
    g *= gamma;
    total += g;
  }
  return total;
}

void check_action(const MdpSpec& spec, Action a) {
  if (a >= spec.num_actions) throw ContractViolation("action out of range");
}

void check_state(const MdpSpec& spec, const StatePoint& s) {
  if (s.dim() != spec.dim || !s.in_unit_cube()) throw ContractViolation("state outside [0,1]^d");
}

}  // namespace

BestAction best_of(std::span<const double> values) {
  if (values.size() < 2) throw ContractViolation("best_of: need at least two actions");
  std::size_t best = 0;
  for (std::size_t a = 1; a < values.size(); ++a) {
    if (values[a] > values[best]) best = a;
  }
  double second = -INFINITY;
  for (std::size_t a = 0; a < values.size(); ++a) {
    if (a != best) second = std::max(second, values[a]);
  }
  return {static_cast<Action>(best), values[best] - second};
}

Environment::Environment(MdpSpec spec) : spec_(spec) { spec_.validate(); }

double Environment::exact_q(const StatePoint&, Action, std::size_t, double, const Policy&) const {
  throw UnsupportedError(std::string(name()) + " has no closed-form action values");
}

BestAction Environment::exact_best_action(const StatePoint&) const {
  throw UnsupportedError(std::string(name()) + " has no analytic best action");
}

// --- LinearSplit ------------------------------------------------------------

LinearSplitEnv::LinearSplitEnv(std::size_t dim, double gamma, std::size_t horizon)
    : Environment(MdpSpec{dim, 2, gamma, horizon}) {}

StepOutcome LinearSplitEnv::sample(const StatePoint& s, Action a, RngStream& rng) const {
  StepOutcome out;
  out.reward = a == 0 ? s[0] : 1.0 - s[0];
  out.next_state = StatePoint(s.dim());
  for (double& x : out.next_state.coords()) x = rng.uniform();
  return out;
}

double LinearSplitEnv::mean_reward_under(const Policy& policy) const {
  if (dynamic_cast<const ConstantPolicy*>(&policy) != nullptr) return 0.5;
  if (const auto* nn = dynamic_cast<const NearestNeighborPolicy*>(&policy)) {
    // Cells are equal-volume boxes (boundaries have measure zero) and the
    // reward is affine in s_1, so each cell integrates to its centre value.
    const UniformGrid& grid = nn->grid();
    if (grid.dim() != spec().dim) throw ContractViolation("policy grid dimension mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double c = grid.point(i)[0];
      sum += nn->labels()[i] == 0 ? c : 1.0 - c;
    }
    return sum / static_cast<double>(grid.size());
  }
  throw UnsupportedError("linear_split: no closed form for this policy type");
}

double LinearSplitEnv::exact_q(const StatePoint& s, Action a, std::size_t horizon, double gamma,
                               const Policy& policy) const {
  check_rollout_settings(horizon, gamma);
  check_action(spec(), a);
  check_state(spec(), s);
  const double first = a == 0 ? s[0] : 1.0 - s[0];
  if (horizon == 1) return first;
  return first + tail_discount(horizon, gamma) * mean_reward_under(policy);
}

BestAction LinearSplitEnv::exact_best_action(const StatePoint& s) const {
  check_state(spec(), s);
  const double values[2] = {s[0], 1.0 - s[0]};
  return best_of(values);
}

std::optional<SmoothnessParams> LinearSplitEnv::smoothness() const {
  return SmoothnessParams{2.0, 1.0, 1.0, 1.0, spec().dim};
}

// --- ConstantReward ---------------------------------------------------------

ConstantRewardEnv::ConstantRewardEnv(std::size_t dim, std::size_t num_actions, double gamma,
                                     std::size_t horizon)
    : Environment(MdpSpec{dim, num_actions, gamma, horizon}) {}

StepOutcome ConstantRewardEnv::sample(const StatePoint& s, Action, RngStream&) const {
  return {1.0, s};
}

double ConstantRewardEnv::exact_q(const StatePoint& s, Action a, std::size_t horizon, double gamma,
                                  const Policy&) const {
  check_rollout_settings(horizon, gamma);
  check_action(spec(), a);
  check_state(spec(), s);
  return 1.0 + tail_discount(horizon, gamma);
}

BestAction ConstantRewardEnv::exact_best_action(const StatePoint& s) const {
  check_state(spec(), s);
  return {0, 0.0};
}

// --- DriftChain -------------------------------------------------------------

DriftChainEnv::DriftChainEnv(std::size_t dim, double drift, double sigma, double gamma,
                             std::size_t horizon)
    : Environment(MdpSpec{dim, 2, gamma, horizon}), drift_(drift), sigma_(sigma) {
  if (!(drift >= 0.0) || !(sigma >= 0.0)) {
    throw ContractViolation("drift_chain: drift and sigma must be non-negative");
  }
}

StepOutcome DriftChainEnv::sample(const StatePoint& s, Action a, RngStream& rng) const {
  StepOutcome out;
  out.reward = s[0];
  out.next_state = s;
  for (std::size_t k = 0; k < s.dim(); ++k) {
    double x = s[k] + rng.uniform(-sigma_, sigma_);
    if (k == 0) x += a == 0 ? drift_ : -drift_;
    out.next_state[k] = std::clamp(x, 0.0, 1.0);
  }
  return out;
}

// --- oracle and checks ------------------------------------------------------

MonteCarloEstimate brute_force_q(const GenerativeModel& model, const Policy& policy,
                                 const StatePoint& s, Action a, std::size_t horizon, double gamma,
                                 std::size_t samples, RngStream& rng) {
  if (samples < 2) throw ContractViolation("brute_force_q: need at least two samples");
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t k = 1; k <= samples; ++k) {
    StatePoint x = s;
    Action act = a;
    double g = 1.0;
    double ret = 0.0;
    for (std::size_t t = 0; t < horizon; ++t) {
      const StepOutcome step = model.sample(x, act, rng);
      ret += g * step.reward;
      g *= gamma;
      x = step.next_state;
      act = policy.act(x);
    }
    const double delta = ret - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (ret - mean);
  }
  const double n = static_cast<double>(samples);
  return {mean, std::sqrt(m2 / (n - 1.0) / n)};
}

HolderCheck check_holder(const Environment& env, const Policy& policy, std::size_t horizon,
                         double gamma, std::size_t pairs, RngStream& rng) {
  const auto params = env.smoothness();
  if (!params) throw UnsupportedError(std::string(env.name()) + " has no certified constants");
  const std::size_t dim = env.spec().dim;
  HolderCheck out;
  out.pairs = pairs;
  for (std::size_t i = 0; i < pairs; ++i) {
    StatePoint s(dim), t(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      s[k] = rng.uniform();
      t[k] = rng.uniform();
    }
    const double allowed =
        0.5 * params->lipschitz * std::pow(linf_distance(s, t), params->alpha);
    for (Action a = 0; a < env.spec().num_actions; ++a) {
      const double diff = std::abs(env.exact_q(s, a, horizon, gamma, policy) -
                                   env.exact_q(t, a, horizon, gamma, policy));
      if (allowed > 0.0) out.worst_ratio = std::max(out.worst_ratio, diff / allowed);
      if (diff > allowed + 1e-12) ++out.violations;
    }
  }
  return out;
}

MeasureCheck check_measure(const Environment& env, double epsilon, std::size_t points_per_axis) {
  const auto params = env.smoothness();
  if (!params) throw UnsupportedError(std::string(env.name()) + " has no certified constants");
  const UniformGrid lattice(points_per_axis, env.spec().dim);
  std::size_t inside = 0;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    if (env.exact_best_action(lattice.point(i)).gap < epsilon) ++inside;
  }
  MeasureCheck out;
  out.epsilon = epsilon;
  out.measure = static_cast<double>(inside) / static_cast<double>(lattice.size());
  out.bound = params->measure * std::pow(epsilon, params->beta);
  // Two boundary layers of one cell per axis.
  out.quadrature_error =
      2.0 * static_cast<double>(env.spec().dim) / static_cast<double>(points_per_axis);
  return out;
}

std::unique_ptr<Environment> make_environment(std::string_view name, const EnvParams& p) {
  if (name == "linear_split") return std::make_unique<LinearSplitEnv>(p.dim, p.gamma, p.horizon);
  if (name == "constant_reward") {
    return std::make_unique<ConstantRewardEnv>(p.dim, 2, p.gamma, p.horizon);
  }
  if (name == "drift_chain") {
    return std::make_unique<DriftChainEnv>(p.dim, p.drift, p.sigma, p.gamma, p.horizon);
  }
  throw UnsupportedError("unknown environment '" + std::string(name) + "'");
}

std::vector<std::string> environment_names() {
  return {"linear_split", "constant_reward", "drift_chain"};
}

}  // namespace rsapi
