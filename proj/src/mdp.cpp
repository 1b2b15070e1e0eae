#include "rsapi/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rsapi/errors.hpp"

namespace rsapi {

StatePoint::StatePoint(std::size_t dim, double fill) : dim_(dim) {
  if (dim == 0 || dim > kMaxStateDim) {
    throw ContractViolation("state dimension must be in [1, " + std::to_string(kMaxStateDim) +
                            "], got " + std::to_string(dim));
  }
  std::fill_n(coords_.begin(), dim, fill);
}

StatePoint::StatePoint(std::initializer_list<double> coords)
    : StatePoint(from(std::span<const double>(coords.begin(), coords.size()))) {}

StatePoint StatePoint::from(std::span<const double> coords) {
  StatePoint p(coords.size());
  std::copy(coords.begin(), coords.end(), p.coords_.begin());
  return p;
}

bool StatePoint::in_unit_cube() const noexcept {
  return std::all_of(coords_.begin(), coords_.begin() + dim_,
                     [](double x) { return x >= 0.0 && x <= 1.0; });
}

bool operator==(const StatePoint& a, const StatePoint& b) noexcept {
  return a.dim_ == b.dim_ && std::equal(a.coords_.begin(), a.coords_.begin() + a.dim_,
                                        b.coords_.begin());
}

double linf_distance(const StatePoint& a, const StatePoint& b) {
  if (a.dim() != b.dim()) throw ContractViolation("linf_distance: dimension mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

void MdpSpec::validate() const {
  if (dim < 1 || dim > kMaxStateDim) throw ContractViolation("MdpSpec: dim out of range");
  if (num_actions < 2) throw ContractViolation("MdpSpec: at least two actions are required");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ContractViolation("MdpSpec: gamma must be in (0,1]");
  if (horizon < 1) throw ContractViolation("MdpSpec: horizon must be >= 1");
}

void check_rollout_settings(std::size_t horizon, double gamma) {
  if (horizon < 1) throw ContractViolation("rollout horizon must be >= 1");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ContractViolation("gamma must be in (0,1]");
}

StepOutcome simulate_step(const GenerativeModel& model, const StatePoint& state, Action action,
                          RngStream& rng) {
  const MdpSpec& spec = model.spec();
  if (action >= spec.num_actions) {
    throw ContractViolation("action " + std::to_string(action) + " out of range for " +
                            std::to_string(spec.num_actions) + " actions");
  }
  if (state.dim() != spec.dim || !state.in_unit_cube()) {
    throw ContractViolation("simulate_step: state outside [0,1]^d");
  }
  StepOutcome out = model.sample(state, action, rng);
  if (!(out.reward >= 0.0 && out.reward <= 1.0)) {
    throw ModelIntegrityError("model returned reward " + std::to_string(out.reward) +
                              " outside [0,1]");
  }
  if (out.next_state.dim() != spec.dim || !out.next_state.in_unit_cube()) {
    throw ModelIntegrityError("model returned a next state outside [0,1]^d");
  }
  return out;
}

double rollout_return(const GenerativeModel& model, const Policy& policy, const StatePoint& state,
                      Action action, std::size_t horizon, double gamma, RngStream& rng) {
  check_rollout_settings(horizon, gamma);
  StepOutcome step = simulate_step(model, state, action, rng);
  double total = step.reward;
  double discount = 1.0;
  StatePoint x = step.next_state;
  for (std::size_t t = 1; t < horizon; ++t) {
    discount *= gamma;
    step = simulate_step(model, x, policy.act(x), rng);
    total += discount * step.reward;
    x = step.next_state;
  }
  return total;
}

double policy_value_mc(const GenerativeModel& model, const Policy& policy, const StatePoint& state,
                       std::size_t horizon, double gamma, std::size_t trajectories,
                       RngStream& rng) {
  if (trajectories < 1) throw ContractViolation("policy_value_mc: need at least one trajectory");
  double sum = 0.0;
  for (std::size_t k = 0; k < trajectories; ++k) {
    sum += rollout_return(model, policy, state, policy.act(state), horizon, gamma, rng);
  }
  return sum / static_cast<double>(trajectories);
}

}  // namespace rsapi
