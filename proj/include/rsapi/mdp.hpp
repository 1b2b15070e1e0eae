#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>

#include "rsapi/rng.hpp"

namespace rsapi {

/// Upper bound on state dimensionality. Grids over more than eight
/// dimensions are not practical at the resolutions the bounds call for.
inline constexpr std::size_t kMaxStateDim = 8;

using Action = std::uint32_t;

/// A point of [0,1]^d stored inline (no allocation per simulation step).
class StatePoint {
 public:
  StatePoint() = default;
  explicit StatePoint(std::size_t dim, double fill = 0.0);
  StatePoint(std::initializer_list<double> coords);
  static StatePoint from(std::span<const double> coords);

  std::size_t dim() const noexcept { return dim_; }
  double operator[](std::size_t i) const noexcept { return coords_[i]; }
  double& operator[](std::size_t i) noexcept { return coords_[i]; }
  std::span<const double> coords() const noexcept { return {coords_.data(), dim_}; }
  std::span<double> coords() noexcept { return {coords_.data(), dim_}; }

  bool in_unit_cube() const noexcept;

  friend bool operator==(const StatePoint& a, const StatePoint& b) noexcept;

 private:
  std::array<double, kMaxStateDim> coords_{};
  std::size_t dim_ = 0;
};

double linf_distance(const StatePoint& a, const StatePoint& b);

/// Static description of an MDP reachable through a generative model.
/// The state space is [0,1]^dim. gamma and horizon are the model's nominal
/// rollout settings; the rollout functions take their own.
struct MdpSpec {
  std::size_t dim = 1;
  std::size_t num_actions = 2;
  double gamma = 1.0;
  std::size_t horizon = 1;

  void validate() const;
};

struct StepOutcome {
  double reward = 0.0;
  StatePoint next_state;
};

/// Black-box simulator: the only access the algorithms have to an MDP.
///
/// Implementations are immutable and may be called concurrently; all
/// randomness comes from the caller's stream, so identical
/// (state, action, stream state) inputs give identical outputs.
class GenerativeModel {
 public:
  virtual ~GenerativeModel() = default;

  virtual const MdpSpec& spec() const noexcept = 0;

  /// Raw simulator call. Callers should go through simulate_step(), which
  /// validates inputs and outputs.
  virtual StepOutcome sample(const StatePoint& state, Action action, RngStream& rng) const = 0;
};

/// Deterministic policy over [0,1]^d.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual Action act(const StatePoint& state) const = 0;
};

class ConstantPolicy final : public Policy {
 public:
  explicit ConstantPolicy(Action action) : action_(action) {}
  Action act(const StatePoint&) const override { return action_; }
  Action action() const noexcept { return action_; }

 private:
  Action action_;
};

/// One validated simulator call.
///
/// Throws ContractViolation for an out-of-range action or a state outside
/// [0,1]^d, and ModelIntegrityError if the model returns a reward outside
/// [0,1] or a next state outside the unit cube.
StepOutcome simulate_step(const GenerativeModel& model, const StatePoint& state, Action action,
                          RngStream& rng);

/// Discounted return of a single T-step trajectory: the first step takes
/// `action`, the remaining T-1 steps follow `policy`.
double rollout_return(const GenerativeModel& model, const Policy& policy, const StatePoint& state,
                      Action action, std::size_t horizon, double gamma, RngStream& rng);

/// Monte-Carlo estimate of the T-horizon value of `policy` from `state`,
/// averaged over `trajectories` independent runs drawn from `rng`.
double policy_value_mc(const GenerativeModel& model, const Policy& policy, const StatePoint& state,
                       std::size_t horizon, double gamma, std::size_t trajectories,
                       RngStream& rng);

/// Throws ContractViolation unless horizon >= 1 and 0 < gamma <= 1.
void check_rollout_settings(std::size_t horizon, double gamma);

}  // namespace rsapi
