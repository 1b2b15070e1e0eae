#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rsapi/mdp.hpp"
#include "rsapi/smoothness.hpp"

namespace rsapi {

/// Best action and gap (best value minus second best). Exact ties report
/// gap 0 and the lowest maximising index.
struct BestAction {
  Action action = 0;
  double gap = 0.0;
};

BestAction best_of(std::span<const double> values);

/// Benchmark environment. Analytic environments additionally expose exact
/// T-horizon action values and best actions, which turn the probabilistic
/// guarantees of the allocators into checkable properties.
class Environment : public GenerativeModel {
 public:
  explicit Environment(MdpSpec spec);

  const MdpSpec& spec() const noexcept final { return spec_; }
  virtual std::string_view name() const noexcept = 0;

  virtual bool analytic() const noexcept { return false; }

  /// Exact Q^{pi,T}(s, a). Throws UnsupportedError when the environment has
  /// no closed form, or has none for this policy type.
  virtual double exact_q(const StatePoint& s, Action a, std::size_t horizon, double gamma,
                         const Policy& policy) const;

  /// Best action and gap at s. Only offered by environments whose best
  /// action is the same for every policy and horizon.
  virtual BestAction exact_best_action(const StatePoint& s) const;

  /// Certified regularity constants, if any.
  virtual std::optional<SmoothnessParams> smoothness() const { return std::nullopt; }

 private:
  MdpSpec spec_;
};

/// R(s, a0) = s_1, R(s, a1) = 1 - s_1; the next state is uniform on the cube
/// regardless of (s, a). Q^{pi,T}(s,a) = R(s,a) + (policy constant), so the
/// gap is |2 s_1 - 1| at every horizon and for every policy.
class LinearSplitEnv final : public Environment {
 public:
  explicit LinearSplitEnv(std::size_t dim, double gamma = 1.0, std::size_t horizon = 1);

  std::string_view name() const noexcept override { return "linear_split"; }
  StepOutcome sample(const StatePoint& s, Action a, RngStream& rng) const override;

  bool analytic() const noexcept override { return true; }
  double exact_q(const StatePoint& s, Action a, std::size_t horizon, double gamma,
                 const Policy& policy) const override;
  BestAction exact_best_action(const StatePoint& s) const override;
  std::optional<SmoothnessParams> smoothness() const override;

  /// E[R(U, pi(U))] for U uniform on the cube. Exact for ConstantPolicy and
  /// NearestNeighborPolicy (R is linear in s_1 on every grid cell).
  double mean_reward_under(const Policy& policy) const;
};

/// R(s, a) = 1 for every (s, a); the state never changes.
class ConstantRewardEnv final : public Environment {
 public:
  explicit ConstantRewardEnv(std::size_t dim = 1, std::size_t num_actions = 2, double gamma = 1.0,
                             std::size_t horizon = 1);

  std::string_view name() const noexcept override { return "constant_reward"; }
  StepOutcome sample(const StatePoint& s, Action a, RngStream& rng) const override;

  bool analytic() const noexcept override { return true; }
  double exact_q(const StatePoint& s, Action a, std::size_t horizon, double gamma,
                 const Policy& policy) const override;
  BestAction exact_best_action(const StatePoint& s) const override;
};

/// s' = clamp(s + drift(a) + U[-sigma, sigma]^d), R(s, a) = s_1, with
/// drift(a0) = +drift e_1 and drift(a1) = -drift e_1. Clamps to the cube
/// internally. Has no closed form and no certified constants.
class DriftChainEnv final : public Environment {
 public:
  DriftChainEnv(std::size_t dim, double drift, double sigma, double gamma = 1.0,
                std::size_t horizon = 1);

  std::string_view name() const noexcept override { return "drift_chain"; }
  StepOutcome sample(const StatePoint& s, Action a, RngStream& rng) const override;

  double drift() const noexcept { return drift_; }
  double sigma() const noexcept { return sigma_; }

 private:
  double drift_;
  double sigma_;
};

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Mean and standard error of `samples` independent rollout returns of
/// (s, a) then `policy`. Written as its own loop over raw model calls so it
/// stays independent of the rollout code it is used to check.
MonteCarloEstimate brute_force_q(const GenerativeModel& model, const Policy& policy,
                                 const StatePoint& s, Action a, std::size_t horizon, double gamma,
                                 std::size_t samples, RngStream& rng);

// Regularity checks behind `validate-env`.

struct HolderCheck {
  std::size_t pairs = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;  // max |dQ| / ((L/2) |ds|^alpha)
};

/// Samples random state pairs and tests the Hoelder inequality on exact_q
/// for every action.
HolderCheck check_holder(const Environment& env, const Policy& policy, std::size_t horizon,
                         double gamma, std::size_t pairs, RngStream& rng);

struct MeasureCheck {
  double epsilon = 0.0;
  double measure = 0.0;  // midpoint-rule estimate of meas{gap < epsilon}
  double bound = 0.0;    // M epsilon^beta
  double quadrature_error = 0.0;
};

/// Midpoint quadrature of {s : gap(s) < epsilon} on a lattice of
/// `points_per_axis`^d cells.
MeasureCheck check_measure(const Environment& env, double epsilon, std::size_t points_per_axis);

/// Builds an environment by registry name: linear_split, constant_reward,
/// drift_chain. Throws UnsupportedError for unknown names.
struct EnvParams {
  std::size_t dim = 1;
  double drift = 0.1;
  double sigma = 0.05;
  double gamma = 1.0;
  std::size_t horizon = 1;
};
std::unique_ptr<Environment> make_environment(std::string_view name, const EnvParams& params);

std::vector<std::string> environment_names();

}  // namespace rsapi
