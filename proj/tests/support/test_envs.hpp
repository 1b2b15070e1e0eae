#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "rsapi/envs.hpp"

namespace rsapi::testing {

/// Deterministic test environment: R(s, a) = reward(s, a) and the state never
/// changes, so every rollout return is a fixed number and empirical gaps equal
/// true gaps.
class FunctionRewardEnv final : public Environment {
 public:
  using RewardFn = std::function<double(const StatePoint&, Action)>;

  FunctionRewardEnv(std::size_t dim, std::size_t num_actions, RewardFn reward,
                    std::optional<SmoothnessParams> smoothness = std::nullopt)
      : Environment(MdpSpec{dim, num_actions, 1.0, 1}),
        reward_(std::move(reward)),
        smoothness_(smoothness) {}

  std::string_view name() const noexcept override { return "function_reward"; }

  StepOutcome sample(const StatePoint& s, Action a, RngStream&) const override {
    return {reward_(s, a), s};
  }

  bool analytic() const noexcept override { return true; }

  double exact_q(const StatePoint& s, Action a, std::size_t horizon, double gamma,
                 const Policy& policy) const override {
    double q = reward_(s, a);
    double discount = 1.0;
    const Action follow = policy.act(s);
    for (std::size_t t = 1; t < horizon; ++t) {
      discount *= gamma;
      q += discount * reward_(s, follow);
    }
    return q;
  }

  std::optional<SmoothnessParams> smoothness() const override { return smoothness_; }

  BestAction exact_best_action(const StatePoint& s) const override {
    std::vector<double> r(spec().num_actions);
    for (Action a = 0; a < r.size(); ++a) r[a] = reward_(s, a);
    return best_of(r);
  }

 private:
  RewardFn reward_;
  std::optional<SmoothnessParams> smoothness_;
};

/// Every action has the same reward everywhere.
inline FunctionRewardEnv identical_actions_env(std::size_t dim = 1, std::size_t num_actions = 2) {
  return FunctionRewardEnv(dim, num_actions, [](const StatePoint&, Action) { return 0.5; });
}

/// Simulator that returns whatever it is told to; used to exercise the
/// integrity checks.
class BrokenModel final : public GenerativeModel {
 public:
  BrokenModel(double reward, StatePoint next) : spec_{next.dim(), 2, 1.0, 1}, reward_(reward),
                                                next_(next) {}
  const MdpSpec& spec() const noexcept override { return spec_; }
  StepOutcome sample(const StatePoint&, Action, RngStream&) const override {
    return {reward_, next_};
  }

 private:
  MdpSpec spec_;
  double reward_;
  StatePoint next_;
};

}  // namespace rsapi::testing
