#include <cmath>

#include "doctest.h"
#include "rsapi/envs.hpp"
#include "rsapi/errors.hpp"
#include "rsapi/mdp.hpp"
#include "test_envs.hpp"

using namespace rsapi;

TEST_CASE("StatePoint basics") {
  const StatePoint p{0.2, 0.9};
  CHECK(p.dim() == 2);
  CHECK(p.in_unit_cube());
  CHECK_FALSE(StatePoint{1.2}.in_unit_cube());
  CHECK_FALSE(StatePoint{std::nan("")}.in_unit_cube());
  CHECK(linf_distance(p, StatePoint{0.5, 0.5}) == doctest::Approx(0.4));
  CHECK_THROWS_AS(linf_distance(p, StatePoint{0.5}), ContractViolation);
  CHECK_THROWS_AS(StatePoint(kMaxStateDim + 1), ContractViolation);
  CHECK_THROWS_AS(StatePoint(0), ContractViolation);
}

TEST_CASE("MdpSpec validation") {
  CHECK_NOTHROW((MdpSpec{1, 2, 0.5, 3}.validate()));
  CHECK_THROWS_AS((MdpSpec{0, 2, 0.5, 3}.validate()), ContractViolation);
  CHECK_THROWS_AS((MdpSpec{1, 0, 0.5, 3}.validate()), ContractViolation);
  CHECK_THROWS_AS((MdpSpec{1, 2, 0.0, 3}.validate()), ContractViolation);
  CHECK_THROWS_AS((MdpSpec{1, 2, 1.5, 3}.validate()), ContractViolation);
  CHECK_THROWS_AS((MdpSpec{1, 2, 0.5, 0}.validate()), ContractViolation);
}

TEST_CASE("simulate_step on ConstantReward") {
  const ConstantRewardEnv env(1);
  RngStream rng(1);
  const auto out = simulate_step(env, StatePoint{0.5}, 0, rng);
  CHECK(out.reward == 1.0);
  CHECK(out.next_state == StatePoint{0.5});
}

TEST_CASE("simulate_step on LinearSplit") {
  const LinearSplitEnv env(1);
  RngStream rng(1);
  const auto out = simulate_step(env, StatePoint{0.8}, 0, rng);
  CHECK(out.reward == 0.8);
  CHECK(out.next_state.in_unit_cube());
}

TEST_CASE("simulate_step is deterministic given the stream") {
  const LinearSplitEnv env(2);
  auto r1 = RngStream::labeled(9, StreamTag::rollout, 1, 2, 3);
  auto r2 = RngStream::labeled(9, StreamTag::rollout, 1, 2, 3);
  const auto a = simulate_step(env, StatePoint{0.3, 0.6}, 1, r1);
  const auto b = simulate_step(env, StatePoint{0.3, 0.6}, 1, r2);
  CHECK(a.reward == b.reward);
  CHECK(a.next_state == b.next_state);
}

TEST_CASE("simulate_step rejects bad inputs") {
  const LinearSplitEnv env(1);
  RngStream rng(1);
  CHECK_THROWS_AS(simulate_step(env, StatePoint{0.5}, 2, rng), ContractViolation);
  CHECK_THROWS_AS(simulate_step(env, StatePoint{1.5}, 0, rng), ContractViolation);
  CHECK_THROWS_AS(simulate_step(env, StatePoint{0.5, 0.5}, 0, rng), ContractViolation);
}

TEST_CASE("simulate_step detects broken models") {
  RngStream rng(1);
  CHECK_THROWS_AS(simulate_step(testing::BrokenModel(1.5, StatePoint{0.5}), StatePoint{0.5}, 0, rng),
                  ModelIntegrityError);
  CHECK_THROWS_AS(simulate_step(testing::BrokenModel(-0.1, StatePoint{0.5}), StatePoint{0.5}, 0, rng),
                  ModelIntegrityError);
  CHECK_THROWS_AS(simulate_step(testing::BrokenModel(0.5, StatePoint{1.1}), StatePoint{0.5}, 0, rng),
                  ModelIntegrityError);
  CHECK_THROWS_AS(
      simulate_step(testing::BrokenModel(std::nan(""), StatePoint{0.5}), StatePoint{0.5}, 0, rng),
      ModelIntegrityError);
}

TEST_CASE("rollout_return examples") {
  const ConstantRewardEnv constant(1);
  const ConstantPolicy pi(0);
  RngStream rng(1);
  CHECK(rollout_return(constant, pi, StatePoint{0.5}, 0, 3, 0.5, rng) == 1.75);
  CHECK(rollout_return(constant, pi, StatePoint{0.5}, 0, 4, 1.0, rng) == 4.0);
  const LinearSplitEnv split(1);
  CHECK(rollout_return(split, pi, StatePoint{0.8}, 0, 1, 1.0, rng) == 0.8);
  CHECK_THROWS_AS(rollout_return(split, pi, StatePoint{0.8}, 0, 0, 1.0, rng), ContractViolation);
  CHECK_THROWS_AS(rollout_return(split, pi, StatePoint{0.8}, 0, 1, 0.0, rng), ContractViolation);
}

TEST_CASE("policy_value_mc examples") {
  const ConstantRewardEnv constant(1);
  const LinearSplitEnv split(1);
  const ConstantPolicy a0(0);
  RngStream rng(2);
  CHECK(policy_value_mc(constant, a0, StatePoint{0.1}, 3, 0.5, 10, rng) == 1.75);
  CHECK(policy_value_mc(split, a0, StatePoint{0.3}, 1, 1.0, 1, rng) == 0.3);
  CHECK_THROWS_AS(policy_value_mc(split, a0, StatePoint{0.3}, 1, 1.0, 0, rng), ContractViolation);
}

TEST_CASE("policy_value_mc on LinearSplit two-step agrees with brute force") {
  const LinearSplitEnv split(1);
  const ConstantPolicy a0(0);
  const std::size_t k = 1000000;
  auto rng = RngStream::labeled(5, StreamTag::evaluation, 0);
  const double v = policy_value_mc(split, a0, StatePoint{0.3}, 2, 0.5, k, rng);
  auto other = RngStream::labeled(6, StreamTag::brute_force, 0);
  const auto bf = brute_force_q(split, a0, StatePoint{0.3}, 0, 2, 0.5, k, other);
  // Both estimate 0.3 + 0.5 * 0.5; each has standard error 0.5 * sqrt(1/12 / K).
  const double se = 0.5 * std::sqrt(1.0 / 12.0 / static_cast<double>(k));
  CHECK(std::abs(v - 0.55) <= 3.0 * se);
  CHECK(std::abs(bf.mean - 0.55) <= 3.0 * se);
  CHECK(std::abs(v - bf.mean) <= 3.0 * std::sqrt(2.0) * se);
}
