#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "rsapi/envs.hpp"
#include "rsapi/grid.hpp"
#include "rsapi/mdp.hpp"
#include "rsapi/parallel.hpp"
#include "rsapi/rollout_stats.hpp"

namespace rsapi {

/// Rollout settings shared by the sampling allocators.
///
/// The sweep performed at grid state i with sweep index j draws from
/// RngStream::labeled(seed, rollout, iteration, i, j), so FIXED and COUNT
/// see identical randomness for the same (state, sweep) pair.
struct RolloutSettings {
  std::size_t horizon = 1;
  double gamma = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t iteration = 0;
  const Executor* executor = nullptr;  // sequential when null
};

struct FixedConfig {
  std::uint64_t sweeps_per_state = 1;  // c
  double delta = 0.05;
  std::optional<double> value_range;   // Z; defaults to value_range(gamma, T)

  void validate() const;
};

struct CountConfig {
  std::uint64_t budget = 1;  // C, total sweeps
  double delta = 0.05;
  /// States that reach this many sweeps without acceptance leave the active
  /// set unaccepted. nullopt means no cap.
  std::optional<std::uint64_t> max_sweeps_per_state;
  std::optional<double> value_range;

  void validate(std::size_t grid_size) const;
};

enum class StopReason {
  complete,           // ORACLE and FIXED
  all_accepted,       // COUNT: active set emptied by acceptances
  budget_exhausted,   // COUNT: sum of sweeps reached C
  sweep_cap,          // COUNT: active set emptied, some states retired by the cap
};

std::string_view to_string(StopReason reason) noexcept;

/// Result of one improvement step over a grid.
struct AllocationOutcome {
  std::vector<Action> labels;
  std::vector<bool> accepted;
  std::vector<std::uint64_t> sweeps_used;
  std::vector<std::optional<std::uint64_t>> sweeps_at_acceptance;
  std::size_t num_actions = 2;
  std::uint64_t total_rollouts = 0;
  StopReason stop_reason = StopReason::complete;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t accepted_count() const noexcept;
  std::uint64_t total_sweeps() const noexcept;
};

/// Total rollouts consumed: sum over states of c(s) * |A|.
std::uint64_t samples_used(const AllocationOutcome& outcome) noexcept;

/// Labels every grid state with its analytic best action. Uses no rollouts.
AllocationOutcome run_oracle(const Environment& env, const UniformGrid& grid, const Policy& policy);

/// c sweeps at every state; accept when the empirical gap clears theta(c),
/// otherwise keep the input policy's action.
AllocationOutcome run_fixed(const GenerativeModel& model, const UniformGrid& grid,
                            const Policy& policy, const FixedConfig& config,
                            const RolloutSettings& settings);

/// Synchronous elimination: every active state is swept once per iteration,
/// then states whose gap clears theta(c(s)) are accepted and removed. Stops
/// after the first full sweep that brings the total to at least C, or when
/// no state is active. Unresolved states keep the input policy's action.
AllocationOutcome run_count(const GenerativeModel& model, const UniformGrid& grid,
                            const Policy& policy, const CountConfig& config,
                            const RolloutSettings& settings);

}  // namespace rsapi
