#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "rsapi/allocators.hpp"
#include "rsapi/grid.hpp"

namespace rsapi {

/// Next policy from one allocation: each point acts like its nearest grid
/// state. Unaccepted states already carry the previous policy's action.
NearestNeighborPolicy improved_policy(const UniformGrid& grid, const AllocationOutcome& outcome);

struct OracleChoice {};
using AllocatorChoice = std::variant<OracleChoice, FixedConfig, CountConfig>;

/// Runs whichever allocator `choice` names. The oracle requires `model` to
/// be an analytic Environment.
AllocationOutcome allocate(const GenerativeModel& model, const UniformGrid& grid,
                           const Policy& policy, const AllocatorChoice& choice,
                           const RolloutSettings& settings);

struct PolicyIterationResult {
  std::vector<NearestNeighborPolicy> policies;  // pi_1 ... pi_k
  std::vector<AllocationOutcome> outcomes;      // outcome k produced policy k
  bool converged = false;                       // labels repeated before k_max
};

/// pi_0 -> pi_1 -> ... by repeated allocation + nearest-neighbour
/// improvement. Iteration k uses stream label `settings.iteration + k`.
/// Stops at `max_iterations` or as soon as a step reproduces the previous
/// labels.
PolicyIterationResult policy_iteration(const GenerativeModel& model, const Policy& initial,
                                       const AllocatorChoice& choice, const UniformGrid& grid,
                                       std::size_t max_iterations, RolloutSettings settings);

}  // namespace rsapi
