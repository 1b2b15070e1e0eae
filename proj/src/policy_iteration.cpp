#include "rsapi/policy_iteration.hpp"

#include <algorithm>

#include "rsapi/errors.hpp"

namespace rsapi {

NearestNeighborPolicy improved_policy(const UniformGrid& grid, const AllocationOutcome& outcome) {
  if (outcome.labels.size() != grid.size()) {
    throw ContractViolation("improved_policy: outcome does not match grid");
  }
  return NearestNeighborPolicy(grid, outcome.labels);
}

AllocationOutcome allocate(const GenerativeModel& model, const UniformGrid& grid,
                           const Policy& policy, const AllocatorChoice& choice,
                           const RolloutSettings& settings) {
  struct Visitor {
    const GenerativeModel& model;
    const UniformGrid& grid;
    const Policy& policy;
    const RolloutSettings& settings;

    AllocationOutcome operator()(const OracleChoice&) const {
      const auto* env = dynamic_cast<const Environment*>(&model);
      if (env == nullptr) throw UnsupportedError("oracle allocation needs an analytic environment");
      return run_oracle(*env, grid, policy);
    }
    AllocationOutcome operator()(const FixedConfig& c) const {
      return run_fixed(model, grid, policy, c, settings);
    }
    AllocationOutcome operator()(const CountConfig& c) const {
      return run_count(model, grid, policy, c, settings);
    }
  };
  return std::visit(Visitor{model, grid, policy, settings}, choice);
}

PolicyIterationResult policy_iteration(const GenerativeModel& model, const Policy& initial,
                                       const AllocatorChoice& choice, const UniformGrid& grid,
                                       std::size_t max_iterations, RolloutSettings settings) {
  if (max_iterations < 1) throw ContractViolation("policy_iteration: k_max must be >= 1");
  PolicyIterationResult result;
  const std::uint64_t base_iteration = settings.iteration;
  for (std::size_t k = 0; k < max_iterations; ++k) {
    const Policy& current = result.policies.empty()
                                ? initial
                                : static_cast<const Policy&>(result.policies.back());
    settings.iteration = base_iteration + k;
    AllocationOutcome outcome = allocate(model, grid, current, choice, settings);
    const bool unchanged = !result.outcomes.empty() &&
                           std::ranges::equal(outcome.labels, result.outcomes.back().labels);
    result.policies.push_back(improved_policy(grid, outcome));
    result.outcomes.push_back(std::move(outcome));
    if (unchanged) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace rsapi
