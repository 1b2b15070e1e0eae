#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rsapi/allocators.hpp"
#include "rsapi/envs.hpp"
#include "rsapi/grid.hpp"
#include "rsapi/harness/config.hpp"
#include "rsapi/parallel.hpp"
#include "rsapi/policy_iteration.hpp"

namespace rsapi::harness {

/// One (seed, allocator setting) run. CSV columns follow field order.
struct RunRecord {
  std::uint64_t seed = 0;
  std::string allocator;
  std::uint64_t n = 0;
  std::uint64_t total_rollouts = 0;
  std::uint64_t accepted_count = 0;
  std::optional<std::uint64_t> wrong_label_count;  // analytic environments only
  double measured_regret = 0.0;
  std::optional<double> wall_time;                 // seconds; only when timing is on

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// An allocator setting with every "auto" value filled in.
struct ResolvedAllocator {
  AllocatorChoice choice;
  std::string label;
};

ResolvedAllocator resolve_allocator(const ExperimentConfig& cfg, std::size_t index,
                                    const Environment& env, const UniformGrid& grid);

/// Regret of `improved` relative to `base` over a test set: the largest
/// max_a Q^{base}(s,a) - V^{improved}(s). Q^{base} is exact where the
/// environment allows it, otherwise a Monte-Carlo estimate; V^{improved} is
/// always estimated by rollouts.
struct RegretMeasurement {
  double max_regret = 0.0;
  std::size_t test_states = 0;
};

RegretMeasurement measure_regret(const Environment& env, const Policy& base,
                                 const Policy& improved, const UniformGrid& grid,
                                 const ExperimentConfig& cfg, std::uint64_t seed);

/// Accepted states whose label is strictly worse than the best action.
std::uint64_t count_wrong_labels(const Environment& env, const UniformGrid& grid,
                                 const AllocationOutcome& outcome);

struct RunDetail {
  RunRecord record;
  UniformGrid grid{1, 1};
  AllocationOutcome outcome;  // last improvement step
};

std::unique_ptr<Environment> build_environment(const ExperimentConfig& cfg);

/// One record per (allocator setting, seed), allocator-major. Runs execute
/// concurrently on `executor`; the output does not depend on its size.
std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, const Executor& executor);
std::vector<RunDetail> run_experiment_detailed(const ExperimentConfig& cfg,
                                               const Executor& executor);

/// FIXED versus COUNT at matched target regret.
struct SweepRow {
  double epsilon = 0.0;
  std::uint64_t n = 0;
  std::uint64_t fixed_c = 0;
  std::uint64_t count_budget = 0;
  std::uint64_t count_cap = 0;
  double fixed_mean_rollouts = 0.0;
  double count_mean_rollouts = 0.0;
  double fixed_wrong_run_rate = 0.0;  // fraction of runs with any wrong accepted label
  double count_wrong_run_rate = 0.0;
  double fixed_mean_regret = 0.0;
  double count_mean_regret = 0.0;
  double ratio = 0.0;                 // fixed_mean_rollouts / count_mean_rollouts
};

/// For each epsilon: n from oracle_grid_size, FIXED c from
/// fixed_samples_per_state, COUNT budget from count_total_bound (cap = c).
/// delta comes from the template's first allocator.
std::vector<SweepRow> sweep(const ExperimentConfig& templ, std::span<const double> epsilons,
                            const Executor& executor);

std::string sweep_to_csv(std::span<const SweepRow> rows);

}  // namespace rsapi::harness
