#include "rsapi/allocators.hpp"

#include <algorithm>
#include <numeric>

#include "rsapi/errors.hpp"

namespace rsapi {

namespace {

void check_compatible(const GenerativeModel& model, const UniformGrid& grid) {
  if (model.spec().dim != grid.dim()) throw ContractViolation("grid and model dimensions differ");
}

template <class Fn>
void for_each_index(const RolloutSettings& settings, std::size_t count, Fn&& fn) {
  if (settings.executor != nullptr) {
    settings.executor->for_each_index(count, std::forward<Fn>(fn));
  } else {
    for (std::size_t i = 0; i < count; ++i) fn(i);
  }
}

AllocationOutcome empty_outcome(std::size_t n, std::size_t num_actions) {
  AllocationOutcome out;
  out.labels.assign(n, 0);
  out.accepted.assign(n, false);
  out.sweeps_used.assign(n, 0);
  out.sweeps_at_acceptance.assign(n, std::nullopt);
  out.num_actions = num_actions;
  return out;
}

class Sweeper {
 public:
  Sweeper(const GenerativeModel& model, const Policy& policy, const RolloutSettings& settings)
      : model_(model), policy_(policy), settings_(settings) {}

  void sweep(const StatePoint& s, StateStats& stats, std::span<double> scratch) const {
    RngStream rng = RngStream::labeled(settings_.seed, StreamTag::rollout, settings_.iteration,
                                       stats.state_index(), stats.sweeps());
    sample_state(model_, policy_, s, settings_.horizon, settings_.gamma, rng, scratch);
    stats.update(scratch);
  }

 private:
  const GenerativeModel& model_;
  const Policy& policy_;
  const RolloutSettings& settings_;
};

}  // namespace

void FixedConfig::validate() const {
  if (sweeps_per_state < 1) throw ContractViolation("fixed: c must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw ContractViolation("fixed: delta must be in (0,1)");
  if (value_range && !(*value_range > 0.0)) throw ContractViolation("fixed: Z must be > 0");
}

void CountConfig::validate(std::size_t grid_size) const {
  if (budget < grid_size) throw ContractViolation("count: budget C must be >= n");
  if (!(delta > 0.0 && delta < 1.0)) throw ContractViolation("count: delta must be in (0,1)");
  if (max_sweeps_per_state && *max_sweeps_per_state < 1) {
    throw ContractViolation("count: max_sweeps_per_state must be >= 1");
  }
  if (value_range && !(*value_range > 0.0)) throw ContractViolation("count: Z must be > 0");
}

std::string_view to_string(StopReason reason) noexcept {
  switch (reason) {
    case StopReason::complete: return "complete";
    case StopReason::all_accepted: return "all_accepted";
    case StopReason::budget_exhausted: return "budget_exhausted";
    case StopReason::sweep_cap: return "sweep_cap";
  }
  return "unknown";
}

std::size_t AllocationOutcome::accepted_count() const noexcept {
  return static_cast<std::size_t>(std::count(accepted.begin(), accepted.end(), true));
}

std::uint64_t AllocationOutcome::total_sweeps() const noexcept {
  return std::accumulate(sweeps_used.begin(), sweeps_used.end(), std::uint64_t{0});
}

std::uint64_t samples_used(const AllocationOutcome& outcome) noexcept {
  return outcome.total_sweeps() * outcome.num_actions;
}

AllocationOutcome run_oracle(const Environment& env, const UniformGrid& grid, const Policy&) {
  if (!env.analytic()) throw UnsupportedError("oracle allocation needs an analytic environment");
  check_compatible(env, grid);
  AllocationOutcome out = empty_outcome(grid.size(), env.spec().num_actions);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.labels[i] = env.exact_best_action(grid.point(i)).action;
    out.accepted[i] = true;
    out.sweeps_at_acceptance[i] = 0;
  }
  return out;
}

AllocationOutcome run_fixed(const GenerativeModel& model, const UniformGrid& grid,
                            const Policy& policy, const FixedConfig& config,
                            const RolloutSettings& settings) {
  config.validate();
  check_compatible(model, grid);
  check_rollout_settings(settings.horizon, settings.gamma);
  const std::size_t n = grid.size();
  const std::size_t actions = model.spec().num_actions;
  const ThresholdParams threshold_params{
      config.value_range.value_or(value_range(settings.gamma, settings.horizon)), n, actions,
      config.delta};
  const double threshold = acceptance_threshold(threshold_params, config.sweeps_per_state);

  struct StateResult {
    std::uint64_t sweeps = 0;
    bool accepted = false;
    Action label = 0;
  };
  std::vector<StateResult> results(n);
  const Sweeper sweeper(model, policy, settings);
  for_each_index(settings, n, [&](std::size_t i) {
    const StatePoint s = grid.point(i);
    StateStats stats(i, actions);
    std::vector<double> scratch(actions);
    for (std::uint64_t j = 0; j < config.sweeps_per_state; ++j) sweeper.sweep(s, stats, scratch);
    StateResult& r = results[i];
    r.sweeps = stats.sweeps();
    r.accepted = passes_threshold(stats.empirical_delta(), threshold);
    r.label = r.accepted ? stats.empirical_best() : policy.act(s);
  });

  AllocationOutcome out = empty_outcome(n, actions);
  for (std::size_t i = 0; i < n; ++i) {
    out.sweeps_used[i] = results[i].sweeps;
    out.accepted[i] = results[i].accepted;
    out.labels[i] = results[i].label;
    if (results[i].accepted) out.sweeps_at_acceptance[i] = results[i].sweeps;
  }
  out.total_rollouts = samples_used(out);
  out.stop_reason = StopReason::complete;
  return out;
}

AllocationOutcome run_count(const GenerativeModel& model, const UniformGrid& grid,
                            const Policy& policy, const CountConfig& config,
                            const RolloutSettings& settings) {
  config.validate(grid.size());
  check_compatible(model, grid);
  check_rollout_settings(settings.horizon, settings.gamma);
  const std::size_t n = grid.size();
  const std::size_t actions = model.spec().num_actions;
  const ThresholdParams threshold_params{
      config.value_range.value_or(value_range(settings.gamma, settings.horizon)), n, actions,
      config.delta};
  threshold_params.validate();

  std::vector<StatePoint> points(n);
  std::vector<StateStats> stats;
  stats.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    points[i] = grid.point(i);
    stats.emplace_back(i, actions);
  }
  std::vector<std::vector<double>> scratch(n, std::vector<double>(actions));

  AllocationOutcome out = empty_outcome(n, actions);
  std::vector<std::size_t> active(n);
  std::iota(active.begin(), active.end(), std::size_t{0});
  std::vector<std::size_t> still_active;
  std::uint64_t total_sweeps = 0;
  bool capped = false;
  const Sweeper sweeper(model, policy, settings);

  while (!active.empty()) {
    for_each_index(settings, active.size(), [&](std::size_t k) {
      const std::size_t i = active[k];
      sweeper.sweep(points[i], stats[i], scratch[i]);
    });
    total_sweeps += active.size();

    // Elimination filter: a barrier after the full sweep.
    still_active.clear();
    for (const std::size_t i : active) {
      StateStats& st = stats[i];
      if (passes_threshold(st.empirical_delta(), acceptance_threshold(threshold_params, st.sweeps()))) {
        st.accept();
        out.accepted[i] = true;
        out.labels[i] = st.label();
        out.sweeps_at_acceptance[i] = st.sweeps();
      } else if (config.max_sweeps_per_state && st.sweeps() >= *config.max_sweeps_per_state) {
        capped = true;
      } else {
        still_active.push_back(i);
      }
    }
    active.swap(still_active);
    if (total_sweeps >= config.budget) break;
  }

  for (std::size_t i = 0; i < n; ++i) {
    out.sweeps_used[i] = stats[i].sweeps();
    if (!out.accepted[i]) out.labels[i] = policy.act(points[i]);
  }
  out.total_rollouts = samples_used(out);
  if (!active.empty()) {
    out.stop_reason = StopReason::budget_exhausted;
  } else {
    out.stop_reason = capped ? StopReason::sweep_cap : StopReason::all_accepted;
  }
  return out;
}

}  // namespace rsapi
