#include "rsapi/harness/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "rsapi/bounds.hpp"
#include "rsapi/errors.hpp"

namespace rsapi::harness {

namespace {

constexpr std::size_t kMaxCornerPoints = 4096;

std::string alloc_path(std::size_t index) { return fmt::format("allocators[{}]", index); }

const SmoothnessParams& require_smoothness(const std::optional<SmoothnessParams>& p,
                                           const std::string& field, const Environment& env) {
  if (!p) {
    throw ConfigError(field, fmt::format("'auto' needs certified smoothness constants, which {} "
                                         "does not provide; give an explicit value",
                                         env.name()));
  }
  return *p;
}

std::vector<StatePoint> test_states(const UniformGrid& grid, const ExperimentConfig& cfg,
                                    std::uint64_t seed) {
  const std::size_t d = grid.dim();
  std::vector<StatePoint> states;
  RngStream rng = RngStream::labeled(seed, StreamTag::test_states);
  for (std::size_t j = 0; j < cfg.eval.test_states; ++j) {
    StatePoint s(d);
    for (double& x : s.coords()) x = rng.uniform();
    states.push_back(s);
  }
  if (cfg.eval.corners) {
    const std::size_t per_axis = grid.points_per_axis() + 1;
    std::size_t total = 1;
    for (std::size_t k = 0; k < d && total <= kMaxCornerPoints; ++k) total *= per_axis;
    if (total <= kMaxCornerPoints) {
      for (std::size_t idx = 0; idx < total; ++idx) {
        StatePoint s(d);
        std::size_t rest = idx;
        for (std::size_t k = d; k-- > 0;) {
          s[k] = static_cast<double>(rest % per_axis) / static_cast<double>(per_axis - 1);
          rest /= per_axis;
        }
        states.push_back(s);
      }
    }
  }
  return states;
}

}  // namespace

std::unique_ptr<Environment> build_environment(const ExperimentConfig& cfg) {
  EnvParams p;
  p.dim = cfg.env.dim;
  p.drift = cfg.env.drift;
  p.sigma = cfg.env.sigma;
  p.gamma = cfg.gamma;
  p.horizon = cfg.horizon;
  return make_environment(cfg.env.name, p);
}

ResolvedAllocator resolve_allocator(const ExperimentConfig& cfg, std::size_t index,
                                    const Environment& env, const UniformGrid& grid) {
  const AllocatorSetting& a = cfg.allocators.at(index);
  const double z = value_range(cfg.gamma, cfg.horizon);
  const std::size_t actions = env.spec().num_actions;
  const std::uint64_t n = grid.size();
  const auto smooth = env.smoothness();
  const std::string path = alloc_path(index);

  switch (a.kind) {
    case AllocatorKind::oracle:
      if (!env.analytic()) throw ConfigError(path + ".name", "oracle needs an analytic environment");
      return {OracleChoice{}, "oracle"};
    case AllocatorKind::fixed: {
      FixedConfig fc;
      fc.delta = a.delta;
      fc.sweeps_per_state =
          a.sweeps_per_state
              ? *a.sweeps_per_state
              : fixed_samples_per_state(n, z, require_smoothness(smooth, path + ".c", env),
                                        actions, a.delta);
      return {fc, fmt::format("fixed:c={}:delta={}", fc.sweeps_per_state, fc.delta)};
    }
    case AllocatorKind::count: {
      CountConfig cc;
      cc.delta = a.delta;
      if (a.budget) {
        cc.budget = *a.budget;
      } else {
        const double bound = count_total_bound(
            n, z, require_smoothness(smooth, path + ".C", env), actions, a.delta, grid.rho());
        cc.budget = std::max<std::uint64_t>(n, ceil_count(bound));
      }
      switch (a.cap_mode) {
        case AllocatorSetting::CapMode::automatic:
          cc.max_sweeps_per_state = fixed_samples_per_state(
              n, z, require_smoothness(smooth, path + ".max_sweeps_per_state", env), actions,
              a.delta);
          break;
        case AllocatorSetting::CapMode::none: cc.max_sweeps_per_state.reset(); break;
        case AllocatorSetting::CapMode::value: cc.max_sweeps_per_state = a.cap_value; break;
      }
      if (cc.budget < n) throw ConfigError(path + ".C", "budget must be at least the grid size");
      const std::string cap =
          cc.max_sweeps_per_state ? std::to_string(*cc.max_sweeps_per_state) : "none";
      return {cc, fmt::format("count:C={}:cap={}:delta={}", cc.budget, cap, cc.delta)};
    }
  }
  throw ConfigError(path, "unknown allocator");
}

std::uint64_t count_wrong_labels(const Environment& env, const UniformGrid& grid,
                                 const AllocationOutcome& outcome) {
  std::uint64_t wrong = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!outcome.accepted[i]) continue;
    const BestAction best = env.exact_best_action(grid.point(i));
    if (best.gap > 0.0 && outcome.labels[i] != best.action) ++wrong;
  }
  return wrong;
}

RegretMeasurement measure_regret(const Environment& env, const Policy& base,
                                 const Policy& improved, const UniformGrid& grid,
                                 const ExperimentConfig& cfg, std::uint64_t seed) {
  const auto states = test_states(grid, cfg, seed);
  const std::size_t actions = env.spec().num_actions;
  RegretMeasurement out;
  out.test_states = states.size();
  out.max_regret = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < states.size(); ++j) {
    const StatePoint& s = states[j];
    double best = -std::numeric_limits<double>::infinity();
    for (Action a = 0; a < actions; ++a) {
      double q;
      if (env.analytic()) {
        q = env.exact_q(s, a, cfg.horizon, cfg.gamma, base);
      } else {
        RngStream rng = RngStream::labeled(seed, StreamTag::oracle, j, a);
        q = brute_force_q(env, base, s, a, cfg.horizon, cfg.gamma, cfg.eval.trajectories, rng).mean;
      }
      best = std::max(best, q);
    }
    RngStream rng = RngStream::labeled(seed, StreamTag::evaluation, j);
    const double v =
        policy_value_mc(env, improved, s, cfg.horizon, cfg.gamma, cfg.eval.trajectories, rng);
    out.max_regret = std::max(out.max_regret, best - v);
  }
  if (states.empty()) out.max_regret = 0.0;
  return out;
}

std::vector<RunDetail> run_experiment_detailed(const ExperimentConfig& cfg,
                                               const Executor& executor) {
  validate(cfg);
  const auto env = build_environment(cfg);
  const UniformGrid grid =
      UniformGrid::build(cfg.grid_n, env->spec().dim, env->spec().num_actions);
  std::vector<ResolvedAllocator> resolved;
  for (std::size_t i = 0; i < cfg.allocators.size(); ++i) {
    resolved.push_back(resolve_allocator(cfg, i, *env, grid));
  }

  const std::size_t seeds = cfg.seeds.size();
  std::vector<RunDetail> runs(resolved.size() * seeds);
  executor.for_each_index(runs.size(), [&](std::size_t task) {
    const std::size_t alloc = task / seeds;
    const std::uint64_t seed = cfg.seeds[task % seeds];
    const auto start = std::chrono::steady_clock::now();

    const ConstantPolicy initial(cfg.initial_action);
    RolloutSettings settings{cfg.horizon, cfg.gamma, seed, 0, &executor};
    PolicyIterationResult pi = policy_iteration(*env, initial, resolved[alloc].choice, grid,
                                                cfg.iterations, settings);
    const std::size_t k = pi.policies.size();
    const Policy& base = k >= 2 ? static_cast<const Policy&>(pi.policies[k - 2]) : initial;

    RunDetail& run = runs[task];
    run.grid = grid;
    run.record.seed = seed;
    run.record.allocator = resolved[alloc].label;
    run.record.n = grid.size();
    for (const auto& o : pi.outcomes) run.record.total_rollouts += o.total_rollouts;
    run.record.accepted_count = pi.outcomes.back().accepted_count();
    if (env->analytic()) {
      run.record.wrong_label_count = count_wrong_labels(*env, grid, pi.outcomes.back());
    }
    run.record.measured_regret =
        measure_regret(*env, base, pi.policies.back(), grid, cfg, seed).max_regret;
    if (cfg.record_timing) {
      run.record.wall_time =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    run.outcome = std::move(pi.outcomes.back());
  });
  return runs;
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, const Executor& executor) {
  auto details = run_experiment_detailed(cfg, executor);
  std::vector<RunRecord> records;
  records.reserve(details.size());
  for (auto& d : details) records.push_back(std::move(d.record));
  return records;
}

std::vector<SweepRow> sweep(const ExperimentConfig& templ, std::span<const double> epsilons,
                            const Executor& executor) {
  if (epsilons.size() < 2) throw ConfigError("epsilons", "a sweep needs at least two values");
  const auto env = build_environment(templ);
  const auto smooth = env->smoothness();
  if (!smooth) {
    throw ConfigError("env.name", fmt::format("sweep needs certified smoothness constants; {} has "
                                              "none", env->name()));
  }
  const double delta = templ.allocators.empty() ? 0.05 : templ.allocators.front().delta;

  std::vector<SweepRow> rows;
  for (const double eps : epsilons) {
    if (!(eps > 0.0)) throw ConfigError("epsilons", "values must be positive");
    ExperimentConfig cfg = templ;
    cfg.grid_n = oracle_grid_size(eps, *smooth);
    AllocatorSetting fixed;
    fixed.kind = AllocatorKind::fixed;
    fixed.delta = delta;
    AllocatorSetting count;
    count.kind = AllocatorKind::count;
    count.delta = delta;
    cfg.allocators = {fixed, count};

    const UniformGrid grid =
        UniformGrid::build(cfg.grid_n, env->spec().dim, env->spec().num_actions);
    const auto fixed_resolved = resolve_allocator(cfg, 0, *env, grid);
    const auto count_resolved = resolve_allocator(cfg, 1, *env, grid);
    const auto& cc = std::get<CountConfig>(count_resolved.choice);

    SweepRow row;
    row.epsilon = eps;
    row.n = grid.size();
    row.fixed_c = std::get<FixedConfig>(fixed_resolved.choice).sweeps_per_state;
    row.count_budget = cc.budget;
    row.count_cap = cc.max_sweeps_per_state.value_or(0);

    const auto records = run_experiment(cfg, executor);
    const std::size_t seeds = cfg.seeds.size();
    auto aggregate = [&](std::size_t offset, double& rollouts, double& wrong_rate, double& regret) {
      rollouts = wrong_rate = regret = 0.0;
      for (std::size_t i = 0; i < seeds; ++i) {
        const RunRecord& r = records[offset + i];
        rollouts += static_cast<double>(r.total_rollouts);
        regret += r.measured_regret;
        if (r.wrong_label_count.value_or(0) > 0) wrong_rate += 1.0;
      }
      rollouts /= static_cast<double>(seeds);
      wrong_rate /= static_cast<double>(seeds);
      regret /= static_cast<double>(seeds);
    };
    aggregate(0, row.fixed_mean_rollouts, row.fixed_wrong_run_rate, row.fixed_mean_regret);
    aggregate(seeds, row.count_mean_rollouts, row.count_wrong_run_rate, row.count_mean_regret);
    row.ratio = row.fixed_mean_rollouts / row.count_mean_rollouts;
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_to_csv(std::span<const SweepRow> rows) {
  std::string out =
      "epsilon,n,fixed_c,count_budget,count_cap,fixed_mean_rollouts,count_mean_rollouts,"
      "fixed_wrong_run_rate,count_wrong_run_rate,fixed_mean_regret,count_mean_regret,ratio\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", r.epsilon, r.n, r.fixed_c,
                       r.count_budget, r.count_cap, r.fixed_mean_rollouts, r.count_mean_rollouts,
                       r.fixed_wrong_run_rate, r.count_wrong_run_rate, r.fixed_mean_regret,
                       r.count_mean_regret, r.ratio);
  }
  return out;
}

}  // namespace rsapi::harness
