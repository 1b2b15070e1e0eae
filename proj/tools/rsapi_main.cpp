// rsapi: command-line front end for rollout-sampling policy improvement
// experiments.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "rsapi/bounds.hpp"
#include "rsapi/envs.hpp"
#include "rsapi/errors.hpp"
#include "rsapi/harness/config.hpp"
#include "rsapi/harness/experiment.hpp"
#include "rsapi/harness/report.hpp"
#include "rsapi/rollout_stats.hpp"

namespace {

using namespace rsapi;
using namespace rsapi::harness;

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

struct CommonFlags {
  std::optional<std::size_t> seed_count;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
  std::size_t threads = 1;
  bool timing = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--seed-count", f.seed_count, "Number of consecutive seeds from the first one");
  cmd->add_option("--out-dir", f.out_dir, "Output directory");
  cmd->add_option("--format", f.format, "csv, json or both");
  cmd->add_option("--threads", f.threads, "Worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--timing", f.timing, "Record wall time per run (breaks byte-identical output)");
}

ExperimentConfig load_with_overrides(const std::string& path, const CommonFlags& f) {
  ExperimentConfig cfg = load_config(path);
  if (f.seed_count) {
    if (*f.seed_count < 1) throw ConfigError("--seed-count", "must be >= 1");
    cfg.seeds = seed_range(cfg.seeds.front(), *f.seed_count);
  }
  if (f.out_dir) cfg.output_dir = *f.out_dir;
  if (f.format) {
    const auto fmt = parse_format(*f.format);
    if (!fmt) throw ConfigError("--format", "expected csv, json or both");
    cfg.format = *fmt;
  }
  if (f.timing) cfg.record_timing = true;
  validate(cfg);
  return cfg;
}

nlohmann::json metadata_of(const ExperimentConfig& cfg) {
  nlohmann::json m;
  m["env"] = {{"name", cfg.env.name}, {"d", cfg.env.dim}};
  if (cfg.env.name == "drift_chain") {
    m["env"]["drift"] = cfg.env.drift;
    m["env"]["sigma"] = cfg.env.sigma;
  }
  m["grid_n_requested"] = cfg.grid_n;
  m["T"] = cfg.horizon;
  m["gamma"] = cfg.gamma;
  m["iterations"] = cfg.iterations;
  m["seeds"] = cfg.seeds.size();
  m["count_budget_rule"] = "full sweeps only; budget checked after each sweep";
  m["count_cap_rule"] = "states reaching max_sweeps_per_state leave the active set unaccepted";
  return m;
}

int cmd_run(const std::string& path, const CommonFlags& flags) {
  const ExperimentConfig cfg = load_with_overrides(path, flags);
  const Executor executor(flags.threads);
  const auto records = run_experiment(cfg, executor);
  emit_report(records, cfg.output_dir, cfg.format, metadata_of(cfg));
  const auto summary = summarize(records);
  for (const auto& g : summary["groups"]) {
    std::cout << fmt::format("{:<40} runs={:<5} mean_rollouts={:.6g} mean_regret={:.6g}\n",
                             g["allocator"].get<std::string>(), g["runs"].get<std::size_t>(),
                             g["metrics"]["total_rollouts"]["mean"].get<double>(),
                             g["metrics"]["measured_regret"]["mean"].get<double>());
  }
  std::cout << "wrote " << cfg.output_dir << "\n";
  return kOk;
}

int cmd_sweep(const std::string& path, const std::vector<double>& epsilons,
              const CommonFlags& flags) {
  const ExperimentConfig cfg = load_with_overrides(path, flags);
  const Executor executor(flags.threads);
  const auto rows = sweep(cfg, epsilons, executor);
  const std::string csv = sweep_to_csv(rows);
  std::filesystem::create_directories(cfg.output_dir);
  if (cfg.format != ReportFormat::json) {
    write_text_file(std::filesystem::path(cfg.output_dir) / "sweep.csv", csv);
  }
  if (cfg.format != ReportFormat::csv) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows) {
      j.push_back({{"epsilon", r.epsilon},
                   {"n", r.n},
                   {"fixed_c", r.fixed_c},
                   {"count_budget", r.count_budget},
                   {"count_cap", r.count_cap},
                   {"fixed_mean_rollouts", r.fixed_mean_rollouts},
                   {"count_mean_rollouts", r.count_mean_rollouts},
                   {"fixed_wrong_run_rate", r.fixed_wrong_run_rate},
                   {"count_wrong_run_rate", r.count_wrong_run_rate},
                   {"fixed_mean_regret", r.fixed_mean_regret},
                   {"count_mean_regret", r.count_mean_regret},
                   {"ratio", r.ratio}});
    }
    write_text_file(std::filesystem::path(cfg.output_dir) / "sweep.json", j.dump(2) + "\n");
  }
  std::cout << csv;
  return kOk;
}

struct BoundsFlags {
  std::optional<std::string> config;
  SmoothnessParams p{2.0, 1.0, 1.0, 1.0, 1};
  std::size_t actions = 2;
  double delta = 0.05;
  double gamma = 0.5;
  std::size_t horizon = 2;
  std::optional<double> z;
  std::vector<double> epsilons{0.2, 0.1, 0.05};
  std::string format = "csv";
};

int cmd_bounds(BoundsFlags b) {
  if (b.config) {
    const ExperimentConfig cfg = load_config(*b.config);
    const auto env = build_environment(cfg);
    const auto smooth = env->smoothness();
    if (!smooth) throw ConfigError("env.name", "environment has no certified constants");
    b.p = *smooth;
    b.gamma = cfg.gamma;
    b.horizon = cfg.horizon;
    b.actions = env->spec().num_actions;
    if (!cfg.allocators.empty()) b.delta = cfg.allocators.front().delta;
  }
  try {
    b.p.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError("bounds", e.what());
  }
  if (!(b.delta > 0.0 && b.delta < 1.0)) throw ConfigError("--delta", "must be in (0,1)");
  if (!(b.gamma > 0.0 && b.gamma <= 1.0)) throw ConfigError("--gamma", "must be in (0,1]");
  if (b.horizon < 1) throw ConfigError("--T", "must be >= 1");
  const double z = b.z.value_or(value_range(b.gamma, b.horizon));

  nlohmann::json rows = nlohmann::json::array();
  std::string csv =
      "epsilon,n,rho,c_per_state,total_fixed_sweeps,count_bound_sweeps,epsilon_achieved,"
      "horizon_T,bucket_count\n";
  for (double eps : b.epsilons) {
    if (!(eps > 0.0)) throw ConfigError("--epsilons", "values must be positive");
    ComplexityReport r;
    try {
      r = complexity_report(eps, b.p, z, b.actions, b.delta, b.gamma);
    } catch (const DomainError& e) {
      throw ConfigError("bounds", e.what());
    }
    const std::size_t buckets = bucket_count(b.p, r.rho);
    csv += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.epsilon, r.n_required, r.rho,
                       r.c_per_state, r.total_fixed, r.count_bound, r.epsilon_achieved,
                       r.horizon_T ? std::to_string(*r.horizon_T) : "", buckets);
    nlohmann::json j = {{"epsilon", r.epsilon},
                        {"n", r.n_required},
                        {"rho", r.rho},
                        {"c_per_state", r.c_per_state},
                        {"total_fixed_sweeps", r.total_fixed},
                        {"count_bound_sweeps", r.count_bound},
                        {"epsilon_achieved", r.epsilon_achieved},
                        {"bucket_count", buckets}};
    j["horizon_T"] = r.horizon_T ? nlohmann::json(*r.horizon_T) : nlohmann::json(nullptr);
    nlohmann::json per_bucket = nlohmann::json::array();
    for (std::size_t m = 0; m < buckets; ++m) {
      per_bucket.push_back({{"m", m},
                            {"required_sweeps",
                             per_bucket_required_sweeps(m, z, r.n_required, b.actions, b.delta)},
                            {"size_bound", bucket_size_bound(m, b.p, r.rho)}});
    }
    j["buckets"] = per_bucket;
    rows.push_back(std::move(j));
  }
  if (b.format == "json") {
    nlohmann::json out;
    out["params"] = {{"L", b.p.lipschitz}, {"alpha", b.p.alpha}, {"M", b.p.measure},
                     {"beta", b.p.beta},   {"d", b.p.dim},       {"actions", b.actions},
                     {"delta", b.delta},   {"Z", z}};
    out["rows"] = rows;
    std::cout << out.dump(2) << "\n";
  } else if (b.format == "csv") {
    std::cout << csv;
  } else {
    throw ConfigError("--format", "bounds prints csv or json");
  }
  return kOk;
}

struct ValidateFlags {
  std::string name;
  std::size_t dim = 1;
  std::size_t horizon = 2;
  double gamma = 0.5;
  std::size_t pairs = 10000;
  std::size_t resolution = 100000;
  std::uint64_t seed = 1;
  std::vector<double> epsilons{0.1, 0.2, 0.4};
};

int cmd_validate(const ValidateFlags& v) {
  EnvParams params;
  params.dim = v.dim;
  params.gamma = v.gamma;
  params.horizon = v.horizon;
  std::unique_ptr<Environment> env;
  try {
    env = make_environment(v.name, params);
  } catch (const UnsupportedError& e) {
    throw ConfigError("name", e.what());
  }
  const auto smooth = env->smoothness();
  if (!smooth) {
    std::cout << fmt::format("{}: no certified smoothness constants; nothing to validate\n",
                             env->name());
    return kRuntimeError;
  }
  bool ok = true;
  const ConstantPolicy policy(0);
  RngStream rng(v.seed);
  const HolderCheck h = check_holder(*env, policy, v.horizon, v.gamma, v.pairs, rng);
  const bool holder_ok = h.violations == 0;
  ok = ok && holder_ok;
  std::cout << fmt::format("[{}] hoelder: L={} alpha={} pairs={} violations={} worst_ratio={:.6f}\n",
                           holder_ok ? "PASS" : "FAIL", smooth->lipschitz, smooth->alpha, h.pairs,
                           h.violations, h.worst_ratio);
  // Keep the lattice near the requested resolution in total points.
  std::size_t per_axis = v.resolution;
  if (v.dim > 1) {
    per_axis = static_cast<std::size_t>(
        std::max(2.0, std::floor(std::pow(static_cast<double>(v.resolution), 1.0 / v.dim))));
  }
  for (double eps : v.epsilons) {
    const MeasureCheck m = check_measure(*env, eps, per_axis);
    const bool pass = m.measure <= m.bound + m.quadrature_error;
    ok = ok && pass;
    std::cout << fmt::format("[{}] measure: eps={} meas{{gap<eps}}={:.6f} bound M*eps^beta={:.6f} "
                             "(quadrature error {:.2e})\n",
                             pass ? "PASS" : "FAIL", eps, m.measure, m.bound, m.quadrature_error);
  }
  return ok ? kOk : kRuntimeError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rollout-sampling approximate policy iteration experiments"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  std::string run_config;
  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("config", run_config, "YAML experiment config")->required();
  add_common(run, run_flags);

  CommonFlags sweep_flags;
  std::string sweep_config;
  std::vector<double> epsilons;
  auto* sw = app.add_subcommand("sweep", "Compare FIXED and COUNT across target regrets");
  sw->add_option("config", sweep_config, "YAML experiment config (template)")->required();
  sw->add_option("--epsilons", epsilons, "Target regrets, e.g. 0.2,0.1,0.05")
      ->required()
      ->delimiter(',');
  add_common(sw, sweep_flags);

  BoundsFlags bounds_flags;
  std::string bounds_config;
  auto* bd = app.add_subcommand("bounds", "Print closed-form sample-complexity tables");
  bd->add_option("config", bounds_config, "Optional config supplying env constants");
  bd->add_option("--L", bounds_flags.p.lipschitz, "Hoelder constant");
  bd->add_option("--alpha", bounds_flags.p.alpha, "Hoelder exponent");
  bd->add_option("--M", bounds_flags.p.measure, "Measure constant");
  bd->add_option("--beta", bounds_flags.p.beta, "Measure exponent");
  bd->add_option("--d", bounds_flags.p.dim, "State dimension");
  bd->add_option("--actions", bounds_flags.actions, "Number of actions");
  bd->add_option("--delta", bounds_flags.delta, "Failure probability");
  bd->add_option("--gamma", bounds_flags.gamma, "Discount factor");
  bd->add_option("--T", bounds_flags.horizon, "Rollout horizon");
  bd->add_option("--Z", bounds_flags.z, "Value range (default from gamma and T)");
  bd->add_option("--epsilons", bounds_flags.epsilons, "Target regrets")->delimiter(',');
  bd->add_option("--format", bounds_flags.format, "csv or json");

  ValidateFlags validate_flags;
  auto* ve = app.add_subcommand("validate-env", "Check an environment's regularity constants");
  ve->add_option("name", validate_flags.name, "Environment name")->required();
  ve->add_option("--d", validate_flags.dim, "State dimension");
  ve->add_option("--T", validate_flags.horizon, "Rollout horizon");
  ve->add_option("--gamma", validate_flags.gamma, "Discount factor");
  ve->add_option("--pairs", validate_flags.pairs, "Random pairs for the Hoelder check");
  ve->add_option("--resolution", validate_flags.resolution, "Quadrature points");
  ve->add_option("--seed", validate_flags.seed, "Seed for the pair sampler");
  ve->add_option("--epsilons", validate_flags.epsilons, "Gap levels for the measure check")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*run) return cmd_run(run_config, run_flags);
    if (*sw) return cmd_sweep(sweep_config, epsilons, sweep_flags);
    if (*bd) {
      if (!bounds_config.empty()) bounds_flags.config = bounds_config;
      return cmd_bounds(bounds_flags);
    }
    if (*ve) return cmd_validate(validate_flags);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kRuntimeError;
}
