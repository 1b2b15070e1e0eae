#include "rsapi/harness/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "rsapi/envs.hpp"
#include "rsapi/errors.hpp"

namespace rsapi::harness {

namespace {

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const YAML::Node& node, const std::string& path,
                    const std::set<std::string>& allowed) {
  if (!node.IsMap()) throw ConfigError(path, "expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) throw ConfigError(join(path, key), "unknown key");
  }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) throw ConfigError(path, "expected a scalar value");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(path, "cannot parse '" + node.Scalar() + "'");
  }
}

template <class T>
void read(const YAML::Node& parent, const std::string& key, const std::string& path, T& out) {
  if (const YAML::Node n = parent[key]) out = scalar<T>(n, join(path, key));
}

std::uint64_t read_count(const YAML::Node& node, const std::string& path) {
  const auto text = scalar<std::string>(node, path);
  if (!text.empty() && text.front() == '-') throw ConfigError(path, "must be non-negative");
  return scalar<std::uint64_t>(node, path);
}

// "auto" -> nullopt, integer -> value
std::optional<std::uint64_t> read_auto_count(const YAML::Node& node, const std::string& path) {
  if (node.IsScalar() && node.Scalar() == "auto") return std::nullopt;
  return read_count(node, path);
}

AllocatorSetting parse_allocator(const YAML::Node& node, const std::string& path) {
  reject_unknown(node, path, {"name", "delta", "c", "C", "max_sweeps_per_state"});
  AllocatorSetting a;
  if (!node["name"]) throw ConfigError(join(path, "name"), "missing allocator name");
  const auto name = scalar<std::string>(node["name"], join(path, "name"));
  if (name == "oracle") {
    a.kind = AllocatorKind::oracle;
  } else if (name == "fixed") {
    a.kind = AllocatorKind::fixed;
  } else if (name == "count") {
    a.kind = AllocatorKind::count;
  } else {
    throw ConfigError(join(path, "name"), "unknown allocator '" + name + "'");
  }
  read(node, "delta", path, a.delta);
  if (const YAML::Node c = node["c"]) {
    if (a.kind != AllocatorKind::fixed) throw ConfigError(join(path, "c"), "only valid for fixed");
    a.sweeps_per_state = read_auto_count(c, join(path, "c"));
  }
  if (const YAML::Node c = node["C"]) {
    if (a.kind != AllocatorKind::count) throw ConfigError(join(path, "C"), "only valid for count");
    a.budget = read_auto_count(c, join(path, "C"));
  }
  if (const YAML::Node cap = node["max_sweeps_per_state"]) {
    const std::string p = join(path, "max_sweeps_per_state");
    if (a.kind != AllocatorKind::count) throw ConfigError(p, "only valid for count");
    if (cap.IsScalar() && cap.Scalar() == "auto") {
      a.cap_mode = AllocatorSetting::CapMode::automatic;
    } else if (cap.IsScalar() && cap.Scalar() == "none") {
      a.cap_mode = AllocatorSetting::CapMode::none;
    } else {
      a.cap_mode = AllocatorSetting::CapMode::value;
      a.cap_value = read_count(cap, p);
    }
  }
  return a;
}

}  // namespace

std::string_view to_string(AllocatorKind kind) noexcept {
  switch (kind) {
    case AllocatorKind::oracle: return "oracle";
    case AllocatorKind::fixed: return "fixed";
    case AllocatorKind::count: return "count";
  }
  return "unknown";
}

std::optional<ReportFormat> parse_format(std::string_view name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  if (name == "both") return ReportFormat::both;
  return std::nullopt;
}

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::size_t count) {
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t i = 0; i < count; ++i) seeds[i] = first + i;
  return seeds;
}

ExperimentConfig parse_config(std::string_view yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw ConfigError("", std::string("malformed config: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("", "config must be a mapping");
  reject_unknown(root, "",
                 {"env", "grid", "rollout", "policy", "allocator", "allocators", "seeds", "eval",
                  "output"});

  ExperimentConfig cfg;
  if (const YAML::Node env = root["env"]) {
    reject_unknown(env, "env", {"name", "d", "drift", "sigma"});
    read(env, "name", "env", cfg.env.name);
    read(env, "d", "env", cfg.env.dim);
    read(env, "drift", "env", cfg.env.drift);
    read(env, "sigma", "env", cfg.env.sigma);
  }
  if (const YAML::Node grid = root["grid"]) {
    reject_unknown(grid, "grid", {"n", "d"});
    if (grid["n"]) cfg.grid_n = read_count(grid["n"], "grid.n");
    if (grid["d"] && scalar<std::size_t>(grid["d"], "grid.d") != cfg.env.dim) {
      throw ConfigError("grid.d", "must equal env.d");
    }
  }
  if (const YAML::Node rollout = root["rollout"]) {
    reject_unknown(rollout, "rollout", {"T", "gamma"});
    read(rollout, "T", "rollout", cfg.horizon);
    read(rollout, "gamma", "rollout", cfg.gamma);
  }
  if (const YAML::Node policy = root["policy"]) {
    reject_unknown(policy, "policy", {"initial_action", "iterations"});
    read(policy, "initial_action", "policy", cfg.initial_action);
    read(policy, "iterations", "policy", cfg.iterations);
  }
  if (root["allocator"] && root["allocators"]) {
    throw ConfigError("allocators", "give either 'allocator' or 'allocators', not both");
  }
  if (const YAML::Node a = root["allocator"]) cfg.allocators.push_back(parse_allocator(a, "allocator"));
  if (const YAML::Node list = root["allocators"]) {
    if (!list.IsSequence()) throw ConfigError("allocators", "expected a list");
    for (std::size_t i = 0; i < list.size(); ++i) {
      cfg.allocators.push_back(parse_allocator(list[i], "allocators[" + std::to_string(i) + "]"));
    }
  }
  if (const YAML::Node seeds = root["seeds"]) {
    if (seeds.IsSequence()) {
      cfg.seeds.clear();
      for (std::size_t i = 0; i < seeds.size(); ++i) {
        cfg.seeds.push_back(read_count(seeds[i], "seeds[" + std::to_string(i) + "]"));
      }
    } else if (seeds.IsMap()) {
      reject_unknown(seeds, "seeds", {"first", "count"});
      if (!seeds["count"]) throw ConfigError("seeds.count", "missing");
      const std::uint64_t first = seeds["first"] ? read_count(seeds["first"], "seeds.first") : 1;
      cfg.seeds = seed_range(first, read_count(seeds["count"], "seeds.count"));
    } else {
      cfg.seeds = {read_count(seeds, "seeds")};
    }
  }
  if (const YAML::Node eval = root["eval"]) {
    reject_unknown(eval, "eval", {"test_states", "trajectories", "corners"});
    read(eval, "test_states", "eval", cfg.eval.test_states);
    read(eval, "trajectories", "eval", cfg.eval.trajectories);
    read(eval, "corners", "eval", cfg.eval.corners);
  }
  if (const YAML::Node out = root["output"]) {
    reject_unknown(out, "output", {"dir", "format", "timing"});
    read(out, "dir", "output", cfg.output_dir);
    if (out["format"]) {
      const auto f = scalar<std::string>(out["format"], "output.format");
      const auto parsed = parse_format(f);
      if (!parsed) throw ConfigError("output.format", "expected csv, json or both");
      cfg.format = *parsed;
    }
    read(out, "timing", "output", cfg.record_timing);
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void validate(const ExperimentConfig& cfg) {
  const auto names = environment_names();
  if (std::find(names.begin(), names.end(), cfg.env.name) == names.end()) {
    throw ConfigError("env.name", "unknown environment '" + cfg.env.name + "'");
  }
  if (cfg.env.dim < 1 || cfg.env.dim > kMaxStateDim) throw ConfigError("env.d", "out of range");
  if (cfg.env.name == "drift_chain" && (cfg.env.drift < 0.0 || cfg.env.sigma < 0.0)) {
    throw ConfigError("env", "drift and sigma must be non-negative");
  }
  if (cfg.grid_n < 1) throw ConfigError("grid.n", "must be >= 1");
  if (cfg.horizon < 1) throw ConfigError("rollout.T", "must be >= 1");
  if (!(cfg.gamma > 0.0 && cfg.gamma <= 1.0)) throw ConfigError("rollout.gamma", "must be in (0,1]");
  if (cfg.initial_action >= 2) throw ConfigError("policy.initial_action", "must be 0 or 1");
  if (cfg.iterations < 1) throw ConfigError("policy.iterations", "must be >= 1");
  if (cfg.allocators.empty()) throw ConfigError("allocators", "at least one allocator is required");
  for (std::size_t i = 0; i < cfg.allocators.size(); ++i) {
    const auto& a = cfg.allocators[i];
    const std::string path = "allocators[" + std::to_string(i) + "]";
    if (!(a.delta > 0.0 && a.delta < 1.0)) throw ConfigError(path + ".delta", "must be in (0,1)");
    if (a.sweeps_per_state && *a.sweeps_per_state < 1) throw ConfigError(path + ".c", "must be >= 1");
    if (a.cap_mode == AllocatorSetting::CapMode::value && a.cap_value < 1) {
      throw ConfigError(path + ".max_sweeps_per_state", "must be >= 1");
    }
    if (a.kind == AllocatorKind::oracle && cfg.env.name == "drift_chain") {
      throw ConfigError(path + ".name", "oracle needs an analytic environment");
    }
  }
  if (cfg.seeds.empty()) throw ConfigError("seeds", "at least one seed is required");
  if (cfg.eval.trajectories < 2) throw ConfigError("eval.trajectories", "must be >= 2");
}

}  // namespace rsapi::harness
