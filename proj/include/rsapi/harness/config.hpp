#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rsapi/mdp.hpp"

namespace rsapi::harness {

enum class AllocatorKind { oracle, fixed, count };

std::string_view to_string(AllocatorKind kind) noexcept;

/// One allocator setting. Unset sweep counts are derived from the bound
/// formulas at run time ("auto" in the config file).
struct AllocatorSetting {
  AllocatorKind kind = AllocatorKind::fixed;
  double delta = 0.05;
  std::optional<std::uint64_t> sweeps_per_state;  // FIXED c
  std::optional<std::uint64_t> budget;            // COUNT C

  enum class CapMode { automatic, none, value };
  CapMode cap_mode = CapMode::automatic;
  std::uint64_t cap_value = 0;
};

struct EnvSetting {
  std::string name = "linear_split";
  std::size_t dim = 1;
  double drift = 0.1;
  double sigma = 0.05;
};

struct EvalSetting {
  std::size_t test_states = 200;
  std::size_t trajectories = 20;
  bool corners = true;  // add every grid-cell corner to the test set
};

enum class ReportFormat { csv, json, both };

std::optional<ReportFormat> parse_format(std::string_view name);

struct ExperimentConfig {
  EnvSetting env;
  std::vector<AllocatorSetting> allocators;
  std::uint64_t grid_n = 16;
  std::size_t horizon = 2;
  double gamma = 0.5;
  Action initial_action = 0;
  std::size_t iterations = 1;
  std::vector<std::uint64_t> seeds{1};
  EvalSetting eval;
  std::string output_dir = "out";
  ReportFormat format = ReportFormat::both;
  bool record_timing = false;
};

/// Parses the YAML experiment document. Unknown keys and ill-typed values
/// raise ConfigError naming the field path (e.g. "allocators[1].delta").
ExperimentConfig parse_config(std::string_view yaml_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Semantic checks that do not depend on the document syntax.
void validate(const ExperimentConfig& config);

/// first, first+1, ..., first+count-1
std::vector<std::uint64_t> seed_range(std::uint64_t first, std::size_t count);

}  // namespace rsapi::harness
