#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rsapi/harness/config.hpp"
#include "rsapi/harness/experiment.hpp"

namespace rsapi::harness {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// seed,allocator,n,total_rollouts,accepted_count,wrong_label_count,measured_regret,wall_time
std::string csv_header();

/// Header plus one row per record. Doubles use the shortest round-trip
/// representation; absent optionals are empty fields.
std::string to_csv(std::span<const RunRecord> records);

/// Inverse of to_csv. Throws std::invalid_argument on malformed input.
std::vector<RunRecord> parse_csv(std::string_view text);

/// Per-allocator mean, standard deviation and 95% normal-approximation CI
/// of every metric. With fewer than two records std and ci95 are null.
nlohmann::json summarize(std::span<const RunRecord> records);

/// Writes runs.csv and/or summary.json into `out_dir` (created if missing).
/// `metadata` is embedded in the summary under "metadata".
void emit_report(std::span<const RunRecord> records, const std::filesystem::path& out_dir,
                 ReportFormat format, const nlohmann::json& metadata = nlohmann::json::object());

void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace rsapi::harness
