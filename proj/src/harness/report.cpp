#include "rsapi/harness/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include <fmt/format.h>

namespace rsapi::harness {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

template <class T>
T parse_number(std::string_view field, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw std::invalid_argument(fmt::format("csv: bad {} '{}'", what, field));
  }
  return value;
}

nlohmann::json stats_of(const std::vector<double>& xs) {
  nlohmann::json out;
  out["count"] = xs.size();
  if (xs.empty()) {
    out["mean"] = nullptr;
    out["std"] = nullptr;
    out["ci95"] = nullptr;
    return out;
  }
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  out["mean"] = mean;
  if (xs.size() < 2) {
    out["std"] = nullptr;
    out["ci95"] = nullptr;
    return out;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  const double half = 1.959963984540054 * sd / std::sqrt(static_cast<double>(xs.size()));
  out["std"] = sd;
  out["ci95"] = {mean - half, mean + half};
  return out;
}

}  // namespace

std::string csv_header() {
  return "seed,allocator,n,total_rollouts,accepted_count,wrong_label_count,measured_regret,"
         "wall_time";
}

std::string to_csv(std::span<const RunRecord> records) {
  std::string out = csv_header() + "\n";
  for (const RunRecord& r : records) {
    if (r.allocator.find_first_of(",\"\n") != std::string::npos) {
      throw std::invalid_argument("csv: allocator label must not contain separators");
    }
    out += fmt::format("{},{},{},{},{},{},{},{}\n", r.seed, r.allocator, r.n, r.total_rollouts,
                       r.accepted_count,
                       r.wrong_label_count ? std::to_string(*r.wrong_label_count) : "",
                       r.measured_regret, r.wall_time ? fmt::format("{}", *r.wall_time) : "");
  }
  return out;
}

std::vector<RunRecord> parse_csv(std::string_view text) {
  std::vector<RunRecord> records;
  bool header = true;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (header) {
      if (line != csv_header()) throw std::invalid_argument("csv: unexpected header");
      header = false;
      continue;
    }
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 8) throw std::invalid_argument("csv: expected 8 fields");
    RunRecord r;
    r.seed = parse_number<std::uint64_t>(f[0], "seed");
    r.allocator = std::string(f[1]);
    r.n = parse_number<std::uint64_t>(f[2], "n");
    r.total_rollouts = parse_number<std::uint64_t>(f[3], "total_rollouts");
    r.accepted_count = parse_number<std::uint64_t>(f[4], "accepted_count");
    if (!f[5].empty()) r.wrong_label_count = parse_number<std::uint64_t>(f[5], "wrong_label_count");
    r.measured_regret = parse_number<double>(f[6], "measured_regret");
    if (!f[7].empty()) r.wall_time = parse_number<double>(f[7], "wall_time");
    records.push_back(std::move(r));
  }
  if (header) throw std::invalid_argument("csv: missing header");
  return records;
}

nlohmann::json summarize(std::span<const RunRecord> records) {
  // Groups keep first-appearance order.
  std::vector<std::string> order;
  std::map<std::string, std::vector<const RunRecord*>> groups;
  for (const RunRecord& r : records) {
    auto [it, inserted] = groups.try_emplace(r.allocator);
    if (inserted) order.push_back(r.allocator);
    it->second.push_back(&r);
  }
  nlohmann::json out;
  out["groups"] = nlohmann::json::array();
  for (const std::string& name : order) {
    const auto& rs = groups[name];
    std::vector<double> rollouts, accepted, wrong, regret, wall;
    for (const RunRecord* r : rs) {
      rollouts.push_back(static_cast<double>(r->total_rollouts));
      accepted.push_back(static_cast<double>(r->accepted_count));
      if (r->wrong_label_count) wrong.push_back(static_cast<double>(*r->wrong_label_count));
      regret.push_back(r->measured_regret);
      if (r->wall_time) wall.push_back(*r->wall_time);
    }
    nlohmann::json g;
    g["allocator"] = name;
    g["runs"] = rs.size();
    g["metrics"]["total_rollouts"] = stats_of(rollouts);
    g["metrics"]["accepted_count"] = stats_of(accepted);
    g["metrics"]["wrong_label_count"] = stats_of(wrong);
    g["metrics"]["measured_regret"] = stats_of(regret);
    if (!wall.empty()) g["metrics"]["wall_time"] = stats_of(wall);
    out["groups"].push_back(std::move(g));
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

void emit_report(std::span<const RunRecord> records, const std::filesystem::path& out_dir,
                 ReportFormat format, const nlohmann::json& metadata) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  if (format == ReportFormat::csv || format == ReportFormat::both) {
    write_text_file(out_dir / "runs.csv", to_csv(records));
  }
  if (format == ReportFormat::json || format == ReportFormat::both) {
    nlohmann::json summary = summarize(records);
    summary["metadata"] = metadata;
    write_text_file(out_dir / "summary.json", summary.dump(2) + "\n");
  }
}

}  // namespace rsapi::harness
