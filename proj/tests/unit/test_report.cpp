#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rsapi/harness/report.hpp"
#include "rsapi/rng.hpp"

using namespace rsapi;
using namespace rsapi::harness;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("empty record list") {
  CHECK(to_csv({}) == csv_header() + "\n");
  const auto s = summarize({});
  CHECK(s["groups"].is_array());
  CHECK(s["groups"].empty());
}

TEST_CASE("CSV round trip, including absent optionals") {
  std::vector<RunRecord> rs{
      {1, "oracle", 10, 0, 10, 0, -0.1, std::nullopt},
      {2, "fixed:c=5:delta=0.05", 9, 90, 3, std::nullopt, 0.1 + 0.2, 1.25},
  };
  const std::string csv = to_csv(rs);
  CHECK(csv.rfind(csv_header() + "\n", 0) == 0);
  CHECK(csv.find("0.30000000000000004") != std::string::npos);
  CHECK(parse_csv(csv) == rs);
  CHECK_THROWS_AS(parse_csv("a,b\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_csv(csv_header() + "\n1,x,2\n"), std::invalid_argument);
}

TEST_CASE("property: random records round-trip through CSV") {
  RngStream rng(12);
  std::vector<RunRecord> rs;
  for (int i = 0; i < 200; ++i) {
    RunRecord r;
    r.seed = rng();
    r.allocator = (i % 2) ? "count:C=10:cap=none:delta=0.05" : "oracle";
    r.n = rng() % 1000;
    r.total_rollouts = rng();
    r.accepted_count = rng() % 1000;
    if (rng() % 2) r.wrong_label_count = rng() % 10;
    r.measured_regret = rng.uniform(-1.0, 1.0) * std::pow(10.0, static_cast<double>(rng() % 20) - 10);
    if (rng() % 2) r.wall_time = rng.uniform();
    rs.push_back(r);
  }
  CHECK(parse_csv(to_csv(rs)) == rs);
}

TEST_CASE("labels with commas are rejected") {
  std::vector<RunRecord> rs{{1, "a,b", 1, 0, 0, 0, 0.0, std::nullopt}};
  CHECK_THROWS(to_csv(rs));
}

TEST_CASE("summary statistics") {
  std::vector<RunRecord> rs{
      {1, "fixed", 4, 10, 4, 0, 0.1, std::nullopt},
      {2, "fixed", 4, 20, 4, 1, 0.3, std::nullopt},
      {1, "count", 4, 7, 2, 0, 0.2, std::nullopt},
  };
  const auto s = summarize(rs);
  REQUIRE(s["groups"].size() == 2);
  const auto& fixed = s["groups"][0];
  CHECK(fixed["allocator"] == "fixed");
  CHECK(fixed["runs"] == 2);
  const auto& tr = fixed["metrics"]["total_rollouts"];
  CHECK(tr["mean"].get<double>() == 15.0);
  CHECK(tr["std"].get<double>() == doctest::Approx(std::sqrt(50.0)));
  const double half = 1.959963984540054 * std::sqrt(50.0) / std::sqrt(2.0);
  CHECK(tr["ci95"][0].get<double>() == doctest::Approx(15.0 - half));
  CHECK(tr["ci95"][1].get<double>() == doctest::Approx(15.0 + half));
  CHECK_FALSE(fixed["metrics"].contains("wall_time"));
  const auto& count = s["groups"][1];
  CHECK(count["runs"] == 1);
  CHECK(count["metrics"]["total_rollouts"]["std"].is_null());
  CHECK(count["metrics"]["total_rollouts"]["ci95"].is_null());
}

TEST_CASE("emit_report writes the requested files") {
  const auto dir = std::filesystem::temp_directory_path() / "rsapi_report_test";
  std::filesystem::remove_all(dir);
  std::vector<RunRecord> rs{{1, "oracle", 4, 0, 4, 0, 0.0, std::nullopt}};
  emit_report(rs, dir / "csv", ReportFormat::csv);
  CHECK(std::filesystem::exists(dir / "csv" / "runs.csv"));
  CHECK_FALSE(std::filesystem::exists(dir / "csv" / "summary.json"));
  emit_report(rs, dir / "both", ReportFormat::both, {{"note", "x"}});
  CHECK(slurp(dir / "both" / "runs.csv") == to_csv(rs));
  const auto j = nlohmann::json::parse(slurp(dir / "both" / "summary.json"));
  CHECK(j["metadata"]["note"] == "x");
  std::filesystem::remove_all(dir);
}
