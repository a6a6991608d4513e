#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ecoroute/report.hpp"

namespace ecoroute {
namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(3.0), "3");
  EXPECT_EQ(format_number(-2.5e-7), "-2.5e-07");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_number(-INFINITY), "-inf");
  const double v = 0.1 + 0.2;
  EXPECT_EQ(std::stod(format_number(v)), v);
}

TEST(TableWriter, MetadataThenHeaderThenRows) {
  ScenarioConfig c;
  c.legacy.count = 0;
  std::ostringstream csv;
  TableWriter w(csv, TableWriter::Style::csv, c);
  w.meta("mode", "single");
  w.columns({"a", "b"});
  w.row({"1", "2"});
  const auto lines = lines_of(csv.str());
  ASSERT_EQ(lines.size(), 7u);
  EXPECT_EQ(lines[0], "# schema_version=1");
  EXPECT_EQ(lines[1], "# seed=1");
  EXPECT_EQ(lines[3].rfind("# scenario_hash=", 0), 0u);
  EXPECT_EQ(lines[4], "# mode=single");
  EXPECT_EQ(lines[5], "a,b");
  EXPECT_EQ(lines[6], "1,2");
}

TEST(TableWriter, DatStyleCommentsHeader) {
  ScenarioConfig c;
  std::ostringstream dat;
  TableWriter w(dat, TableWriter::Style::dat, c);
  w.columns({"a", "b"});
  w.row({"1", "2"});
  const auto lines = lines_of(dat.str());
  EXPECT_EQ(lines.back(), "1 2");
  EXPECT_EQ(lines[lines.size() - 2], "# a b");
  // Legacy data centers carry synthetic parameters and say so.
  EXPECT_NE(dat.str().find("legacy_dc_parameters=synthetic"), std::string::npos);
}

TEST(RunTable, OneRowPerSample) {
  RunResult run;
  run.mode = "single";
  run.times = {0, 1, 2};
  run.consumption = {3, 2, 1};
  run.average_consumption = {3, 2.5, 2};
  run.capacity_violation = {0, 0, 0.5};
  run.routed_flow = {1, 1, 1};
  std::ostringstream out;
  write_run_table(out, TableWriter::Style::csv, run, ScenarioConfig{});
  const auto lines = lines_of(out.str());
  EXPECT_EQ(lines.back(), "2,1,2,0.5,1");
  EXPECT_EQ(lines[lines.size() - 4], "t,consumption,average_consumption,capacity_violation,routed_flow");
}

TEST(ModeTable, ColumnsAndGap) {
  ModeRow row;
  row.mode = "mixed:4x5";
  row.paths = 20;
  row.final_consumption = 110;
  row.oracle.optimum = 100;
  row.oracle.method = "frank-wolfe";
  std::ostringstream out;
  write_mode_table(out, TableWriter::Style::csv, {row}, ScenarioConfig{});
  EXPECT_EQ(lines_of(out.str()).back(), "mixed:4x5,20,110,0,0,100,10,frank-wolfe");
}

TEST(CapacityTable, FlagsUncapacitatedRows) {
  ViolationRow row;
  row.mode = "single";
  row.noise_fraction = 0.25;
  row.no_capacities = true;
  row.stats = box_stats({0, 0, 0});
  std::ostringstream out;
  write_capacity_table(out, TableWriter::Style::csv, {row}, ScenarioConfig{});
  EXPECT_EQ(lines_of(out.str()).back(), "single,0.25,1,3,0,0,0,0,0,0,0");
}

TEST(Json, Blocks) {
  EquilibriumReport eq;
  eq.nash = true;
  eq.classification = EquilibriumClass::strict;
  eq.price_spread = {0.0};
  const auto j = to_json(eq);
  EXPECT_EQ(j["classification"], "strict");
  EXPECT_TRUE(j["distance"].is_null());

  BoundEvaluation b;
  b.rhs = 4.0;
  EXPECT_EQ(to_json(b)["rhs"], 4.0);
  EXPECT_EQ(to_json(box_stats({1, 2, 3}))["median"], 2.0);
}

TEST(Report, WrapperCarriesConfigAndHash) {
  ScenarioConfig c;
  c.seed = 9;
  const auto j = make_report("solve", c, {{"value", 1}});
  EXPECT_EQ(j["kind"], "solve");
  EXPECT_EQ(j["scenario_hash"].get<std::uint64_t>(), scenario_hash(c));
  EXPECT_EQ(j["config"]["seed"], 9);
  EXPECT_EQ(j["result"]["value"], 1);
}

TEST(WriteText, CreatesParents) {
  const auto dir = std::filesystem::temp_directory_path() / "ecoroute_report_test";
  const auto file = dir / "nested" / "out.txt";
  write_text(file, "hello\n");
  std::ifstream in(file);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "hello");
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace ecoroute
