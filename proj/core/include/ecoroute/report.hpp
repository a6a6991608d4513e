#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ecoroute/diagnostics.hpp"
#include "ecoroute/experiments.hpp"
#include "ecoroute/generator.hpp"
#include "ecoroute/oracle.hpp"

namespace ecoroute {

// Shortest round-trip decimal form used in every CSV cell.
std::string format_number(double v);

/// Comment-prefixed metadata plus one header row, shared by CSV and gnuplot
/// outputs. CSV uses commas, .dat files whitespace.
class TableWriter {
 public:
  enum class Style { csv, dat };

  TableWriter(std::ostream& out, Style style, const ScenarioConfig& config);

  void meta(const std::string& key, const std::string& value);
  void columns(const std::vector<std::string>& names);
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& out_;
  Style style_;
};

nlohmann::json to_json(const EquilibriumReport& report);
nlohmann::json to_json(const BoundEvaluation& bound);
nlohmann::json to_json(const OracleSolution& solution);
nlohmann::json to_json(const OracleSummary& oracle);
nlohmann::json to_json(const BoxStats& stats);
nlohmann::json to_json(const RunResult& run);

void write_run_table(std::ostream& out, TableWriter::Style style, const RunResult& run,
                     const ScenarioConfig& config);
void write_mode_table(std::ostream& out, TableWriter::Style style,
                      const std::vector<ModeRow>& rows, const ScenarioConfig& config);
void write_noise_table(std::ostream& out, TableWriter::Style style,
                       const std::vector<NoisePoint>& points, const ScenarioConfig& config);
void write_capacity_table(std::ostream& out, TableWriter::Style style,
                          const std::vector<ViolationRow>& rows, const ScenarioConfig& config);
void write_scale_table(std::ostream& out, TableWriter::Style style,
                       const std::vector<ScalePoint>& points, const ScenarioConfig& config);

// JSON report wrapper: schema version, config, hash and `body`.
nlohmann::json make_report(const std::string& kind, const ScenarioConfig& config,
                           nlohmann::json body);

void write_text(const std::filesystem::path& file, const std::string& text);

}  // namespace ecoroute
