#include "ecoroute/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "ecoroute/error.hpp"
#include "ecoroute/scenario.hpp"

namespace ecoroute {

using nlohmann::json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

TableWriter::TableWriter(std::ostream& out, Style style, const ScenarioConfig& config)
    : out_(out), style_(style) {
  meta("schema_version", std::to_string(kSchemaVersion));
  meta("seed", std::to_string(config.seed));
  meta("dt", format_number(config.dt));
  meta("scenario_hash", std::to_string(scenario_hash(config)));
  if (config.legacy.count > 0) meta("legacy_dc_parameters", "synthetic");
}

void TableWriter::meta(const std::string& key, const std::string& value) {
  out_ << "# " << key << '=' << value << '\n';
}

void TableWriter::columns(const std::vector<std::string>& names) {
  if (style_ == Style::dat) out_ << "# ";
  row(names);
}

void TableWriter::row(const std::vector<std::string>& cells) {
  const char sep = style_ == Style::csv ? ',' : ' ';
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << sep;
    out_ << cells[i];
  }
  out_ << '\n';
}

json to_json(const EquilibriumReport& r) {
  json j = {{"price_spread", r.price_spread},
            {"nash", r.nash},
            {"classification", std::string(to_string(r.classification))}};
  j["distance"] = r.distance ? json(*r.distance) : json(nullptr);
  j["optimality_gap"] = r.optimality_gap ? json(*r.optimality_gap) : json(nullptr);
  return j;
}

json to_json(const BoundEvaluation& b) {
  return {{"t", b.t},
          {"average_consumption", b.average_consumption},
          {"entropy_term", b.entropy_term},
          {"noise_term", b.noise_term},
          {"fluctuation_term", b.fluctuation_term},
          {"remainder_term", b.remainder_term},
          {"optimum", b.optimum},
          {"rhs", b.rhs}};
}

json to_json(const OracleSolution& s) {
  return {{"x", s.x.values},
          {"optimum", s.optimum},
          {"gap", s.gap},
          {"iterations", s.iterations},
          {"converged", s.converged},
          {"non_unique", s.non_unique},
          {"method", std::string(to_string(s.method))}};
}

json to_json(const OracleSummary& o) {
  return {{"optimum", o.optimum},
          {"certificate", o.certificate},
          {"method", o.method},
          {"converged", o.converged}};
}

json to_json(const BoxStats& s) {
  return {{"min", s.min},       {"q1", s.q1},   {"median", s.median},
          {"q3", s.q3},         {"max", s.max}, {"mean", s.mean},
          {"outliers", s.outliers}, {"count", s.count}};
}

json to_json(const RunResult& r) {
  return {{"scenario_hash", r.scenario_hash},
          {"mode", r.mode},
          {"seed", r.seed},
          {"noise_fraction", r.noise_fraction},
          {"price_scale", r.price_scale},
          {"total_rate", r.total_rate},
          {"final_consumption", r.final_consumption},
          {"oracle_optimum", r.oracle_optimum},
          {"realized_gap", r.realized_gap},
          {"equilibrium", to_json(r.final_report)},
          {"wall_seconds", r.wall_seconds}};
}

void write_run_table(std::ostream& out, TableWriter::Style style, const RunResult& run,
                     const ScenarioConfig& config) {
  TableWriter w(out, style, config);
  w.meta("mode", run.mode);
  w.meta("run_seed", std::to_string(run.seed));
  w.meta("noise_fraction", format_number(run.noise_fraction));
  w.meta("oracle_optimum", format_number(run.oracle_optimum));
  w.meta("realized_gap", format_number(run.realized_gap));
  w.columns({"t", "consumption", "average_consumption", "capacity_violation", "routed_flow"});
  for (std::size_t k = 0; k < run.times.size(); ++k) {
    w.row({format_number(run.times[k]), format_number(run.consumption[k]),
           format_number(run.average_consumption[k]), format_number(run.capacity_violation[k]),
           format_number(run.routed_flow[k])});
  }
}

void write_mode_table(std::ostream& out, TableWriter::Style style,
                      const std::vector<ModeRow>& rows, const ScenarioConfig& config) {
  TableWriter w(out, style, config);
  w.columns({"mode", "paths", "final_consumption", "per_gbps", "relative_gain",
             "oracle_optimum", "realized_gap", "oracle_method"});
  for (const auto& r : rows) {
    w.row({r.mode, std::to_string(r.paths), format_number(r.final_consumption),
           format_number(r.per_gbps), format_number(r.relative_gain),
           format_number(r.oracle.optimum), format_number(r.final_consumption - r.oracle.optimum),
           r.oracle.method});
  }
}

void write_noise_table(std::ostream& out, TableWriter::Style style,
                       const std::vector<NoisePoint>& points, const ScenarioConfig& config) {
  TableWriter w(out, style, config);
  w.meta("replicates", std::to_string(config.replicates));
  if (!points.empty()) w.meta("oracle_optimum", format_number(points.front().optimum));
  w.columns({"z", "t", "mean_average_consumption", "time_to_5pct", "final_mean"});
  for (const auto& p : points) {
    const auto t5 = p.time_to_5pct ? format_number(*p.time_to_5pct) : std::string("nan");
    for (std::size_t k = 0; k < p.times.size(); ++k) {
      w.row({format_number(p.z), format_number(p.times[k]), format_number(p.mean_average[k]), t5,
             format_number(p.final_mean)});
    }
  }
}

void write_capacity_table(std::ostream& out, TableWriter::Style style,
                          const std::vector<ViolationRow>& rows, const ScenarioConfig& config) {
  TableWriter w(out, style, config);
  w.meta("replicates", std::to_string(config.replicates));
  w.columns({"mode", "z", "no_capacities", "count", "min", "q1", "median", "q3", "max", "mean",
             "outliers"});
  for (const auto& r : rows) {
    const auto& s = r.stats;
    w.row({r.mode, format_number(r.noise_fraction), r.no_capacities ? "1" : "0",
           std::to_string(s.count), format_number(s.min), format_number(s.q1),
           format_number(s.median), format_number(s.q3), format_number(s.max),
           format_number(s.mean), std::to_string(s.outliers.size())});
  }
}

void write_scale_table(std::ostream& out, TableWriter::Style style,
                       const std::vector<ScalePoint>& points, const ScenarioConfig& config) {
  TableWriter w(out, style, config);
  w.meta("mixed_mode", config.mode.label());
  w.columns({"sources", "total_rate", "single_consumption", "mixed_consumption", "gain",
             "relative_gain", "windows_to_99", "oracle_optimum"});
  for (const auto& p : points) {
    w.row({std::to_string(p.sources), format_number(p.total_rate),
           format_number(p.single_consumption), format_number(p.mixed_consumption),
           format_number(p.gain), format_number(p.relative_gain), std::to_string(p.windows_to_99),
           format_number(p.optimum)});
  }
}

json make_report(const std::string& kind, const ScenarioConfig& config, json body) {
  json j = {{"schema_version", kSchemaVersion},
            {"kind", kind},
            {"scenario_hash", scenario_hash(config)},
            {"config", config_to_json(config)},
            {"result", std::move(body)}};
  if (config.legacy.count > 0) j["legacy_dc_parameters"] = "synthetic";
  return j;
}

void write_text(const std::filesystem::path& file, const std::string& text) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + file.string());
  out << text;
}

}  // namespace ecoroute
