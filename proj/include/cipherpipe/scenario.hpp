#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cipherpipe/perf_model.hpp"

namespace cipherpipe {

class ScenarioParseError : public std::runtime_error {
public:
    ScenarioParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Measured totals for a complete system (the published tables give these
/// directly); gains are computed against the baseline entry.
struct SystemOverride {
    std::string name;
    double cycles = 0;
    double area_mm2 = 0;
    double power_mw = 0;
    bool baseline = false;
};

struct CoreDecl {
    CoreConfig config;
    std::optional<double> cycles_override; // replaces the simulated count
};

/// Plain-text scenario: global keys, then [stages], [cost <cipher>],
/// [feature <name>], [core <index>] and [system <name>] sections.
struct Scenario {
    double clock_mhz = 200.0;
    std::uint64_t stream_len = 22;
    std::optional<Objective> objective;
    std::optional<std::size_t> n_stages;
    StageList stages;
    std::optional<CostTable> cost_table;
    std::vector<CoreDecl> cores;
    std::vector<SystemOverride> systems;

    bool has_systems() const { return !systems.empty(); }
};

Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::string& path);

// ------------------------------------------------------------- reports

enum class ReportFormat { Text, Csv, Json };

ReportFormat report_format_from_string(const std::string& name);

/// One line of the metrics report. Columns are fixed: cycles, time_us,
/// area_mm2, power_mw, gain, gain_per_area, gain_per_power.
struct MetricsRow {
    std::string system;
    RunMetrics metrics;
    GainReport gains; // vs the baseline row (the baseline scores 1.0)
};

struct ScenarioOutcome {
    std::vector<MetricsRow> rows;
    std::vector<CoreConfig> final_cores; // optimize only
    Partitioning partitions;             // model mode only
};

/// Metric pipeline when [system] sections are present, cost-model simulation
/// otherwise (explicit [core] sections or full-featured defaults).
ScenarioOutcome run_simulate(const Scenario& scenario);

/// Strengthen/prune optimization; requires stages, a cost table and an
/// objective. Initial cores come from [core] sections when present.
ScenarioOutcome run_optimize(const Scenario& scenario);

std::string render_metrics(const std::vector<MetricsRow>& rows, ReportFormat format);
std::string render_cores(const std::vector<CoreConfig>& cores, ReportFormat format);

} // namespace cipherpipe
