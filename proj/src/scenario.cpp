#include "cipherpipe/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace cipherpipe {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double parse_double(const std::string& value, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size())
            throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ScenarioParseError(line, "expected a number, got \"" + value + "\"");
    }
}

std::uint64_t parse_u64(const std::string& value, std::size_t line) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(value, &used);
        if (used != value.size())
            throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ScenarioParseError(line, "expected a count, got \"" + value + "\"");
    }
}

bool parse_bool(const std::string& value, std::size_t line) {
    if (value == "true" || value == "1")
        return true;
    if (value == "false" || value == "0")
        return false;
    throw ScenarioParseError(line, "expected true/false, got \"" + value + "\"");
}

struct Section {
    enum Kind { None, Stages, Cost, Feature, Core, System } kind = None;
    std::string arg;
};

// `cipher=idea iterations=20`
StageSpec parse_stage_line(const std::string& text, std::size_t line) {
    std::istringstream is(text);
    std::string token;
    std::optional<CipherId> cipher;
    std::optional<std::uint64_t> iterations;
    while (is >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos)
            throw ScenarioParseError(line, "stage entries use key=value tokens");
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "cipher") {
            cipher = cipher_from_string(value);
            if (!cipher)
                throw ScenarioParseError(line, "unknown cipher \"" + value + "\"");
        } else if (key == "iterations") {
            iterations = parse_u64(value, line);
        } else {
            throw ScenarioParseError(line, "unknown stage key \"" + key + "\"");
        }
    }
    if (!cipher || !iterations)
        throw ScenarioParseError(line, "stage entries need cipher= and iterations=");
    if (*iterations == 0 || *iterations > 0xFFFFFFFFull)
        throw ScenarioParseError(line, "iterations out of range");
    return StageSpec{*cipher, static_cast<std::uint32_t>(*iterations)};
}

} // namespace

Scenario parse_scenario(std::istream& in) {
    Scenario sc;
    Section section;
    std::optional<std::size_t> core_index;
    CostTable table; // filled lazily; attached if any cost/feature section appears
    bool have_cost_section = false;
    std::vector<std::string> seen_sections;
    std::vector<std::pair<std::size_t, CoreDecl>> cores;

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos)
            raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty())
            continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ScenarioParseError(line_no, "unterminated section header");
            const std::string inner = trim(line.substr(1, line.size() - 2));
            std::istringstream is(inner);
            std::string kind, arg;
            is >> kind;
            std::getline(is, arg);
            arg = trim(arg);

            if (std::find(seen_sections.begin(), seen_sections.end(), inner) !=
                seen_sections.end())
                throw ScenarioParseError(line_no, "duplicate section [" + inner + "]");
            seen_sections.push_back(inner);

            if (kind == "stages") {
                section = {Section::Stages, ""};
            } else if (kind == "cost") {
                if (!cipher_from_string(arg))
                    throw ScenarioParseError(line_no, "unknown cipher \"" + arg + "\"");
                section = {Section::Cost, arg};
                have_cost_section = true;
            } else if (kind == "feature") {
                if (arg != "base" && arg != "mul16_32" && arg != "icache8" && arg != "dcache8")
                    throw ScenarioParseError(line_no, "unknown feature \"" + arg + "\"");
                section = {Section::Feature, arg};
                have_cost_section = true;
            } else if (kind == "core") {
                const std::size_t idx = parse_u64(arg, line_no);
                if (idx == 0)
                    throw ScenarioParseError(line_no, "core indices start at 1");
                section = {Section::Core, arg};
                core_index = idx;
                cores.emplace_back(idx, CoreDecl{});
                cores.back().second.config = full_featured_core(sc.clock_mhz);
            } else if (kind == "system") {
                if (arg.empty())
                    throw ScenarioParseError(line_no, "system sections need a name");
                section = {Section::System, arg};
                sc.systems.push_back(SystemOverride{arg, 0, 0, 0, false});
            } else {
                throw ScenarioParseError(line_no, "unknown section kind \"" + kind + "\"");
            }
            continue;
        }

        if (section.kind == Section::Stages) {
            sc.stages.push_back(parse_stage_line(line, line_no));
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ScenarioParseError(line_no, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ScenarioParseError(line_no, "expected key = value");

        switch (section.kind) {
        case Section::None:
            if (key == "clock_mhz")
                sc.clock_mhz = parse_double(value, line_no);
            else if (key == "stream_len")
                sc.stream_len = parse_u64(value, line_no);
            else if (key == "n_stages")
                sc.n_stages = parse_u64(value, line_no);
            else if (key == "objective") {
                if (value == "min_area")
                    sc.objective = Objective::MinArea;
                else if (value == "min_power")
                    sc.objective = Objective::MinPower;
                else
                    throw ScenarioParseError(line_no, "objective must be min_area or min_power");
            } else
                throw ScenarioParseError(line_no, "unknown global key \"" + key + "\"");
            break;

        case Section::Cost: {
            auto& cost = table.cipher[static_cast<std::size_t>(*cipher_from_string(section.arg))];
            if (key == "cycles_per_iteration")
                cost.cycles_per_iteration = parse_double(value, line_no);
            else if (key == "mul_factor")
                cost.mul_factor = parse_double(value, line_no);
            else if (key == "icache8_factor")
                cost.icache8_factor = parse_double(value, line_no);
            else if (key == "dcache8_factor")
                cost.dcache8_factor = parse_double(value, line_no);
            else
                throw ScenarioParseError(line_no, "unknown cost key \"" + key + "\"");
            break;
        }

        case Section::Feature: {
            FeatureCosts* fc = nullptr;
            if (section.arg == "base")
                fc = &table.base_core;
            else if (section.arg == "mul16_32")
                fc = &table.mul16_32;
            else if (section.arg == "icache8")
                fc = &table.icache8;
            else
                fc = &table.dcache8;
            if (key == "area_mm2")
                fc->area_mm2 = parse_double(value, line_no);
            else if (key == "power_mw")
                fc->power_mw = parse_double(value, line_no);
            else
                throw ScenarioParseError(line_no, "unknown feature key \"" + key + "\"");
            break;
        }

        case Section::Core: {
            CoreDecl& decl = cores.back().second;
            if (key == "mul16_32")
                decl.config.has_mul16_32 = parse_bool(value, line_no);
            else if (key == "icache_kb")
                decl.config.icache_kb = static_cast<int>(parse_u64(value, line_no));
            else if (key == "dcache_kb")
                decl.config.dcache_kb = static_cast<int>(parse_u64(value, line_no));
            else if (key == "cycles")
                decl.cycles_override = parse_double(value, line_no);
            else
                throw ScenarioParseError(line_no, "unknown core key \"" + key + "\"");
            break;
        }

        case Section::System: {
            SystemOverride& sys = sc.systems.back();
            if (key == "cycles")
                sys.cycles = parse_double(value, line_no);
            else if (key == "area_mm2")
                sys.area_mm2 = parse_double(value, line_no);
            else if (key == "power_mw")
                sys.power_mw = parse_double(value, line_no);
            else if (key == "baseline")
                sys.baseline = parse_bool(value, line_no);
            else
                throw ScenarioParseError(line_no, "unknown system key \"" + key + "\"");
            break;
        }

        case Section::Stages:
            break; // handled above
        }
    }

    if (have_cost_section)
        sc.cost_table = table;

    if (!cores.empty()) {
        std::sort(cores.begin(), cores.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t i = 0; i < cores.size(); ++i)
            if (cores[i].first != i + 1)
                throw ScenarioParseError(0, "core sections must be numbered 1..n contiguously");
        for (auto& [idx, decl] : cores) {
            decl.config.clock_mhz = sc.clock_mhz;
            sc.cores.push_back(std::move(decl));
        }
    }

    const std::size_t baselines = static_cast<std::size_t>(
        std::count_if(sc.systems.begin(), sc.systems.end(),
                      [](const SystemOverride& s) { return s.baseline; }));
    if (sc.systems.size() > 1 && baselines != 1)
        throw ScenarioParseError(0, "exactly one [system] must set baseline = true");

    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open scenario file: " + path);
    try {
        return parse_scenario(in);
    } catch (const ScenarioParseError& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

// -------------------------------------------------------------- running

namespace {

CipherWeights weights_from(const CostTable& table) {
    const CoreConfig reference = full_featured_core();
    CipherWeights w;
    for (std::size_t i = 0; i < kCipherCount; ++i)
        w[i] = table.cycles_per_iteration(static_cast<CipherId>(i), reference);
    return w;
}

Partitioning scenario_partitions(const Scenario& sc) {
    if (sc.stages.empty())
        throw std::runtime_error("scenario has no [stages] section");
    if (!sc.cost_table)
        throw std::runtime_error("scenario has no cost table");
    const std::size_t n = sc.n_stages.value_or(sc.cores.empty() ? 5 : sc.cores.size());
    // partition balancing uses the cost table itself as the weight source
    MasterKey128 dummy_key{};
    ProductCipherSpec spec(sc.stages, dummy_key);
    return partition(spec, n, weights_from(*sc.cost_table));
}

std::vector<CoreConfig> scenario_cores(const Scenario& sc, std::size_t n, bool for_optimize) {
    if (!sc.cores.empty()) {
        if (sc.cores.size() != n)
            throw std::runtime_error("scenario declares " + std::to_string(sc.cores.size()) +
                                     " cores but the partitioning needs " + std::to_string(n));
        std::vector<CoreConfig> cores;
        for (const auto& decl : sc.cores)
            cores.push_back(decl.config);
        return cores;
    }
    return std::vector<CoreConfig>(
        n, for_optimize ? minimal_core(sc.clock_mhz) : full_featured_core(sc.clock_mhz));
}

MetricsRow row_with_gains(std::string name, const RunMetrics& metrics, const RunMetrics& base) {
    return MetricsRow{std::move(name), metrics, gain_report(metrics, base)};
}

ScenarioOutcome run_system_overrides(const Scenario& sc) {
    ScenarioOutcome out;
    const SystemOverride* baseline = nullptr;
    for (const auto& sys : sc.systems)
        if (sys.baseline || sc.systems.size() == 1)
            baseline = &sys;
    const RunMetrics base = make_metrics(baseline->cycles, sc.clock_mhz, baseline->area_mm2,
                                         baseline->power_mw);
    for (const auto& sys : sc.systems) {
        const RunMetrics m = make_metrics(sys.cycles, sc.clock_mhz, sys.area_mm2, sys.power_mw);
        out.rows.push_back(row_with_gains(sys.name, m, base));
    }
    return out;
}

RunMetrics apply_core_overrides(const Scenario& sc, const SimulationResult& sim) {
    std::vector<double> cycles = sim.core_cycles;
    for (std::size_t i = 0; i < sc.cores.size() && i < cycles.size(); ++i)
        if (sc.cores[i].cycles_override)
            cycles[i] = *sc.cores[i].cycles_override;
    return make_metrics(system_cycles(cycles), sc.clock_mhz, sim.metrics.total_area_mm2,
                        sim.metrics.total_power_mw);
}

} // namespace

ScenarioOutcome run_simulate(const Scenario& sc) {
    if (sc.has_systems())
        return run_system_overrides(sc);

    ScenarioOutcome out;
    out.partitions = scenario_partitions(sc);
    const std::vector<CoreConfig> cores = scenario_cores(sc, out.partitions.size(), false);

    const SimulationResult single = simulate_single(out.partitions, full_featured_core(sc.clock_mhz),
                                                    *sc.cost_table, sc.stream_len);
    const SimulationResult pipeline =
        simulate(out.partitions, cores, *sc.cost_table, sc.stream_len);
    const RunMetrics pipeline_metrics = apply_core_overrides(sc, pipeline);

    out.rows.push_back(row_with_gains("single", single.metrics, single.metrics));
    out.rows.push_back(row_with_gains("pipeline", pipeline_metrics, single.metrics));
    return out;
}

ScenarioOutcome run_optimize(const Scenario& sc) {
    if (!sc.objective)
        throw std::runtime_error("optimize needs an objective (min_area or min_power)");

    ScenarioOutcome out;
    out.partitions = scenario_partitions(sc);
    const std::vector<CoreConfig> initial = scenario_cores(sc, out.partitions.size(), true);

    out.final_cores =
        optimize(out.partitions, *sc.cost_table, *sc.objective, sc.stream_len, initial);

    const SimulationResult single = simulate_single(out.partitions, full_featured_core(sc.clock_mhz),
                                                    *sc.cost_table, sc.stream_len);
    const SimulationResult before =
        simulate(out.partitions, initial, *sc.cost_table, sc.stream_len);
    const SimulationResult after =
        simulate(out.partitions, out.final_cores, *sc.cost_table, sc.stream_len);

    out.rows.push_back(row_with_gains("single", single.metrics, single.metrics));
    out.rows.push_back(row_with_gains("initial", before.metrics, single.metrics));
    out.rows.push_back(row_with_gains("optimized", after.metrics, single.metrics));
    return out;
}

// ------------------------------------------------------------ rendering

ReportFormat report_format_from_string(const std::string& name) {
    if (name == "text")
        return ReportFormat::Text;
    if (name == "csv")
        return ReportFormat::Csv;
    if (name == "json")
        return ReportFormat::Json;
    throw std::invalid_argument("report format must be text, csv or json");
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

} // namespace

std::string render_metrics(const std::vector<MetricsRow>& rows, ReportFormat format) {
    switch (format) {
    case ReportFormat::Csv: {
        std::ostringstream os;
        os << "system,cycles,time_us,area_mm2,power_mw,gain,gain_per_area,gain_per_power\n";
        for (const auto& r : rows)
            os << r.system << ',' << fmt(r.metrics.total_cycles) << ','
               << fmt(r.metrics.running_time_us) << ',' << fmt(r.metrics.total_area_mm2) << ','
               << fmt(r.metrics.total_power_mw) << ',' << fmt(r.gains.performance_gain) << ','
               << fmt(r.gains.gain_per_area_overhead) << ','
               << fmt(r.gains.gain_per_power_overhead) << '\n';
        return os.str();
    }
    case ReportFormat::Json: {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows)
            arr.push_back({{"system", r.system},
                           {"cycles", r.metrics.total_cycles},
                           {"time_us", r.metrics.running_time_us},
                           {"area_mm2", r.metrics.total_area_mm2},
                           {"power_mw", r.metrics.total_power_mw},
                           {"gain", r.gains.performance_gain},
                           {"gain_per_area", r.gains.gain_per_area_overhead},
                           {"gain_per_power", r.gains.gain_per_power_overhead}});
        return arr.dump(2) + "\n";
    }
    case ReportFormat::Text: {
        std::ostringstream os;
        os << std::left << std::setw(18) << "system" << std::right << std::setw(14) << "cycles"
           << std::setw(14) << "time_us" << std::setw(11) << "area_mm2" << std::setw(11)
           << "power_mw" << std::setw(9) << "gain" << std::setw(15) << "gain_per_area"
           << std::setw(16) << "gain_per_power" << '\n';
        for (const auto& r : rows) {
            os << std::left << std::setw(18) << r.system << std::right << std::fixed
               << std::setprecision(0) << std::setw(14) << r.metrics.total_cycles
               << std::setprecision(2) << std::setw(14) << r.metrics.running_time_us
               << std::setw(11) << r.metrics.total_area_mm2 << std::setw(11)
               << r.metrics.total_power_mw << std::setprecision(3) << std::setw(9)
               << r.gains.performance_gain << std::setw(15) << r.gains.gain_per_area_overhead
               << std::setw(16) << r.gains.gain_per_power_overhead << '\n';
            os.unsetf(std::ios::fixed);
        }
        return os.str();
    }
    }
    return {};
}

std::string render_cores(const std::vector<CoreConfig>& cores, ReportFormat format) {
    switch (format) {
    case ReportFormat::Csv: {
        std::ostringstream os;
        os << "core,mul16_32,icache_kb,dcache_kb\n";
        for (std::size_t i = 0; i < cores.size(); ++i)
            os << (i + 1) << ',' << (cores[i].has_mul16_32 ? "true" : "false") << ','
               << cores[i].icache_kb << ',' << cores[i].dcache_kb << '\n';
        return os.str();
    }
    case ReportFormat::Json: {
        nlohmann::json arr = nlohmann::json::array();
        for (std::size_t i = 0; i < cores.size(); ++i)
            arr.push_back({{"core", i + 1},
                           {"mul16_32", cores[i].has_mul16_32},
                           {"icache_kb", cores[i].icache_kb},
                           {"dcache_kb", cores[i].dcache_kb}});
        return arr.dump(2) + "\n";
    }
    case ReportFormat::Text: {
        std::ostringstream os;
        for (std::size_t i = 0; i < cores.size(); ++i) {
            os << "core " << (i + 1) << ": " << cores[i].icache_kb << "KB icache, "
               << cores[i].dcache_kb << "KB dcache";
            if (cores[i].has_mul16_32)
                os << ", 16-bit/32-bit multipliers";
            os << '\n';
        }
        return os.str();
    }
    }
    return {};
}

} // namespace cipherpipe
