#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cipherpipe/scenario.hpp"

using namespace cipherpipe;

#ifndef CIPHERPIPE_SOURCE_DIR
#error "CIPHERPIPE_SOURCE_DIR must point at the repository root"
#endif

namespace {

const std::string kScenarioDir = std::string(CIPHERPIPE_SOURCE_DIR) + "/scenarios";

const MetricsRow& find_row(const ScenarioOutcome& out, const std::string& name) {
    for (const auto& row : out.rows)
        if (row.system == name)
            return row;
    REQUIRE_MESSAGE(false, "missing row " << name);
    throw std::logic_error("unreachable");
}

} // namespace

TEST_CASE("bundled recorded-results scenario reproduces the published gains") {
    const Scenario sc = load_scenario(kScenarioDir + "/paper.scenario");
    REQUIRE(sc.has_systems());
    REQUIRE(sc.systems.size() == 4);
    CHECK(sc.clock_mhz == 200.0);

    const ScenarioOutcome out = run_simulate(sc);
    REQUIRE(out.rows.size() == 4);

    const MetricsRow& single = find_row(out, "single");
    CHECK(single.metrics.running_time_us == doctest::Approx(33292.78));
    CHECK(single.gains.performance_gain == doctest::Approx(1.0));

    const MetricsRow& power = find_row(out, "power_focused");
    CHECK(power.metrics.running_time_us == doctest::Approx(7485.22));
    CHECK(std::abs(power.gains.performance_gain - 4.448) < 0.001);
    CHECK(std::abs(power.gains.gain_per_power_overhead - 1.664) < 0.001);

    const MetricsRow& area = find_row(out, "area_focused");
    CHECK(std::abs(area.gains.performance_gain - 4.449) < 0.001);
    CHECK(std::abs(area.gains.gain_per_area_overhead - 0.996) < 0.001);

    const MetricsRow& initial = find_row(out, "initial_pipeline");
    CHECK(initial.metrics.running_time_us == doctest::Approx(11460.45));
}

TEST_CASE("csv and json reports use the fixed column names") {
    const Scenario sc = load_scenario(kScenarioDir + "/paper.scenario");
    const ScenarioOutcome out = run_simulate(sc);

    const std::string csv = render_metrics(out.rows, ReportFormat::Csv);
    CHECK(csv.rfind("system,cycles,time_us,area_mm2,power_mw,gain,gain_per_area,gain_per_power\n",
                    0) == 0);
    CHECK(csv.find("power_focused,1497044") != std::string::npos);

    const std::string json = render_metrics(out.rows, ReportFormat::Json);
    for (const char* field : {"\"cycles\"", "\"time_us\"", "\"area_mm2\"", "\"power_mw\"",
                              "\"gain\"", "\"gain_per_area\"", "\"gain_per_power\""})
        CHECK(json.find(field) != std::string::npos);

    const std::string text = render_metrics(out.rows, ReportFormat::Text);
    CHECK(text.find("single") != std::string::npos);
    CHECK(text.find("4.448") != std::string::npos);
}

TEST_CASE("a single-system scenario scores gain 1.0 against itself") {
    std::istringstream in("clock_mhz = 200\n"
                          "[system only]\n"
                          "cycles = 123456\n"
                          "area_mm2 = 1.5\n"
                          "power_mw = 40\n");
    const Scenario sc = parse_scenario(in);
    const ScenarioOutcome out = run_simulate(sc);
    REQUIRE(out.rows.size() == 1);
    CHECK(out.rows[0].gains.performance_gain == doctest::Approx(1.0));
}

TEST_CASE("parse errors carry line numbers") {
    std::istringstream bad1("clock_mhz = 200\nbogus line without equals\n");
    CHECK_THROWS_WITH_AS(parse_scenario(bad1), "line 2: expected key = value",
                         ScenarioParseError);

    std::istringstream bad2("[system a]\ncycles = twelve\n");
    try {
        parse_scenario(bad2);
        FAIL("expected ScenarioParseError");
    } catch (const ScenarioParseError& e) {
        CHECK(e.line() == 2);
    }

    std::istringstream bad3("[stages]\ncipher=rot13 iterations=5\n");
    CHECK_THROWS_AS(parse_scenario(bad3), ScenarioParseError);

    std::istringstream bad4("[system a]\ncycles=1\narea_mm2=1\npower_mw=1\n"
                            "[system b]\ncycles=2\narea_mm2=1\npower_mw=1\n");
    CHECK_THROWS_AS(parse_scenario(bad4), ScenarioParseError); // no baseline marked
}

TEST_CASE("synthetic scenario drives the optimizer to the published shape") {
    const Scenario sc = load_scenario(kScenarioDir + "/synthetic.scenario");
    REQUIRE(!sc.has_systems());
    REQUIRE(sc.cost_table.has_value());
    REQUIRE(sc.objective == Objective::MinPower);
    REQUIRE(sc.stages.size() == 3);

    const ScenarioOutcome out = run_optimize(sc);
    REQUIRE(out.final_cores.size() == 5);
    CHECK(out.final_cores[0].has_mul16_32);
    CHECK(out.final_cores[1].has_mul16_32);
    CHECK(!out.final_cores[2].has_mul16_32);
    CHECK(!out.final_cores[3].has_mul16_32);
    CHECK(!out.final_cores[4].has_mul16_32);

    // optimized never slower than the initial identical-core pipeline
    const MetricsRow& initial = find_row(out, "initial");
    const MetricsRow& optimized = find_row(out, "optimized");
    CHECK(optimized.metrics.total_cycles <= initial.metrics.total_cycles);

    // rerunning the whole scenario is deterministic
    const ScenarioOutcome again = run_optimize(sc);
    CHECK(again.final_cores == out.final_cores);
}

TEST_CASE("balanced scenario approaches the ideal five-way gain") {
    const Scenario sc = load_scenario(kScenarioDir + "/balanced5.scenario");
    const ScenarioOutcome out = run_simulate(sc);
    const MetricsRow& pipeline = find_row(out, "pipeline");
    CHECK(pipeline.gains.performance_gain > 4.99);
    CHECK(pipeline.gains.performance_gain < 5.0);
}

TEST_CASE("per-core cycle overrides replace simulated counts") {
    std::istringstream in("clock_mhz = 200\n"
                          "stream_len = 10\n"
                          "n_stages = 2\n"
                          "[stages]\n"
                          "cipher=idea iterations=2\n"
                          "[cost idea]\n"
                          "cycles_per_iteration = 100\n"
                          "[cost skipjack]\n"
                          "cycles_per_iteration = 100\n"
                          "[cost raiden]\n"
                          "cycles_per_iteration = 100\n"
                          "[feature base]\n"
                          "area_mm2 = 1\n"
                          "power_mw = 1\n"
                          "[core 1]\n"
                          "cycles = 999999\n"
                          "[core 2]\n");
    const Scenario sc = parse_scenario(in);
    REQUIRE(sc.cores.size() == 2);
    REQUIRE(sc.cores[0].cycles_override.has_value());
    const ScenarioOutcome out = run_simulate(sc);
    const MetricsRow& pipeline = find_row(out, "pipeline");
    CHECK(pipeline.metrics.total_cycles == doctest::Approx(999999));
}

TEST_CASE("core config rendering") {
    std::vector<CoreConfig> cores{{true, 4, 4, 200}, {false, 8, 8, 200}};
    const std::string text = render_cores(cores, ReportFormat::Text);
    CHECK(text.find("core 1: 4KB icache, 4KB dcache, 16-bit/32-bit multipliers") !=
          std::string::npos);
    CHECK(text.find("core 2: 8KB icache, 8KB dcache") != std::string::npos);

    const std::string csv = render_cores(cores, ReportFormat::Csv);
    CHECK(csv.rfind("core,mul16_32,icache_kb,dcache_kb\n", 0) == 0);
    CHECK(csv.find("1,true,4,4") != std::string::npos);

    const std::string json = render_cores(cores, ReportFormat::Json);
    CHECK(json.find("\"mul16_32\"") != std::string::npos);
}
