#include <doctest.h>

#include <stdexcept>
#include <algorithm>
#include <cmath>
#include <random>

#include "cipherpipe/perf_model.hpp"

using namespace cipherpipe;

namespace {

// Table-driven cost model mirroring the bundled synthetic scenario: IDEA is
// multiplier-bound, the other two are not.
CostTable synthetic_table() {
    CostTable t;
    t.cipher[static_cast<std::size_t>(CipherId::Idea)] = {1800.0, 1.0 / 3.0, 0.95, 0.95};
    t.cipher[static_cast<std::size_t>(CipherId::Skipjack)] = {560.0, 1.0, 0.90, 0.95};
    t.cipher[static_cast<std::size_t>(CipherId::Raiden)] = {280.0, 1.0, 0.95, 0.98};
    t.base_core = {0.25, 14.0};
    t.mul16_32 = {0.05, 16.0};
    t.icache8 = {0.08, 5.0};
    t.dcache8 = {0.08, 5.0};
    return t;
}

CostTable flat_table(double cycles) {
    CostTable t;
    for (auto& c : t.cipher)
        c = {cycles, 1.0, 1.0, 1.0};
    t.base_core = {0.4, 20.0};
    t.mul16_32 = {0.05, 16.0};
    t.icache8 = {0.08, 5.0};
    t.dcache8 = {0.08, 5.0};
    return t;
}

Partitioning canonical_partitions() {
    return partition(ProductCipherSpec::canonical(MasterKey128{}), 5);
}

// five identical single-cipher groups
Partitioning balanced_partitions() {
    return Partitioning(5, StageList{{CipherId::Idea, 2}});
}

double simulated_gain(const Partitioning& parts, const CostTable& table,
                      std::uint64_t stream_len) {
    const std::vector<CoreConfig> cores(parts.size(), full_featured_core());
    const SimulationResult mp = simulate(parts, cores, table, stream_len);
    const SimulationResult sp = simulate_single(parts, full_featured_core(), table, stream_len);
    return sp.metrics.total_cycles / mp.metrics.total_cycles;
}

} // namespace

TEST_CASE("running time implements cycles over clock, in microseconds") {
    CHECK(running_time_us(6658556, 200) == doctest::Approx(33292.78).epsilon(1e-12));
    CHECK(running_time_us(0, 200) == 0.0);
    CHECK(running_time_us(1497044, 200) == doctest::Approx(7485.22).epsilon(1e-12));
    CHECK_THROWS_AS(running_time_us(100, 0), std::domain_error);
    CHECK_THROWS_AS(running_time_us(100, -5), std::domain_error);
}

TEST_CASE("performance is a reciprocal-time score") {
    CHECK(performance(33292.78) == doctest::Approx(30.0365).epsilon(1e-4));
    CHECK(performance(1e6) == doctest::Approx(1.0));
    CHECK(performance(7485.22) == doctest::Approx(133.596).epsilon(1e-4));
    CHECK_THROWS_AS(performance(0), std::domain_error);
    CHECK_THROWS_AS(performance(-1), std::domain_error);
}

TEST_CASE("system cycles take the maximum over cores") {
    const double single[] = {5};
    CHECK(system_cycles(single) == 5);

    std::vector<double> cores = {1400000, 1497044, 900000, 1200000, 1000000};
    CHECK(system_cycles(cores) == 1497044);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        std::shuffle(cores.begin(), cores.end(), rng);
        CHECK(system_cycles(cores) == 1497044);
    }
    CHECK_THROWS_AS(system_cycles(std::span<const double>{}), std::domain_error);
}

TEST_CASE("gain report reproduces the published results from table inputs") {
    const RunMetrics sp = make_metrics(6658556, 200, 0.45, 55.74);
    const RunMetrics power_focused = make_metrics(1497044, 200, 2.76, 149.04);
    const RunMetrics area_focused = make_metrics(1496844, 200, 2.01, 278.7);

    const GainReport g_power = gain_report(power_focused, sp);
    CHECK(std::abs(g_power.performance_gain - 4.448) < 0.001);
    CHECK(std::abs(g_power.gain_per_power_overhead - 1.664) < 0.001);

    const GainReport g_area = gain_report(area_focused, sp);
    CHECK(std::abs(g_area.performance_gain - 4.449) < 0.001);
    CHECK(std::abs(g_area.gain_per_area_overhead - 0.996) < 0.001);

    const GainReport identity = gain_report(sp, sp);
    CHECK(identity.performance_gain == doctest::Approx(1.0));
    CHECK(identity.gain_per_area_overhead == doctest::Approx(1.0));
    CHECK(identity.gain_per_power_overhead == doctest::Approx(1.0));
}

TEST_CASE("gain report rejects non-positive baselines") {
    const RunMetrics good = make_metrics(1000, 200, 1.0, 10.0);
    RunMetrics zero_area = good;
    zero_area.total_area_mm2 = 0;
    CHECK_THROWS_AS(gain_report(good, zero_area), std::domain_error);
    RunMetrics zero_power = good;
    zero_power.total_power_mw = 0;
    CHECK_THROWS_AS(gain_report(zero_power, good), std::domain_error);
}

TEST_CASE("simulate: single stage, single block, unit definition") {
    CostTable t = flat_table(100);
    const Partitioning parts{{{CipherId::Idea, 1}}};
    const std::vector<CoreConfig> cores{full_featured_core()};
    const SimulationResult r = simulate(parts, cores, t, 1);
    CHECK(r.core_cycles.size() == 1);
    CHECK(r.core_cycles[0] == 100);
    CHECK(r.metrics.total_cycles == 100);
    CHECK(r.metrics.running_time_us == doctest::Approx(0.5));
}

TEST_CASE("simulate is affine in the stream length") {
    const CostTable t = synthetic_table();
    const Partitioning parts = canonical_partitions();
    const std::vector<CoreConfig> cores(5, full_featured_core());
    const SimulationResult r1 = simulate(parts, cores, t, 1000);
    const SimulationResult r2 = simulate(parts, cores, t, 2000);
    for (std::size_t i = 0; i < 5; ++i) {
        double fill = 0;
        for (std::size_t j = 0; j < i; ++j)
            fill += r1.per_block_cycles[j];
        CHECK(r2.core_cycles[i] ==
              doctest::Approx(2 * r1.core_cycles[i] - fill).epsilon(1e-12));
        CHECK(r2.core_cycles[i] >= 2 * r1.core_cycles[i] - fill - 1e-9);
    }
}

TEST_CASE("simulate rejects mismatched configurations") {
    const CostTable t = synthetic_table();
    const Partitioning parts = canonical_partitions();
    CHECK_THROWS_AS(simulate(parts, std::vector<CoreConfig>(3, full_featured_core()), t, 10),
                    std::invalid_argument);
    CHECK_THROWS_AS(simulate(parts, std::vector<CoreConfig>(5, full_featured_core()), t, 0),
                    std::invalid_argument);
    CostTable bad = t;
    bad.cipher[0].cycles_per_iteration = -1;
    CHECK_THROWS_AS(simulate(parts, std::vector<CoreConfig>(5, full_featured_core()), bad, 10),
                    std::invalid_argument);
    CostTable slow_mul = t;
    slow_mul.cipher[static_cast<std::size_t>(CipherId::Idea)].mul_factor = 1.5;
    CHECK_THROWS_AS(simulate(parts, std::vector<CoreConfig>(5, full_featured_core()), slow_mul,
                             10),
                    std::invalid_argument);
}

TEST_CASE("balanced five-stage gain approaches five with stream length") {
    const CostTable t = flat_table(1000);
    const Partitioning parts = balanced_partitions();
    const double g22 = simulated_gain(parts, t, 22);
    const double g1m = simulated_gain(parts, t, 1000000);
    CHECK(g1m > 4.99);
    CHECK(g1m < 5.0);
    CHECK(g22 < g1m);
    // closed form 5L/(L+4)
    CHECK(g22 == doctest::Approx(5.0 * 22 / 26));
    CHECK(simulated_gain(parts, t, 1) == doctest::Approx(1.0)); // one block: no overlap
}

TEST_CASE("optimizer strips every feature when costs are feature-independent") {
    const CostTable t = flat_table(500);
    const Partitioning parts = canonical_partitions();
    for (const Objective obj : {Objective::MinPower, Objective::MinArea}) {
        const auto cores = optimize(parts, t, obj, 22);
        REQUIRE(cores.size() == 5);
        for (const auto& c : cores) {
            CHECK(!c.has_mul16_32);
            CHECK(c.icache_kb == 4);
            CHECK(c.dcache_kb == 4);
        }
        // the same holds when starting from fully loaded cores
        const auto pruned =
            optimize(parts, t, obj, 22,
                     std::vector<CoreConfig>(5, full_featured_core()));
        for (const auto& c : pruned)
            CHECK(!c.has_mul16_32);
    }
}

TEST_CASE("optimizer keeps multipliers only on the IDEA-bearing cores") {
    const CostTable t = synthetic_table();
    const Partitioning parts = canonical_partitions();
    const auto cores = optimize(parts, t, Objective::MinPower, 22);
    REQUIRE(cores.size() == 5);
    CHECK(cores[0].has_mul16_32);
    CHECK(cores[1].has_mul16_32);
    CHECK(!cores[2].has_mul16_32);
    CHECK(!cores[3].has_mul16_32);
    CHECK(!cores[4].has_mul16_32);
}

TEST_CASE("optimizer output is a fixed point and never raises system cycles") {
    const CostTable t = synthetic_table();
    const Partitioning parts = canonical_partitions();
    const std::vector<CoreConfig> initial(5, minimal_core());

    const auto final_cores = optimize(parts, t, Objective::MinPower, 22, initial);
    const auto again = optimize(parts, t, Objective::MinPower, 22, final_cores);
    CHECK(again == final_cores);

    const double before = simulate(parts, initial, t, 22).metrics.total_cycles;
    const double after =
        simulate(parts, final_cores, t, 22).metrics.total_cycles;
    CHECK(after <= before);
}
