#include "cipherpipe/perf_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cipherpipe {

namespace {

enum class Feature { Mul16_32, ICache8, DCache8 };
constexpr std::array<Feature, 3> kFeatures{Feature::Mul16_32, Feature::ICache8,
                                           Feature::DCache8};

bool has_feature(const CoreConfig& core, Feature f) {
    switch (f) {
    case Feature::Mul16_32: return core.has_mul16_32;
    case Feature::ICache8: return core.icache_kb == 8;
    case Feature::DCache8: return core.dcache_kb == 8;
    }
    return false;
}

void set_feature(CoreConfig& core, Feature f, bool on) {
    switch (f) {
    case Feature::Mul16_32: core.has_mul16_32 = on; break;
    case Feature::ICache8: core.icache_kb = on ? 8 : 4; break;
    case Feature::DCache8: core.dcache_kb = on ? 8 : 4; break;
    }
}

const FeatureCosts& feature_costs(const CostTable& table, Feature f) {
    switch (f) {
    case Feature::Mul16_32: return table.mul16_32;
    case Feature::ICache8: return table.icache8;
    case Feature::DCache8: return table.dcache8;
    }
    return table.base_core;
}

double objective_contribution(const CostTable& table, Feature f, Objective objective) {
    const FeatureCosts& c = feature_costs(table, f);
    return objective == Objective::MinArea ? c.area_mm2 : c.power_mw;
}

void check_core(const CoreConfig& core) {
    if (core.icache_kb != 4 && core.icache_kb != 8)
        throw std::invalid_argument("icache_kb must be 4 or 8");
    if (core.dcache_kb != 4 && core.dcache_kb != 8)
        throw std::invalid_argument("dcache_kb must be 4 or 8");
    if (core.clock_mhz <= 0)
        throw std::invalid_argument("clock_mhz must be positive");
}

std::vector<double> core_cycle_vector(const Partitioning& partitions,
                                      std::span<const CoreConfig> cores, const CostTable& table,
                                      std::uint64_t stream_len) {
    std::vector<double> cycles(partitions.size());
    double fill = 0;
    for (std::size_t i = 0; i < partitions.size(); ++i) {
        const double per_block = table.per_block_cycles(partitions[i], cores[i]);
        cycles[i] = static_cast<double>(stream_len) * per_block + fill;
        fill += per_block;
    }
    return cycles;
}

} // namespace

double CostTable::cycles_per_iteration(CipherId id, const CoreConfig& core) const {
    const CipherCost& c = cipher[static_cast<std::size_t>(id)];
    double cycles = c.cycles_per_iteration;
    if (core.has_mul16_32)
        cycles *= c.mul_factor;
    if (core.icache_kb == 8)
        cycles *= c.icache8_factor;
    if (core.dcache_kb == 8)
        cycles *= c.dcache8_factor;
    return cycles;
}

double CostTable::per_block_cycles(const StageList& stages, const CoreConfig& core) const {
    double cycles = 0;
    for (const auto& s : stages)
        cycles += static_cast<double>(s.iterations) * cycles_per_iteration(s.cipher, core);
    return cycles;
}

double CostTable::core_area(const CoreConfig& core) const {
    double area = base_core.area_mm2;
    for (Feature f : kFeatures)
        if (has_feature(core, f))
            area += feature_costs(*this, f).area_mm2;
    return area;
}

double CostTable::core_power(const CoreConfig& core) const {
    double power = base_core.power_mw;
    for (Feature f : kFeatures)
        if (has_feature(core, f))
            power += feature_costs(*this, f).power_mw;
    return power;
}

void CostTable::validate() const {
    for (std::size_t i = 0; i < cipher.size(); ++i) {
        const CipherCost& c = cipher[i];
        if (c.cycles_per_iteration <= 0)
            throw std::invalid_argument("cycles_per_iteration must be positive for " +
                                        std::string(to_string(static_cast<CipherId>(i))));
        if (c.mul_factor <= 0 || c.icache8_factor <= 0 || c.dcache8_factor <= 0)
            throw std::invalid_argument("cost factors must be positive");
    }
    if (cipher[static_cast<std::size_t>(CipherId::Idea)].mul_factor > 1.0)
        throw std::invalid_argument("the multiplier must not increase the IDEA cost");
}

double running_time_us(double total_cycles, double clock_mhz) {
    if (clock_mhz <= 0)
        throw std::domain_error("clock_mhz must be positive");
    if (total_cycles < 0)
        throw std::domain_error("cycle count must be non-negative");
    return total_cycles / clock_mhz;
}

double performance(double time_us) {
    if (time_us <= 0)
        throw std::domain_error("running time must be positive");
    return 1e6 / time_us;
}

double system_cycles(std::span<const double> per_core_cycles) {
    if (per_core_cycles.empty())
        throw std::domain_error("system_cycles needs at least one core");
    return *std::max_element(per_core_cycles.begin(), per_core_cycles.end());
}

RunMetrics make_metrics(double total_cycles, double clock_mhz, double area_mm2,
                        double power_mw) {
    RunMetrics m;
    m.total_cycles = total_cycles;
    m.running_time_us = running_time_us(total_cycles, clock_mhz);
    m.performance = performance(m.running_time_us);
    m.total_area_mm2 = area_mm2;
    m.total_power_mw = power_mw;
    return m;
}

GainReport gain_report(const RunMetrics& mp, const RunMetrics& sp) {
    if (sp.performance <= 0)
        throw std::domain_error("baseline performance must be positive");
    if (sp.total_area_mm2 <= 0 || mp.total_area_mm2 <= 0)
        throw std::domain_error("chip areas must be positive");
    if (sp.total_power_mw <= 0 || mp.total_power_mw <= 0)
        throw std::domain_error("power figures must be positive");

    GainReport g;
    g.performance_gain = mp.performance / sp.performance;
    g.gain_per_area_overhead = g.performance_gain / (mp.total_area_mm2 / sp.total_area_mm2);
    g.gain_per_power_overhead = g.performance_gain / (mp.total_power_mw / sp.total_power_mw);
    return g;
}

SimulationResult simulate(const Partitioning& partitions, std::span<const CoreConfig> cores,
                          const CostTable& table, std::uint64_t stream_len) {
    if (partitions.empty())
        throw std::invalid_argument("simulate needs at least one partition");
    if (cores.size() != partitions.size())
        throw std::invalid_argument("core count (" + std::to_string(cores.size()) +
                                    ") must match partition count (" +
                                    std::to_string(partitions.size()) + ")");
    if (stream_len == 0)
        throw std::invalid_argument("stream_len must be >= 1");
    table.validate();
    for (const auto& core : cores)
        check_core(core);
    for (std::size_t i = 1; i < cores.size(); ++i)
        if (cores[i].clock_mhz != cores[0].clock_mhz)
            throw std::invalid_argument("all cores must share one clock");

    SimulationResult r;
    r.core_cycles = core_cycle_vector(partitions, cores, table, stream_len);
    r.per_block_cycles.reserve(cores.size());
    double area = 0, power = 0;
    for (std::size_t i = 0; i < cores.size(); ++i) {
        r.per_block_cycles.push_back(table.per_block_cycles(partitions[i], cores[i]));
        area += table.core_area(cores[i]);
        power += table.core_power(cores[i]);
    }
    r.metrics = make_metrics(system_cycles(r.core_cycles), cores[0].clock_mhz, area, power);
    return r;
}

SimulationResult simulate_single(const Partitioning& partitions, const CoreConfig& core,
                                 const CostTable& table, std::uint64_t stream_len) {
    StageList all;
    for (const auto& group : partitions)
        for (const auto& s : group)
            all.push_back(s);
    return simulate({all}, std::span<const CoreConfig>(&core, 1), table, stream_len);
}

CoreConfig full_featured_core(double clock_mhz) {
    return CoreConfig{true, 8, 8, clock_mhz};
}

CoreConfig minimal_core(double clock_mhz) {
    return CoreConfig{false, 4, 4, clock_mhz};
}

std::vector<CoreConfig> optimize(const Partitioning& partitions, const CostTable& table,
                                 Objective objective, std::uint64_t stream_len,
                                 std::optional<std::vector<CoreConfig>> initial) {
    if (partitions.empty())
        throw std::invalid_argument("optimize needs at least one partition");
    table.validate();

    std::vector<CoreConfig> cores =
        initial.value_or(std::vector<CoreConfig>(partitions.size(), minimal_core()));
    if (cores.size() != partitions.size())
        throw std::invalid_argument("initial core count must match partition count");
    for (const auto& core : cores)
        check_core(core);

    // Removal preference: biggest objective saving first; index order breaks
    // ties so runs are reproducible.
    std::array<Feature, 3> removal_order = kFeatures;
    std::stable_sort(removal_order.begin(), removal_order.end(), [&](Feature a, Feature b) {
        return objective_contribution(table, a, objective) >
               objective_contribution(table, b, objective);
    });

    const std::size_t pass_limit = partitions.size() * kFeatures.size() * 10;
    for (std::size_t pass = 0; pass < pass_limit; ++pass) {
        bool changed = false;
        std::vector<double> cycles = core_cycle_vector(partitions, cores, table, stream_len);
        const std::size_t bottleneck = static_cast<std::size_t>(
            std::max_element(cycles.begin(), cycles.end()) - cycles.begin());

        // Strengthen: cheapest upgrade (by objective) that lowers the
        // bottleneck core's own cycle count. The system max cannot rise.
        Feature best_feature{};
        bool have_upgrade = false;
        double best_cost = 0;
        for (Feature f : kFeatures) {
            if (has_feature(cores[bottleneck], f))
                continue;
            CoreConfig upgraded = cores[bottleneck];
            set_feature(upgraded, f, true);
            if (table.per_block_cycles(partitions[bottleneck], upgraded) <
                table.per_block_cycles(partitions[bottleneck], cores[bottleneck])) {
                const double cost = objective_contribution(table, f, objective);
                if (!have_upgrade || cost < best_cost) {
                    have_upgrade = true;
                    best_feature = f;
                    best_cost = cost;
                }
            }
        }
        if (have_upgrade) {
            set_feature(cores[bottleneck], best_feature, true);
            cycles = core_cycle_vector(partitions, cores, table, stream_len);
            changed = true;
        }

        // Prune: strip features wherever the system cycle count cannot rise.
        // A removal that slows its core must stay strictly below the current
        // maximum, which keeps pruning from undoing an earlier upgrade and
        // restricts the bottleneck core to cycle-neutral removals.
        double system_max = system_cycles(cycles);
        for (std::size_t i = 0; i < cores.size(); ++i) {
            bool removed = true;
            while (removed) {
                removed = false;
                for (Feature f : removal_order) {
                    if (!has_feature(cores[i], f))
                        continue;
                    std::vector<CoreConfig> candidate = cores;
                    set_feature(candidate[i], f, false);
                    const std::vector<double> new_cycles =
                        core_cycle_vector(partitions, candidate, table, stream_len);
                    const double new_max = system_cycles(new_cycles);
                    const bool core_safe =
                        new_cycles[i] == cycles[i] || new_cycles[i] < system_max;
                    if (new_max <= system_max && core_safe) {
                        cores = std::move(candidate);
                        cycles = new_cycles;
                        system_max = new_max;
                        changed = true;
                        removed = true;
                    }
                }
            }
        }

        if (!changed)
            return cores;
    }
    throw std::logic_error("optimizer failed to reach a fixed point within its pass limit");
}

} // namespace cipherpipe
