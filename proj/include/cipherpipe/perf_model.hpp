#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cipherpipe/product_cipher.hpp"

namespace cipherpipe {

/// Abstract processor core: zero-overhead loops, sign-extend and
/// normalize-shift are always present; the optional multiplier and the
/// cache sizes are what the optimizer trades off.
struct CoreConfig {
    bool has_mul16_32 = true;
    int icache_kb = 8; // 4 or 8
    int dcache_kb = 8; // 4 or 8
    double clock_mhz = 200.0;

    friend bool operator==(const CoreConfig&, const CoreConfig&) = default;
};

struct FeatureCosts {
    double area_mm2 = 0;
    double power_mw = 0;
};

/// Per-cipher cycle cost of one iteration on one block, as a base cost for
/// the minimal core scaled by per-feature factors. Area and power are sums
/// of a base-core term plus per-feature contributions.
struct CostTable {
    struct CipherCost {
        double cycles_per_iteration = 0; // minimal core: no multiplier, 4KB caches
        double mul_factor = 1.0;
        double icache8_factor = 1.0;
        double dcache8_factor = 1.0;
    };

    std::array<CipherCost, kCipherCount> cipher{};
    FeatureCosts base_core;
    FeatureCosts mul16_32;
    FeatureCosts icache8; // increment for the 4KB -> 8KB upgrade
    FeatureCosts dcache8;

    double cycles_per_iteration(CipherId id, const CoreConfig& core) const;
    double per_block_cycles(const StageList& stages, const CoreConfig& core) const;
    double core_area(const CoreConfig& core) const;
    double core_power(const CoreConfig& core) const;

    /// All cycle entries must be positive and the multiplier may never make
    /// IDEA slower. Throws std::invalid_argument.
    void validate() const;
};

struct RunMetrics {
    double total_cycles = 0;
    double running_time_us = 0;
    double performance = 0;
    double total_area_mm2 = 0;
    double total_power_mw = 0;
};

struct GainReport {
    double performance_gain = 0;
    double gain_per_area_overhead = 0;
    double gain_per_power_overhead = 0;
};

/// Running time in microseconds: cycles at clock_mhz MHz.
double running_time_us(double total_cycles, double clock_mhz);

/// Performance score: 1e6 / running time.
double performance(double running_time_us);

/// System cycle count: the maximum over all cores.
double system_cycles(std::span<const double> per_core_cycles);

RunMetrics make_metrics(double total_cycles, double clock_mhz, double area_mm2, double power_mw);

/// Gains of a multi-processor system over the single-processor baseline.
GainReport gain_report(const RunMetrics& mp, const RunMetrics& sp);

struct SimulationResult {
    std::vector<double> core_cycles;
    std::vector<double> per_block_cycles;
    RunMetrics metrics;
};

/// Core i runs partition i: stream_len blocks at its per-block cost, plus
/// the fill latency of everything upstream (one block through each earlier
/// core). System cycles are the max over cores; area and power are summed.
SimulationResult simulate(const Partitioning& partitions, std::span<const CoreConfig> cores,
                          const CostTable& table, std::uint64_t stream_len);

/// The whole workload on one core: the single-processor reference.
SimulationResult simulate_single(const Partitioning& partitions, const CoreConfig& core,
                                 const CostTable& table, std::uint64_t stream_len);

enum class Objective { MinArea, MinPower };

/// Iterative strengthen/prune: upgrade the bottleneck core when an upgrade
/// lowers its cycle count (cheapest such upgrade by the objective first),
/// then strip features from non-bottleneck cores wherever removal cannot
/// raise the system cycle count, preferring the removals that save the most
/// objective. Runs from `initial` (default: minimal identical cores) to a
/// fixed point. Never increases system cycles; deterministic.
std::vector<CoreConfig> optimize(const Partitioning& partitions, const CostTable& table,
                                 Objective objective, std::uint64_t stream_len,
                                 std::optional<std::vector<CoreConfig>> initial = std::nullopt);

/// A core with every optional feature enabled, as in the optimized
/// single-processor configuration.
CoreConfig full_featured_core(double clock_mhz = 200.0);

/// A core with every optional feature stripped: the optimizer's start.
CoreConfig minimal_core(double clock_mhz = 200.0);

} // namespace cipherpipe
