#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cipherpipe/pipeline.hpp"

namespace cipherpipe {

struct ThroughputReport {
    std::size_t stages = 0;
    std::size_t stream_len = 0;
    std::size_t repetitions = 0;
    double pipeline_blocks_per_s = 0; // median over repetitions
    double monolithic_blocks_per_s = 0;
    double speedup = 0; // pipeline vs monolithic on the same stream
    std::vector<StageStats> stage_stats; // from the final pipeline repetition

    double busy_fraction(std::size_t stage) const;
    double blocked_fraction(std::size_t stage) const;
};

/// Wall-clock blocks/second for the pipeline described by `config` and for
/// the equivalent monolithic per-block encryption of the same stream.
/// `repetitions` >= 1; medians are reported.
ThroughputReport measure_throughput(const PipelineConfig& config,
                                    std::span<const Block64> source, std::size_t repetitions);

} // namespace cipherpipe
