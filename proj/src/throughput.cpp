#include "cipherpipe/throughput.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace cipherpipe {

namespace {

using Clock = std::chrono::steady_clock;

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

} // namespace

double ThroughputReport::busy_fraction(std::size_t stage) const {
    const auto& s = stage_stats[stage];
    const auto total = s.busy + s.blocked;
    if (total.count() == 0)
        return 0;
    return std::chrono::duration<double>(s.busy).count() /
           std::chrono::duration<double>(total).count();
}

double ThroughputReport::blocked_fraction(std::size_t stage) const {
    const auto& s = stage_stats[stage];
    const auto total = s.busy + s.blocked;
    if (total.count() == 0)
        return 0;
    return std::chrono::duration<double>(s.blocked).count() /
           std::chrono::duration<double>(total).count();
}

ThroughputReport measure_throughput(const PipelineConfig& config,
                                    std::span<const Block64> source, std::size_t repetitions) {
    if (repetitions == 0)
        throw std::invalid_argument("repetitions must be >= 1");
    if (source.empty())
        throw std::invalid_argument("throughput needs a non-empty stream");

    ThroughputReport report;
    report.stages = config.partitions.size();
    report.stream_len = source.size();
    report.repetitions = repetitions;

    const ProductCipherSpec spec(
        [&] {
            StageList all;
            for (const auto& group : config.partitions)
                for (const auto& s : group)
                    all.push_back(s);
            return all;
        }(),
        config.key);

    std::vector<double> pipeline_rates, mono_rates;
    std::vector<Block64> mono_out(source.size());
    std::vector<Block64> expected;

    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        const auto t0 = Clock::now();
        for (std::size_t i = 0; i < source.size(); ++i)
            mono_out[i] = encrypt_block(source[i], spec);
        mono_rates.push_back(static_cast<double>(source.size()) / seconds_since(t0));

        Pipeline pipeline(config);
        const auto t1 = Clock::now();
        RunResult run = pipeline.run(source);
        pipeline_rates.push_back(static_cast<double>(source.size()) / seconds_since(t1));

        if (run.sink != mono_out)
            throw std::runtime_error("pipeline output diverged from monolithic encryption");
        if (rep + 1 == repetitions)
            report.stage_stats = std::move(run.stats);
    }

    report.pipeline_blocks_per_s = median(std::move(pipeline_rates));
    report.monolithic_blocks_per_s = median(std::move(mono_rates));
    report.speedup = report.pipeline_blocks_per_s / report.monolithic_blocks_per_s;
    return report;
}

} // namespace cipherpipe
