// Acceptance suite: one line per criterion, non-zero exit if any gated
// criterion fails. The empirical speedup check is a benchmark, not a gate;
// it reports PASS/FAIL/SKIP without affecting the exit status.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <future>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include "cipherpipe/scenario.hpp"
#include "cipherpipe/throughput.hpp"

using namespace cipherpipe;
using Clock = std::chrono::steady_clock;

#ifndef CIPHERPIPE_SOURCE_DIR
#error "CIPHERPIPE_SOURCE_DIR must point at the repository root"
#endif

namespace {

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail, bool gated = true) {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << name << ": " << detail << "\n";
    if (!ok && gated)
        ++failures;
}

void report_skip(const std::string& name, const std::string& why) {
    std::cout << "SKIP  " << name << ": " << why << "\n";
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

MasterKey128 random_key(std::mt19937_64& rng) {
    MasterKey128 k;
    for (auto& b : k.bytes)
        b = static_cast<std::uint8_t>(rng());
    return k;
}

// ---------------------------------------------------------- criterion 1

void cipher_vectors() {
    const auto t0 = Clock::now();
    bool ok = true;
    std::ostringstream detail;

    const Block64 sj_ct = skipjack_encrypt(block_from_hex("33221100ddccbbaa"),
                                           skipjack_key_from_hex("00998877665544332211"));
    if (to_hex(sj_ct) != "2587cae27a12d300") {
        ok = false;
        detail << "skipjack vector mismatch: " << to_hex(sj_ct) << "; ";
    }

    const auto idea_ks = IdeaKeySchedule::encryption(
        key_from_hex("00010002000300040005000600070008"), IdeaVariant::Rounds8_5);
    const Block64 idea_ct = idea_encrypt(block_from_hex("0000000100020003"), idea_ks);
    if (to_hex(idea_ct) != "11fbed2b01986de5") {
        ok = false;
        detail << "idea 8.5-round vector mismatch: " << to_hex(idea_ct) << "; ";
    }

    const double elapsed = seconds_since(t0);
    if (elapsed >= 1.0) {
        ok = false;
        detail << "overran the 1 s budget; ";
    }
    detail << "skipjack+idea published vectors exact, " << elapsed << " s";
    report("cipher_vectors", ok, detail.str());
}

// ---------------------------------------------------------- criterion 2

void round_trip_suite() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(0xACCE97);
    std::size_t bad = 0;

    for (int i = 0; i < 10000; ++i) {
        const MasterKey128 key = random_key(rng);
        const Block64 pt = Block64::from_u64(rng());

        const auto ks_e = IdeaKeySchedule::encryption(key);
        const auto ks_d = IdeaKeySchedule::decryption(key);
        if (idea_decrypt(idea_encrypt(pt, ks_e), ks_d) != pt)
            ++bad;

        const SkipjackKey80 sk = SkipjackKey80::from_master(key);
        if (skipjack_decrypt(skipjack_encrypt(pt, sk), sk) != pt)
            ++bad;

        const RaidenKey rk = RaidenKey::from_master(key);
        if (raiden_decrypt(raiden_encrypt(pt, rk), rk) != pt)
            ++bad;

        const auto spec = ProductCipherSpec::canonical(key);
        if (decrypt_block(encrypt_block(pt, spec), spec) != pt)
            ++bad;
    }

    const double elapsed = seconds_since(t0);
    std::ostringstream detail;
    detail << bad << " failures over 10000 keys x 4 ciphers, " << elapsed << " s";
    report("round_trip_suite", bad == 0 && elapsed < 10.0, detail.str());
}

// ---------------------------------------------------------- criterion 3

void pipeline_oracle() {
    const MasterKey128 key = key_from_hex("000102030405060708090a0b0c0d0e0f");
    const auto spec = ProductCipherSpec::canonical(key);

    std::mt19937_64 rng(0x04AC1E);
    std::size_t runs = 0, mismatches = 0, timeouts = 0;

    for (const std::size_t len : {std::size_t{0}, std::size_t{1}, std::size_t{22},
                                  std::size_t{10000}}) {
        std::vector<Block64> source(len);
        for (auto& b : source)
            b = Block64::from_u64(rng());
        std::vector<Block64> expected;
        expected.reserve(len);
        for (const auto& b : source)
            expected.push_back(encrypt_block(b, spec));

        for (std::size_t n = 1; n <= 8; ++n) {
            for (const std::size_t cap : {std::size_t{1}, std::size_t{2}, std::size_t{64}}) {
                ++runs;
                auto task = std::async(std::launch::async, [&, n, cap] {
                    Pipeline p(PipelineConfig{partition(spec, n), cap, key,
                                              CipherDirection::Encrypt, {}});
                    return p.run(source).sink;
                });
                if (task.wait_for(std::chrono::seconds(30)) != std::future_status::ready) {
                    ++timeouts;
                    std::cout << "      deadlock suspected: stages=" << n << " cap=" << cap
                              << " len=" << len << "\n";
                    continue;
                }
                if (task.get() != expected)
                    ++mismatches;
            }
        }
    }

    std::ostringstream detail;
    detail << runs << " runs (stages 1-8 x capacities {1,2,64} x lengths {0,1,22,10000}), "
           << mismatches << " mismatches, " << timeouts << " timeouts";
    report("pipeline_oracle", mismatches == 0 && timeouts == 0, detail.str());
}

// ---------------------------------------------------------- criterion 4

void paper_arithmetic() {
    bool ok = true;
    std::ostringstream detail;

    // straight from the recorded tables
    const RunMetrics sp = make_metrics(6658556, 200, 0.45, 55.74);
    const RunMetrics power_focused = make_metrics(1497044, 200, 2.76, 149.04);
    const RunMetrics area_focused = make_metrics(1496844, 200, 2.01, 278.7);
    const GainReport g_power = gain_report(power_focused, sp);
    const GainReport g_area = gain_report(area_focused, sp);

    if (std::abs(g_power.performance_gain - 4.448) >= 0.001)
        ok = false;
    if (std::abs(g_area.gain_per_area_overhead - 0.996) >= 0.001)
        ok = false;
    if (std::abs(g_power.gain_per_power_overhead - 1.664) >= 0.001)
        ok = false;

    // and through the bundled scenario file + the report pipeline
    const Scenario sc =
        load_scenario(std::string(CIPHERPIPE_SOURCE_DIR) + "/scenarios/paper.scenario");
    const ScenarioOutcome out = run_simulate(sc);
    double sc_gain = 0, sc_gain_area = 0, sc_gain_power = 0, time_us = 0;
    for (const auto& row : out.rows) {
        if (row.system == "power_focused") {
            sc_gain = row.gains.performance_gain;
            sc_gain_power = row.gains.gain_per_power_overhead;
        }
        if (row.system == "area_focused")
            sc_gain_area = row.gains.gain_per_area_overhead;
        if (row.system == "single")
            time_us = row.metrics.running_time_us;
    }
    if (std::abs(sc_gain - 4.448) >= 0.001 || std::abs(sc_gain_area - 0.996) >= 0.001 ||
        std::abs(sc_gain_power - 1.664) >= 0.001)
        ok = false;
    if (std::abs(time_us - 33292.78) > 0.01)
        ok = false; // Eq. (1) in microseconds; the tables print milliseconds

    detail << "gain " << sc_gain << " (want 4.448), gain/area " << sc_gain_area
           << " (want 0.996), gain/power " << sc_gain_power
           << " (want 1.664), all within 0.001; single time " << time_us << " us";
    report("paper_arithmetic", ok, detail.str());
}

// ---------------------------------------------------------- criterion 5

void simulated_limit() {
    const auto t0 = Clock::now();
    CostTable table;
    for (auto& c : table.cipher)
        c = {1000.0, 1.0, 1.0, 1.0};
    table.base_core = {0.4, 20.0};

    const Partitioning parts(5, StageList{{CipherId::Idea, 2}});
    const std::vector<CoreConfig> cores(5, full_featured_core());

    const auto gain_at = [&](std::uint64_t len) {
        const SimulationResult mp = simulate(parts, cores, table, len);
        const SimulationResult sp = simulate_single(parts, full_featured_core(), table, len);
        return gain_report(mp.metrics, sp.metrics).performance_gain;
    };
    const double g22 = gain_at(22);
    const double g1m = gain_at(1000000);
    const double elapsed = seconds_since(t0);

    std::ostringstream detail;
    detail << "gain(1e6 blocks) = " << g1m << " in (4.99, 5.0); gain(22) = " << g22
           << " strictly lower, " << elapsed << " s";
    report("simulated_pipeline_limit",
           g1m > 4.99 && g1m < 5.0 && g22 < g1m && elapsed < 1.0, detail.str());
}

// ------------------------------------------- criterion 6 (benchmark only)

void empirical_speedup() {
    const unsigned threads = std::thread::hardware_concurrency();
    if (threads < 5) {
        report_skip("empirical_speedup", "environment-sensitive benchmark needs >= 5 hardware "
                                         "threads, found " +
                                             std::to_string(threads));
        return;
    }
    if (const char* env = std::getenv("CIPHERPIPE_BENCH"); env && std::string(env) == "0") {
        report_skip("empirical_speedup", "disabled via CIPHERPIPE_BENCH=0");
        return;
    }

    const MasterKey128 key = key_from_hex("000102030405060708090a0b0c0d0e0f");
    const auto spec = ProductCipherSpec::canonical(key);
    const auto stream_of = [](std::size_t n) {
        std::vector<Block64> s(n);
        for (std::size_t i = 0; i < n; ++i)
            s[i] = Block64::from_u64(i);
        return s;
    };

    const auto long_stream = stream_of(10000);
    const auto short_stream = stream_of(22);
    const PipelineConfig config{partition(spec, 5), 64, key, CipherDirection::Encrypt, {}};

    const ThroughputReport long_run = measure_throughput(config, long_stream, 5);
    const ThroughputReport short_run = measure_throughput(config, short_stream, 5);

    std::ostringstream detail;
    detail << "5-stage speedup: " << long_run.speedup << "x at 10000 blocks (want >= 3.0), "
           << short_run.speedup << "x at 22 blocks (want lower); benchmark, not gated";
    report("empirical_speedup",
           long_run.speedup >= 3.0 && long_run.speedup > short_run.speedup, detail.str(),
           /*gated=*/false);
}

// ---------------------------------------------------------- criterion 7

void optimizer_properties() {
    std::mt19937_64 rng(0x0B713);
    const auto unit = [&](double lo, double hi) {
        std::uniform_real_distribution<double> d(lo, hi);
        return d(rng);
    };

    std::size_t convergence_failures = 0, regressions = 0, unstable = 0;
    for (int scenario = 0; scenario < 50; ++scenario) {
        StageList stages;
        const int n_stage_specs = 1 + static_cast<int>(rng() % 4);
        for (int s = 0; s < n_stage_specs; ++s)
            stages.push_back({static_cast<CipherId>(rng() % 3),
                              static_cast<std::uint32_t>(1 + rng() % 30)});
        const ProductCipherSpec spec(stages, MasterKey128{});
        const std::size_t n =
            1 + rng() % std::min<std::uint64_t>(5, spec.total_iterations());
        const Partitioning parts = partition(spec, n);

        CostTable table;
        for (auto& c : table.cipher)
            c = {unit(50, 2000), unit(0.5, 1.0), unit(0.8, 1.0), unit(0.8, 1.0)};
        table.cipher[static_cast<std::size_t>(CipherId::Idea)].mul_factor = unit(0.2, 1.0);
        table.base_core = {unit(0.1, 0.5), unit(5, 25)};
        table.mul16_32 = {unit(0.01, 0.2), unit(1, 30)};
        table.icache8 = {unit(0.01, 0.2), unit(1, 30)};
        table.dcache8 = {unit(0.01, 0.2), unit(1, 30)};

        const Objective obj = rng() % 2 ? Objective::MinArea : Objective::MinPower;
        const std::uint64_t stream_len = std::array<std::uint64_t, 3>{1, 22, 1000}[rng() % 3];

        try {
            const std::vector<CoreConfig> initial(parts.size(), minimal_core());
            const auto final_cores = optimize(parts, table, obj, stream_len);

            const double before = simulate(parts, initial, table, stream_len).metrics.total_cycles;
            const double after =
                simulate(parts, final_cores, table, stream_len).metrics.total_cycles;
            if (after > before)
                ++regressions;

            const auto again = optimize(parts, table, obj, stream_len, final_cores);
            if (again != final_cores)
                ++unstable;
        } catch (const std::logic_error&) {
            ++convergence_failures; // exceeded the cores x features x 10 pass bound
        }
    }

    // the multiplier-sensitive shape from the bundled synthetic scenario
    const Scenario sc =
        load_scenario(std::string(CIPHERPIPE_SOURCE_DIR) + "/scenarios/synthetic.scenario");
    const ScenarioOutcome out = run_optimize(sc);
    const bool shape_ok = out.final_cores.size() == 5 && out.final_cores[0].has_mul16_32 &&
                          out.final_cores[1].has_mul16_32 && !out.final_cores[2].has_mul16_32 &&
                          !out.final_cores[3].has_mul16_32 && !out.final_cores[4].has_mul16_32;

    std::ostringstream detail;
    detail << "50 random scenarios: " << convergence_failures << " over iteration bound, "
           << regressions << " cycle regressions, " << unstable
           << " non-idempotent; multiplier shape "
           << (shape_ok ? "matches power-focused configuration" : "MISMATCH");
    report("optimizer_properties",
           convergence_failures == 0 && regressions == 0 && unstable == 0 && shape_ok,
           detail.str());
}

} // namespace

int main() {
    std::cout << "acceptance criteria\n-------------------\n";
    cipher_vectors();
    round_trip_suite();
    pipeline_oracle();
    paper_arithmetic();
    simulated_limit();
    empirical_speedup();
    optimizer_properties();
    std::cout << "-------------------\n"
              << (failures == 0 ? "all gated criteria passed"
                                : std::to_string(failures) + " gated criteria FAILED")
              << "\n";
    return failures == 0 ? 0 : 1;
}
