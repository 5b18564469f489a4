#include "cipherpipe/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cipherpipe/scenario.hpp"
#include "cipherpipe/throughput.hpp"

namespace cipherpipe {

namespace {

std::vector<std::uint8_t> read_stream(std::istream& in) {
    std::vector<std::uint8_t> data;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0)
        data.insert(data.end(), buf, buf + in.gcount());
    return data;
}

std::vector<std::uint8_t> read_input(const std::string& path) {
    if (path == "-")
        return read_stream(std::cin);
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open input file: " + path);
    return read_stream(f);
}

void write_output(const std::string& path, const std::vector<std::uint8_t>& data) {
    if (path == "-") {
        std::cout.write(reinterpret_cast<const char*>(data.data()),
                        static_cast<std::streamsize>(data.size()));
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open output file: " + path);
    f.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
    if (!f)
        throw std::runtime_error("write failed: " + path);
}

std::vector<Block64> to_blocks(const std::vector<std::uint8_t>& data) {
    if (data.size() % 8 != 0)
        throw std::runtime_error("input truncated: block starting at byte offset " +
                                 std::to_string(data.size() - data.size() % 8) + " has only " +
                                 std::to_string(data.size() % 8) + " of 8 bytes");
    std::vector<Block64> blocks(data.size() / 8);
    for (std::size_t i = 0; i < blocks.size(); ++i)
        std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(8 * i), 8,
                    blocks[i].bytes.begin());
    return blocks;
}

std::vector<std::uint8_t> from_blocks(const std::vector<Block64>& blocks) {
    std::vector<std::uint8_t> data;
    data.reserve(blocks.size() * 8);
    for (const auto& b : blocks)
        data.insert(data.end(), b.bytes.begin(), b.bytes.end());
    return data;
}

std::vector<std::size_t> parse_size_list(const std::string& text, const char* what) {
    std::vector<std::size_t> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stoull(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string(what) + ": expected a comma-separated " +
                                        "list of counts, got \"" + text + "\"");
        }
    }
    if (values.empty())
        throw std::invalid_argument(std::string(what) + " must not be empty");
    return values;
}

/// The documented synthetic stream: block i is the big-endian counter i.
std::vector<Block64> counter_stream(std::size_t length) {
    std::vector<Block64> blocks(length);
    for (std::size_t i = 0; i < length; ++i)
        blocks[i] = Block64::from_u64(i);
    return blocks;
}

// all-published default for bench runs
constexpr const char* kDefaultBenchKey = "000102030405060708090a0b0c0d0e0f";

int cmd_crypt(bool encrypt, const std::string& key_hex, const std::string& in_path,
              const std::string& out_path, std::size_t n_stages, std::size_t buffer_capacity) {
    MasterKey128 key;
    try {
        key = key_from_hex(key_hex);
    } catch (const std::exception& e) {
        std::cerr << "cipherpipe: --key: " << e.what() << "\n";
        return 2;
    }

    const std::vector<Block64> blocks = to_blocks(read_input(in_path));
    const ProductCipherSpec spec = ProductCipherSpec::canonical(key);

    std::vector<Block64> result;
    if (n_stages <= 1) {
        result.reserve(blocks.size());
        for (const auto& b : blocks)
            result.push_back(encrypt ? encrypt_block(b, spec) : decrypt_block(b, spec));
    } else {
        Partitioning parts = partition(spec, n_stages);
        if (!encrypt)
            std::reverse(parts.begin(), parts.end());
        PipelineConfig config{std::move(parts), buffer_capacity, key,
                              encrypt ? CipherDirection::Encrypt : CipherDirection::Decrypt,
                              {}};
        Pipeline pipeline(std::move(config));
        result = pipeline.run(blocks).sink;
    }

    write_output(out_path, from_blocks(result));
    return 0;
}

std::string render_bench(const std::vector<ThroughputReport>& rows, ReportFormat format) {
    const auto pct = [](double f) { return 100.0 * f; };
    switch (format) {
    case ReportFormat::Csv: {
        std::ostringstream os;
        os << "stages,stream_len,blocks_per_s,mono_blocks_per_s,speedup,"
              "stage_busy_pct,stage_blocked_pct\n";
        for (const auto& r : rows) {
            os << r.stages << ',' << r.stream_len << ',' << r.pipeline_blocks_per_s << ','
               << r.monolithic_blocks_per_s << ',' << r.speedup << ',';
            std::string busy, blocked;
            for (std::size_t i = 0; i < r.stage_stats.size(); ++i) {
                if (i) {
                    busy += ';';
                    blocked += ';';
                }
                busy += std::to_string(pct(r.busy_fraction(i)));
                blocked += std::to_string(pct(r.blocked_fraction(i)));
            }
            os << busy << ',' << blocked << '\n';
        }
        return os.str();
    }
    case ReportFormat::Json: {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows) {
            nlohmann::json busy = nlohmann::json::array();
            nlohmann::json blocked = nlohmann::json::array();
            for (std::size_t i = 0; i < r.stage_stats.size(); ++i) {
                busy.push_back(pct(r.busy_fraction(i)));
                blocked.push_back(pct(r.blocked_fraction(i)));
            }
            arr.push_back({{"stages", r.stages},
                           {"stream_len", r.stream_len},
                           {"blocks_per_s", r.pipeline_blocks_per_s},
                           {"mono_blocks_per_s", r.monolithic_blocks_per_s},
                           {"speedup", r.speedup},
                           {"stage_busy_pct", busy},
                           {"stage_blocked_pct", blocked}});
        }
        return arr.dump(2) + "\n";
    }
    case ReportFormat::Text: {
        std::ostringstream os;
        os << std::right << std::setw(7) << "stages" << std::setw(12) << "stream_len"
           << std::setw(14) << "blocks/s" << std::setw(14) << "mono b/s" << std::setw(9)
           << "speedup" << "  busy%/blocked% per stage\n";
        for (const auto& r : rows) {
            os << std::right << std::setw(7) << r.stages << std::setw(12) << r.stream_len
               << std::setw(14) << std::fixed << std::setprecision(0)
               << r.pipeline_blocks_per_s << std::setw(14) << r.monolithic_blocks_per_s
               << std::setw(9) << std::setprecision(2) << r.speedup << "  ";
            for (std::size_t i = 0; i < r.stage_stats.size(); ++i) {
                if (i)
                    os << ' ';
                os << std::setprecision(0) << pct(r.busy_fraction(i)) << '/'
                   << pct(r.blocked_fraction(i));
            }
            os << '\n';
            os.unsetf(std::ios::fixed);
        }
        return os.str();
    }
    }
    return {};
}

int cmd_bench(const std::string& key_hex, const std::string& stages_arg,
              const std::string& lengths_arg, std::size_t repetitions,
              std::size_t buffer_capacity, ReportFormat format) {
    const MasterKey128 key = key_from_hex(key_hex.empty() ? kDefaultBenchKey : key_hex);
    const std::vector<std::size_t> stage_counts =
        parse_size_list(stages_arg.empty() ? "1,2,5" : stages_arg, "--stages");
    const std::vector<std::size_t> lengths =
        parse_size_list(lengths_arg.empty() ? "22,10000" : lengths_arg, "--stream-lengths");

    const ProductCipherSpec spec = ProductCipherSpec::canonical(key);
    std::vector<ThroughputReport> rows;
    for (const std::size_t len : lengths) {
        const std::vector<Block64> stream = counter_stream(len);
        for (const std::size_t n : stage_counts) {
            PipelineConfig config{partition(spec, n), buffer_capacity, key,
                                  CipherDirection::Encrypt, {}};
            rows.push_back(measure_throughput(config, stream, repetitions));
        }
    }
    std::cout << render_bench(rows, format);
    return 0;
}

int cmd_model(bool do_optimize, const std::string& scenario_path, ReportFormat format) {
    if (scenario_path.empty())
        throw std::invalid_argument("--scenario is required for this mode");
    const Scenario scenario = load_scenario(scenario_path);
    const ScenarioOutcome outcome = do_optimize ? run_optimize(scenario) : run_simulate(scenario);
    std::cout << render_metrics(outcome.rows, format);
    if (!outcome.final_cores.empty())
        std::cout << render_cores(outcome.final_cores, format);
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"product-cipher encryption, pipelined execution, and the pipeline cost model"};
    app.name("cipherpipe");

    std::string mode;
    app.add_option("--mode", mode, "encrypt | decrypt | bench | simulate | optimize")
        ->required()
        ->check(CLI::IsMember({"encrypt", "decrypt", "bench", "simulate", "optimize"}));
    std::string key_hex;
    app.add_option("--key", key_hex, "128-bit master key, 32 hex chars");
    std::string in_path = "-";
    app.add_option("--in", in_path, "input file (default: stdin)");
    std::string out_path = "-";
    app.add_option("--out", out_path, "output file (default: stdout)");
    std::string stages;
    app.add_option("--stages", stages,
                   "pipeline stage count (default 1); bench takes a comma-separated sweep "
                   "(default 1,2,5)");
    std::size_t buffer_capacity = 64;
    app.add_option("--buffer-capacity", buffer_capacity, "blocks per inter-stage buffer")
        ->check(CLI::PositiveNumber);
    std::string scenario_path;
    app.add_option("--scenario", scenario_path, "scenario file for simulate/optimize");
    std::string report = "text";
    app.add_option("--report", report, "report format: text, csv or json")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    std::string stream_lengths;
    app.add_option("--stream-lengths", stream_lengths,
                   "bench stream lengths, comma-separated (default 22,10000)");
    std::size_t repetitions = 5;
    app.add_option("--repetitions", repetitions, "bench repetitions per row")
        ->check(CLI::PositiveNumber);

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e); // CLI11 prints the usage diagnostic to stderr
    }

    try {
        const ReportFormat format = report_format_from_string(report);
        if (mode == "encrypt" || mode == "decrypt") {
            if (key_hex.empty()) {
                std::cerr << "cipherpipe: --key is required for " << mode << "\n";
                return 2;
            }
            std::size_t n_stages = 1;
            if (!stages.empty()) {
                try {
                    std::size_t used = 0;
                    n_stages = std::stoull(stages, &used);
                    if (used != stages.size() || n_stages == 0)
                        throw std::invalid_argument(stages);
                } catch (const std::exception&) {
                    std::cerr << "cipherpipe: --stages must be a positive count, got \"" << stages
                              << "\"\n";
                    return 2;
                }
            }
            return cmd_crypt(mode == "encrypt", key_hex, in_path, out_path, n_stages,
                             buffer_capacity);
        }
        if (mode == "bench")
            return cmd_bench(key_hex, stages, stream_lengths, repetitions, buffer_capacity,
                             format);
        return cmd_model(mode == "optimize", scenario_path, format);
    } catch (const std::invalid_argument& e) {
        std::cerr << "cipherpipe: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "cipherpipe: " << e.what() << "\n";
        return 1;
    }
}

} // namespace cipherpipe
