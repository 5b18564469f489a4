#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "cipherpipe/product_cipher.hpp"

namespace cipherpipe {

/// Raised when run() observes a failed stage; carries the stage index.
class PipelineError : public std::runtime_error {
public:
    PipelineError(std::size_t stage, const std::string& what)
        : std::runtime_error("stage " + std::to_string(stage) + ": " + what), stage_(stage) {}
    std::size_t stage() const { return stage_; }

private:
    std::size_t stage_;
};

/// Raised when drain_and_shutdown() exceeds its timeout; the message lists
/// per-stage progress and buffer occupancy.
class PipelineTimeout : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bounded blocking FIFO carrying blocks by value. Producers block while
/// full, consumers block while empty; close() lets consumers drain and then
/// observe end-of-stream.
class BoundedBlockQueue {
public:
    explicit BoundedBlockQueue(std::size_t capacity);

    void push(const Block64& b);
    /// Returns false at end-of-stream. occupancy_seen reports the queue size
    /// at the moment of the pop (the popped block included).
    bool pop(Block64& out, std::size_t& occupancy_seen);

    void close();
    void abort();
    std::size_t size() const;
    std::size_t capacity() const { return capacity_; }

    struct Aborted {};

private:
    mutable std::mutex mutex_;
    std::condition_variable not_full_;
    std::condition_variable not_empty_;
    std::vector<Block64> ring_;
    std::size_t capacity_;
    std::size_t head_ = 0;
    std::size_t count_ = 0;
    bool closed_ = false;
    bool aborted_ = false;
};

struct StageStats {
    std::uint64_t blocks = 0;
    std::chrono::nanoseconds busy{0};
    std::chrono::nanoseconds blocked{0};
    /// input_occupancy[k] counts pops that found k blocks queued (stage 0
    /// reads the source directly and keeps an empty histogram).
    std::vector<std::uint64_t> input_occupancy;

    std::size_t max_occupancy_seen() const {
        for (std::size_t k = input_occupancy.size(); k > 0; --k)
            if (input_occupancy[k - 1] != 0)
                return k - 1;
        return 0;
    }
};

/// Test hook: replaces the cipher work of every stage. Production pipelines
/// leave it empty.
using StageFn = std::function<Block64(const Block64&)>;

struct PipelineConfig {
    Partitioning partitions;
    std::size_t buffer_capacity = 64;
    MasterKey128 key;
    /// Decrypt pipelines take the partition groups in inverse-execution
    /// order; each stage then applies its group's inverses back to front.
    CipherDirection direction = CipherDirection::Encrypt;
    std::vector<StageFn> stage_overrides; // empty, or one per partition
};

struct RunResult {
    std::vector<Block64> sink;
    std::vector<StageStats> stats;
    bool complete = true; // false when drained early
};

/// N stage workers joined by N-1 bounded buffers. Key schedules are derived
/// once and shared read-only; blocks move by value, so stages share no
/// mutable state. A pipeline instance executes one stream: build, run (or
/// start/wait), optionally drain_and_shutdown.
class Pipeline {
public:
    explicit Pipeline(PipelineConfig config);
    ~Pipeline();

    Pipeline(const Pipeline&) = delete;
    Pipeline& operator=(const Pipeline&) = delete;

    std::size_t stage_count() const { return stage_count_; }
    std::size_t buffer_count() const { return queues_.size(); }

    /// start + wait. Rejects concurrent or repeated runs.
    RunResult run(std::span<const Block64> source);

    void start(std::span<const Block64> source);
    RunResult wait();

    /// Stop feeding new source blocks, let the end-of-stream marker drain
    /// through every buffer, and join the workers. Idempotent; throws
    /// PipelineTimeout with a per-stage report if workers fail to drain.
    void drain_and_shutdown();

    std::chrono::milliseconds shutdown_timeout{30000};

private:
    enum class State { Idle, Running, Done };

    void worker(std::size_t stage);
    void run_cooperative();
    bool workers_done() const;
    void join_all();
    std::string stall_report() const;

    PipelineConfig config_;
    std::shared_ptr<const ProductCipherSpec> spec_;
    std::size_t stage_count_;
    std::vector<std::unique_ptr<BoundedBlockQueue>> queues_;
    std::vector<std::thread> threads_;

    std::span<const Block64> source_;
    std::vector<Block64> sink_;
    std::vector<StageStats> stats_;

    std::atomic<State> state_{State::Idle};
    std::atomic<bool> stop_feeding_{false};
    std::atomic<bool> failed_{false};
    std::atomic<std::size_t> failed_stage_{0};
    std::string failure_message_;
    std::mutex failure_mutex_;

    mutable std::mutex done_mutex_;
    std::condition_variable done_cv_;
    std::size_t workers_finished_ = 0;
    std::vector<std::uint8_t> stage_done_;
    bool cooperative_ = false;
    bool joined_ = false;
};

/// Worker-thread cap read from CIPHERPIPE_THREADS. A pipeline whose stage
/// count exceeds the cap runs cooperatively on the calling thread instead of
/// spawning workers (bit-identical output, deterministic schedule).
std::size_t worker_thread_cap();

} // namespace cipherpipe
