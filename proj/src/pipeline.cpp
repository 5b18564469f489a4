#include "cipherpipe/pipeline.hpp"

#include <cstdlib>
#include <deque>
#include <limits>
#include <sstream>

namespace cipherpipe {

using Clock = std::chrono::steady_clock;

// ---------------------------------------------------------------- queue

BoundedBlockQueue::BoundedBlockQueue(std::size_t capacity)
    : ring_(capacity), capacity_(capacity) {
    if (capacity == 0)
        throw std::invalid_argument("buffer capacity must be >= 1");
}

void BoundedBlockQueue::push(const Block64& b) {
    std::unique_lock lock(mutex_);
    not_full_.wait(lock, [&] { return count_ < capacity_ || aborted_; });
    if (aborted_)
        throw Aborted{};
    ring_[(head_ + count_) % capacity_] = b;
    ++count_;
    not_empty_.notify_one();
}

bool BoundedBlockQueue::pop(Block64& out, std::size_t& occupancy_seen) {
    std::unique_lock lock(mutex_);
    not_empty_.wait(lock, [&] { return count_ > 0 || closed_ || aborted_; });
    if (aborted_)
        throw Aborted{};
    if (count_ == 0)
        return false; // closed and drained
    occupancy_seen = count_;
    out = ring_[head_];
    head_ = (head_ + 1) % capacity_;
    --count_;
    not_full_.notify_one();
    return true;
}

void BoundedBlockQueue::close() {
    std::lock_guard lock(mutex_);
    closed_ = true;
    not_empty_.notify_all();
}

void BoundedBlockQueue::abort() {
    std::lock_guard lock(mutex_);
    aborted_ = true;
    not_empty_.notify_all();
    not_full_.notify_all();
}

std::size_t BoundedBlockQueue::size() const {
    std::lock_guard lock(mutex_);
    return count_;
}

// -------------------------------------------------------------- pipeline

std::size_t worker_thread_cap() {
    const char* env = std::getenv("CIPHERPIPE_THREADS");
    if (!env || !*env)
        return std::numeric_limits<std::size_t>::max();
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0' || v == 0)
        return std::numeric_limits<std::size_t>::max();
    return static_cast<std::size_t>(v);
}

namespace {

StageList concat_partitions(const Partitioning& partitions) {
    StageList all;
    for (const auto& group : partitions)
        for (const auto& s : group)
            all.push_back(s);
    return all;
}

} // namespace

Pipeline::Pipeline(PipelineConfig config) : config_(std::move(config)) {
    if (config_.partitions.empty())
        throw std::invalid_argument("pipeline needs at least one partition");
    if (config_.buffer_capacity == 0)
        throw std::invalid_argument("buffer capacity must be >= 1");
    if (!config_.stage_overrides.empty() &&
        config_.stage_overrides.size() != config_.partitions.size())
        throw std::invalid_argument("stage overrides must match the partition count");

    stage_count_ = config_.partitions.size();
    spec_ = std::make_shared<const ProductCipherSpec>(concat_partitions(config_.partitions),
                                                      config_.key);
    queues_.reserve(stage_count_ - 1);
    for (std::size_t i = 0; i + 1 < stage_count_; ++i)
        queues_.push_back(std::make_unique<BoundedBlockQueue>(config_.buffer_capacity));
}

Pipeline::~Pipeline() {
    stop_feeding_.store(true, std::memory_order_relaxed);
    for (auto& q : queues_)
        q->abort();
    join_all();
}

RunResult Pipeline::run(std::span<const Block64> source) {
    start(source);
    return wait();
}

void Pipeline::start(std::span<const Block64> source) {
    State expected = State::Idle;
    if (!state_.compare_exchange_strong(expected, State::Running))
        throw std::logic_error(expected == State::Running
                                   ? "pipeline is already running"
                                   : "pipeline instances execute a single stream");

    source_ = source;
    sink_.clear();
    sink_.reserve(source.size());
    stats_.assign(stage_count_, StageStats{});
    for (std::size_t i = 1; i < stage_count_; ++i)
        stats_[i].input_occupancy.assign(config_.buffer_capacity + 1, 0);
    stage_done_.assign(stage_count_, 0);
    workers_finished_ = 0;

    cooperative_ = stage_count_ > worker_thread_cap();
    if (cooperative_) {
        run_cooperative();
        return;
    }

    threads_.reserve(stage_count_);
    for (std::size_t i = 0; i < stage_count_; ++i)
        threads_.emplace_back([this, i] { worker(i); });
}

RunResult Pipeline::wait() {
    const State s = state_.load();
    if (s == State::Idle)
        throw std::logic_error("pipeline was never started");
    if (s == State::Done)
        throw std::logic_error("pipeline result already collected");

    if (!cooperative_) {
        std::unique_lock lock(done_mutex_);
        done_cv_.wait(lock, [&] { return workers_finished_ == stage_count_; });
    }
    join_all();
    state_.store(State::Done);

    if (failed_.load()) {
        sink_.clear(); // partial output is not meaningful after a stage failure
        throw PipelineError(failed_stage_.load(), failure_message_);
    }

    RunResult result;
    result.complete = sink_.size() == source_.size();
    result.sink = std::move(sink_);
    result.stats = std::move(stats_);
    return result;
}

void Pipeline::drain_and_shutdown() {
    const State s = state_.load();
    if (s != State::Running)
        return; // never started, or already collected: nothing to drain

    stop_feeding_.store(true, std::memory_order_relaxed);
    if (cooperative_)
        return; // cooperative execution finished inside start()

    std::unique_lock lock(done_mutex_);
    if (!done_cv_.wait_for(lock, shutdown_timeout,
                           [&] { return workers_finished_ == stage_count_; })) {
        lock.unlock();
        throw PipelineTimeout("pipeline failed to drain within " +
                              std::to_string(shutdown_timeout.count()) + " ms\n" +
                              stall_report());
    }
    lock.unlock();
    join_all();
}

bool Pipeline::workers_done() const { return workers_finished_ == stage_count_; }

void Pipeline::join_all() {
    for (auto& t : threads_)
        if (t.joinable())
            t.join();
}

std::string Pipeline::stall_report() const {
    std::ostringstream os;
    {
        std::lock_guard lock(done_mutex_);
        for (std::size_t i = 0; i < stage_count_; ++i)
            os << "  stage " << i << ": " << (stage_done_[i] ? "finished" : "running") << "\n";
    }
    for (std::size_t i = 0; i < queues_.size(); ++i)
        os << "  buffer " << i << ": " << queues_[i]->size() << "/" << queues_[i]->capacity()
           << " blocks\n";
    return os.str();
}

void Pipeline::worker(std::size_t stage) {
    StageStats local;
    if (stage > 0)
        local.input_occupancy.assign(config_.buffer_capacity + 1, 0);

    BoundedBlockQueue* in = stage > 0 ? queues_[stage - 1].get() : nullptr;
    BoundedBlockQueue* out = stage + 1 < stage_count_ ? queues_[stage].get() : nullptr;
    const StageFn* override_fn =
        config_.stage_overrides.empty() ? nullptr : &config_.stage_overrides[stage];
    const StageList& work = config_.partitions[stage];

    bool aborted = false;
    try {
        std::size_t src_index = 0;
        for (;;) {
            Block64 block;
            if (stage == 0) {
                if (src_index >= source_.size() || stop_feeding_.load(std::memory_order_relaxed))
                    break;
                block = source_[src_index++];
            } else {
                const auto t0 = Clock::now();
                std::size_t occupancy = 0;
                const bool have = in->pop(block, occupancy);
                local.blocked += Clock::now() - t0;
                if (!have)
                    break;
                ++local.input_occupancy[occupancy];
            }

            const auto t1 = Clock::now();
            if (override_fn && *override_fn) {
                block = (*override_fn)(block);
            } else if (config_.direction == CipherDirection::Encrypt) {
                for (const auto& s : work)
                    block = spec_->apply(block, s);
            } else {
                for (auto it = work.rbegin(); it != work.rend(); ++it)
                    block = spec_->apply_inverse(block, *it);
            }
            local.busy += Clock::now() - t1;
            ++local.blocks;

            if (out) {
                const auto t2 = Clock::now();
                out->push(block);
                local.blocked += Clock::now() - t2;
            } else {
                sink_.push_back(block);
            }
        }
    } catch (const BoundedBlockQueue::Aborted&) {
        aborted = true; // some other stage failed first
    } catch (const std::exception& e) {
        bool expected = false;
        if (failed_.compare_exchange_strong(expected, true)) {
            failed_stage_.store(stage);
            std::lock_guard lock(failure_mutex_);
            failure_message_ = e.what();
        }
        aborted = true;
        for (auto& q : queues_)
            q->abort();
    }

    if (out && !aborted)
        out->close();

    std::lock_guard lock(done_mutex_);
    stats_[stage] = std::move(local);
    stage_done_[stage] = 1;
    ++workers_finished_;
    done_cv_.notify_all();
}

void Pipeline::run_cooperative() {
    std::vector<std::deque<Block64>> buffers(stage_count_ > 0 ? stage_count_ - 1 : 0);
    std::size_t src_index = 0;

    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t i = 0; i < stage_count_; ++i) {
            for (;;) {
                Block64 block;
                if (i == 0) {
                    if (src_index >= source_.size() ||
                        stop_feeding_.load(std::memory_order_relaxed))
                        break;
                } else if (buffers[i - 1].empty()) {
                    break;
                }
                const bool has_room =
                    i + 1 == stage_count_ || buffers[i].size() < config_.buffer_capacity;
                if (!has_room)
                    break;

                if (i == 0) {
                    block = source_[src_index++];
                } else {
                    ++stats_[i].input_occupancy[buffers[i - 1].size()];
                    block = buffers[i - 1].front();
                    buffers[i - 1].pop_front();
                }

                const auto t0 = Clock::now();
                try {
                    if (!config_.stage_overrides.empty() && config_.stage_overrides[i]) {
                        block = config_.stage_overrides[i](block);
                    } else if (config_.direction == CipherDirection::Encrypt) {
                        for (const auto& s : config_.partitions[i])
                            block = spec_->apply(block, s);
                    } else {
                        const auto& work = config_.partitions[i];
                        for (auto it = work.rbegin(); it != work.rend(); ++it)
                            block = spec_->apply_inverse(block, *it);
                    }
                } catch (const std::exception& e) {
                    failed_.store(true);
                    failed_stage_.store(i);
                    failure_message_ = e.what();
                    return;
                }
                stats_[i].busy += Clock::now() - t0;
                ++stats_[i].blocks;

                if (i + 1 == stage_count_)
                    sink_.push_back(block);
                else
                    buffers[i].push_back(block);
                progress = true;
            }
        }
    }
}

} // namespace cipherpipe
