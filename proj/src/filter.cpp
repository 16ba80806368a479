#include "themis/filter.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <thread>

#include "themis/dataset.hpp"

namespace themis {

std::optional<Trajectory> VectorSource::next() {
    if (cursor_ >= items_.size()) return std::nullopt;
    return items_[cursor_++];
}

DirectoryWatchSource::DirectoryWatchSource(std::string dir, std::chrono::milliseconds poll_interval,
                                           std::optional<std::chrono::milliseconds> idle_timeout)
    : dir_(std::move(dir)), poll_(poll_interval), idle_timeout_(idle_timeout) {}

bool DirectoryWatchSource::scan() {
    if (!std::filesystem::exists(dir_)) return false;
    std::vector<std::string> fresh;
    for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
        if (!entry.is_regular_file()) continue;
        const auto ext = entry.path().extension();
        if (ext != ".json" && ext != ".jsonl") continue;
        const std::string path = entry.path().string();
        if (seen_.count(path)) continue;
        fresh.push_back(path);
    }
    std::sort(fresh.begin(), fresh.end());
    for (const auto& path : fresh) {
        seen_.insert(path);
        LoadResult loaded = load_dataset(path, /*strict=*/false);
        skipped_ += loaded.skipped;
        for (auto& t : loaded.trajectories) pending_.push_back(std::move(t));
    }
    return !fresh.empty();
}

std::optional<Trajectory> DirectoryWatchSource::next() {
    auto idle_since = std::chrono::steady_clock::now();
    while (true) {
        if (pending_.empty()) {
            if (scan()) idle_since = std::chrono::steady_clock::now();
        }
        if (!pending_.empty()) {
            Trajectory t = std::move(pending_.front());
            pending_.pop_front();
            return t;
        }
        if (stop_.load()) {
            scan();   // drain anything that landed just before the stop request
            if (pending_.empty()) return std::nullopt;
            continue;
        }
        if (idle_timeout_ && std::chrono::steady_clock::now() - idle_since >= *idle_timeout_)
            return std::nullopt;
        std::this_thread::sleep_for(poll_);
    }
}

namespace {

/// Bounded MPMC queue; push blocks when full (back-pressure on the source).
class BoundedQueue {
public:
    explicit BoundedQueue(std::size_t capacity) : capacity_(capacity) {}

    void push(Trajectory t) {
        std::unique_lock<std::mutex> lock(mutex_);
        not_full_.wait(lock, [this] { return items_.size() < capacity_ || closed_; });
        if (closed_) return;
        items_.push_back(std::move(t));
        not_empty_.notify_one();
    }

    std::optional<Trajectory> pop() {
        std::unique_lock<std::mutex> lock(mutex_);
        not_empty_.wait(lock, [this] { return !items_.empty() || closed_; });
        if (items_.empty()) return std::nullopt;
        Trajectory t = std::move(items_.front());
        items_.pop_front();
        not_full_.notify_one();
        return t;
    }

    void close() {
        std::lock_guard<std::mutex> lock(mutex_);
        closed_ = true;
        not_empty_.notify_all();
        not_full_.notify_all();
    }

private:
    std::size_t capacity_;
    std::deque<Trajectory> items_;
    bool closed_ = false;
    std::mutex mutex_;
    std::condition_variable not_empty_;
    std::condition_variable not_full_;
};

}  // namespace

FilterSummary filter_stream(TrajectorySource& source, const CriticStrategy& strategy,
                            Backend& backend, const FilterSinks& sinks, int workers,
                            std::size_t queue_capacity) {
    if (workers < 1) throw SchemaError("workers", "must be >= 1");
    if (queue_capacity == 0) queue_capacity = std::max<std::size_t>(2 * workers, 8);

    std::ofstream accepted_out(sinks.accepted_path, std::ios::app);
    if (!accepted_out) throw Error("cannot open sink for writing: " + sinks.accepted_path);
    std::ofstream rejected_out;
    if (!sinks.rejected_path.empty()) {
        rejected_out.open(sinks.rejected_path, std::ios::app);
        if (!rejected_out) throw Error("cannot open side log: " + sinks.rejected_path);
    }

    BoundedQueue queue(queue_capacity);
    FilterSummary summary;
    std::mutex sink_mutex;

    std::thread feeder([&] {
        while (auto t = source.next()) queue.push(std::move(*t));
        queue.close();
    });

    auto work = [&] {
        while (auto t = queue.pop()) {
            try {
                EvaluationRecord record = evaluate_with_strategy(*t, strategy, backend);
                std::lock_guard<std::mutex> lock(sink_mutex);
                if (record.verdict) {
                    ++summary.accepted;
                    accepted_out << trajectory_to_line(*t) << '\n';
                    accepted_out.flush();
                } else {
                    ++summary.rejected;
                    if (rejected_out.is_open()) {
                        rejected_out << json{{"trajectory_id", record.trajectory_id},
                                             {"record", record}}
                                            .dump()
                                     << '\n';
                        rejected_out.flush();
                    }
                }
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(sink_mutex);
                ++summary.failed;
                if (rejected_out.is_open()) {
                    rejected_out << json{{"trajectory_id", t->task.task_id}, {"error", e.what()}}
                                        .dump()
                                 << '\n';
                    rejected_out.flush();
                }
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    feeder.join();
    for (auto& t : pool) t.join();
    return summary;
}

}  // namespace themis
