#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <optional>
#include <set>
#include <string>

#include "themis/baselines.hpp"

namespace themis {

/// Pull-based trajectory producer. next() blocks until a trajectory is
/// available and returns nullopt when the source is exhausted. Each
/// trajectory is yielded exactly once.
class TrajectorySource {
public:
    virtual ~TrajectorySource() = default;
    virtual std::optional<Trajectory> next() = 0;
};

class VectorSource : public TrajectorySource {
public:
    explicit VectorSource(std::vector<Trajectory> items) : items_(std::move(items)) {}
    std::optional<Trajectory> next() override;

private:
    std::vector<Trajectory> items_;
    std::size_t cursor_ = 0;
};

/// Polls a directory for *.json / *.jsonl files and yields their records as
/// they appear; files are picked up exactly once (by path). Producers should
/// write-then-rename so a file is never observed half-written. The source
/// ends when request_stop() has been called and no unread files remain, or
/// after idle_timeout with no new work.
class DirectoryWatchSource : public TrajectorySource {
public:
    DirectoryWatchSource(std::string dir,
                         std::chrono::milliseconds poll_interval = std::chrono::milliseconds(50),
                         std::optional<std::chrono::milliseconds> idle_timeout = std::nullopt);

    std::optional<Trajectory> next() override;
    void request_stop() { stop_.store(true); }

    std::size_t files_seen() const { return seen_.size(); }
    std::size_t lines_skipped() const { return skipped_; }

private:
    bool scan();   // returns true when new files were ingested

    std::string dir_;
    std::chrono::milliseconds poll_;
    std::optional<std::chrono::milliseconds> idle_timeout_;
    std::atomic<bool> stop_{false};
    std::set<std::string> seen_;
    std::deque<Trajectory> pending_;
    std::size_t skipped_ = 0;
};

struct FilterDecision {
    std::string trajectory_id;
    bool accepted = false;
    EvaluationRecord record;
};

struct FilterSummary {
    long accepted = 0;
    long rejected = 0;
    long failed = 0;    // hard evaluation failures, logged and skipped
};

struct FilterSinks {
    std::string accepted_path;   // accepted trajectories, JSONL
    std::string rejected_path;   // rejected {trajectory_id, record} entries, JSONL (optional)
};

/// Consumes trajectories as they arrive, evaluates each exactly once with
/// the given critic, appends accepted ones to the sink and rejected records
/// to the side log. A bounded queue between the source and the worker pool
/// provides back-pressure.
FilterSummary filter_stream(TrajectorySource& source, const CriticStrategy& strategy,
                            Backend& backend, const FilterSinks& sinks, int workers,
                            std::size_t queue_capacity = 0);

}  // namespace themis
