#pragma once

#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "themis/backend.hpp"

namespace themis {

/// Decoding defaults applied to every critic call.
struct ModelParams {
    std::string model_name = "default";
    double temperature = 0.0;
    int max_output_tokens = 2048;
};

/// Thread-safe JSONL sink recording every agent request/response.
class TranscriptLogger {
public:
    explicit TranscriptLogger(const std::string& path);
    void log(const json& entry);

private:
    std::ofstream out_;
    std::mutex mutex_;
};

/// Per-trajectory bookkeeping for one pipeline run: round budgets with hard
/// caps, per-role round counters (which key the scripted backend), retry and
/// usage accounting, and degradation events. Single-threaded by design; one
/// session per trajectory evaluation.
class PipelineSession {
public:
    PipelineSession(std::string trajectory_id, int selector_max_rounds, int reviewer_max_rounds,
                    RetryPolicy retry, ModelParams params = {}, int run_index = 0,
                    TranscriptLogger* transcript = nullptr);

    /// Keys the request (role, trajectory, per-role round counter, run),
    /// applies model params, and issues it with the session retry policy.
    /// Every attempt is charged to the usage totals and logged.
    ChatResponse call(Backend& backend, const std::string& role, ChatRequest request,
                      const ResponseValidator& validator);

    bool selector_budget_left() const { return selector_rounds_ < selector_max_rounds_; }
    void consume_selector_round();
    int selector_rounds() const { return selector_rounds_; }

    bool reviewer_budget_left() const { return reviewer_rounds_ < reviewer_max_rounds_; }
    void consume_reviewer_round();
    int reviewer_rounds() const { return reviewer_rounds_; }

    int retries() const { return retries_; }
    int max_attempts_per_call() const { return max_attempts_per_call_; }
    const UsageStats& usage() const { return usage_; }

    void note_degraded(std::string event) { degraded_.push_back(std::move(event)); }
    const std::vector<std::string>& degraded() const { return degraded_; }

    const std::string& trajectory_id() const { return trajectory_id_; }
    int run_index() const { return run_index_; }
    const RetryPolicy& retry_policy() const { return retry_; }

private:
    std::string trajectory_id_;
    int selector_max_rounds_;
    int reviewer_max_rounds_;
    RetryPolicy retry_;
    ModelParams params_;
    int run_index_;
    TranscriptLogger* transcript_;

    std::map<std::string, int> role_rounds_;
    int selector_rounds_ = 0;
    int reviewer_rounds_ = 0;
    int retries_ = 0;
    int max_attempts_per_call_ = 0;
    UsageStats usage_;
    std::vector<std::string> degraded_;
};

}  // namespace themis
