#pragma once

#include <optional>

#include "themis/metrics.hpp"
#include "themis/voting.hpp"

namespace themis {

struct BenchmarkResult {
    MetricsReport report;
    std::vector<EvaluationRecord> records;       // dataset order, hard failures omitted
    std::vector<std::string> unevaluated_ids;    // hard failures, excluded from metrics
};

/// Evaluates every labeled trajectory (concurrently, up to `workers`) and
/// aggregates overall plus per-platform metrics. Results are deterministic
/// under a scripted backend regardless of worker count. A hard backend
/// failure aborts only the affected trajectory, which lands in the
/// unevaluated bucket.
BenchmarkResult run_benchmark(const std::vector<Trajectory>& dataset,
                              const CriticStrategy& strategy,
                              const std::optional<VotingRule>& rule, Backend& backend,
                              int workers);

/// One MetricsReport per strategy over the identical dataset; every row
/// carries the shared dataset hash.
std::vector<MetricsReport> compare_strategies(const std::vector<Trajectory>& dataset,
                                              const std::vector<CriticStrategy>& strategies,
                                              Backend& backend, int workers);

void save_records(const std::string& path, const std::vector<EvaluationRecord>& records);
std::vector<EvaluationRecord> load_records(const std::string& path);

}  // namespace themis
