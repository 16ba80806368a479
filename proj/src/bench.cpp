#include "themis/bench.hpp"

#include <atomic>
#include <fstream>
#include <thread>

#include "themis/dataset.hpp"

namespace themis {

BenchmarkResult run_benchmark(const std::vector<Trajectory>& dataset,
                              const CriticStrategy& strategy,
                              const std::optional<VotingRule>& rule, Backend& backend,
                              int workers) {
    if (workers < 1) throw SchemaError("workers", "must be >= 1");
    for (const auto& t : dataset) {
        if (!t.label) throw SchemaError("label", "trajectory '" + t.task.task_id + "' is unlabeled");
    }

    struct Slot {
        std::optional<EvaluationRecord> record;
        std::string error;
    };
    std::vector<Slot> slots(dataset.size());
    std::atomic<std::size_t> next{0};

    auto work = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= dataset.size()) return;
            try {
                slots[i].record = rule ? vote_evaluate(dataset[i], strategy, *rule, backend)
                                       : evaluate_with_strategy(dataset[i], strategy, backend);
            } catch (const std::exception& e) {
                slots[i].error = e.what();
            }
        }
    };

    std::vector<std::thread> pool;
    const int n = std::min<int>(workers, static_cast<int>(dataset.size()));
    pool.reserve(n);
    for (int i = 0; i < n; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();

    BenchmarkResult result;
    result.report.strategy =
        rule ? strategy.describe() + "+" + rule->describe() : strategy.describe();
    result.report.dataset_hash = dataset_hash(dataset);
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        if (!slots[i].record) {
            result.unevaluated_ids.push_back(dataset[i].task.task_id);
            continue;
        }
        const EvaluationRecord& record = *slots[i].record;
        const bool label = *dataset[i].label;
        const std::string platform = to_string(dataset[i].task.platform);
        result.report.counts.add(record.verdict, label);
        result.report.per_platform_counts[platform].add(record.verdict, label);
        result.report.usage += record.usage;
        result.records.push_back(record);
    }
    result.report.unevaluated = static_cast<long>(result.unevaluated_ids.size());
    result.report.overall = metrics_from_counts(result.report.counts);
    for (const auto& [name, counts] : result.report.per_platform_counts) {
        result.report.per_platform[name] = metrics_from_counts(counts);
    }
    return result;
}

std::vector<MetricsReport> compare_strategies(const std::vector<Trajectory>& dataset,
                                              const std::vector<CriticStrategy>& strategies,
                                              Backend& backend, int workers) {
    std::vector<MetricsReport> reports;
    reports.reserve(strategies.size());
    for (const auto& strategy : strategies) {
        reports.push_back(run_benchmark(dataset, strategy, std::nullopt, backend, workers).report);
    }
    return reports;
}

void save_records(const std::string& path, const std::vector<EvaluationRecord>& records) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open records sink: " + path);
    for (const auto& r : records) out << json(r).dump() << '\n';
}

std::vector<EvaluationRecord> load_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("records file missing: " + path);
    std::vector<EvaluationRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        records.push_back(json::parse(line).get<EvaluationRecord>());
    }
    return records;
}

}  // namespace themis
