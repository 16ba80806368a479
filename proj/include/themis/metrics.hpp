#pragma once

#include <map>
#include <string>
#include <vector>

#include "themis/types.hpp"

namespace themis {

struct ConfusionCounts {
    long tp = 0;
    long fp = 0;
    long tn = 0;
    long fn = 0;

    long total() const { return tp + fp + tn + fn; }
    void add(bool predicted, bool label);
};

struct Metrics {
    double accuracy = 0.0;
    double precision = 0.0;   // 0 when undefined (zero denominator)
    double recall = 0.0;      // 0 when undefined
    double f1 = 0.0;          // 2PR/(P+R), 0 when P+R == 0
};

Metrics metrics_from_counts(const ConfusionCounts& c);

struct MetricsReport {
    Metrics overall;
    ConfusionCounts counts;
    std::map<std::string, Metrics> per_platform;
    std::map<std::string, ConfusionCounts> per_platform_counts;
    std::string strategy;
    UsageStats usage;
    long unevaluated = 0;      // hard failures, excluded from the counts above
    std::string dataset_hash;

    json to_json() const;
    std::string to_table() const;   // human-readable summary
};

/// Standard confusion-matrix metrics over (predicted, label) pairs.
/// Throws SchemaError on empty input.
MetricsReport compute_metrics(const std::vector<std::pair<bool, bool>>& pairs);

}  // namespace themis
