#include "themis/metrics.hpp"

#include <iomanip>
#include <sstream>

#include "themis/errors.hpp"

namespace themis {

void ConfusionCounts::add(bool predicted, bool label) {
    if (predicted && label) ++tp;
    else if (predicted && !label) ++fp;
    else if (!predicted && label) ++fn;
    else ++tn;
}

Metrics metrics_from_counts(const ConfusionCounts& c) {
    Metrics m;
    const long total = c.total();
    m.accuracy = total > 0 ? static_cast<double>(c.tp + c.tn) / total : 0.0;
    m.precision = (c.tp + c.fp) > 0 ? static_cast<double>(c.tp) / (c.tp + c.fp) : 0.0;
    m.recall = (c.tp + c.fn) > 0 ? static_cast<double>(c.tp) / (c.tp + c.fn) : 0.0;
    m.f1 = (m.precision + m.recall) > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    return m;
}

MetricsReport compute_metrics(const std::vector<std::pair<bool, bool>>& pairs) {
    if (pairs.empty()) throw SchemaError("pairs", "empty input");
    MetricsReport report;
    for (const auto& [predicted, label] : pairs) report.counts.add(predicted, label);
    report.overall = metrics_from_counts(report.counts);
    return report;
}

namespace {

json metrics_json(const Metrics& m, const ConfusionCounts& c) {
    return json{{"accuracy", m.accuracy}, {"precision", m.precision},
                {"recall", m.recall},     {"f1", m.f1},
                {"tp", c.tp},             {"fp", c.fp},
                {"tn", c.tn},             {"fn", c.fn}};
}

}  // namespace

json MetricsReport::to_json() const {
    json j;
    j["strategy"] = strategy;
    j["overall"] = metrics_json(overall, counts);
    json platforms = json::object();
    for (const auto& [name, metrics] : per_platform) {
        platforms[name] = metrics_json(metrics, per_platform_counts.at(name));
    }
    j["per_platform"] = platforms;
    j["unevaluated"] = unevaluated;
    j["usage"] = usage;
    if (!dataset_hash.empty()) j["dataset_hash"] = dataset_hash;
    return j;
}

std::string MetricsReport::to_table() const {
    std::ostringstream os;
    os << std::fixed << std::setprecision(1);
    auto row = [&os](const std::string& name, const Metrics& m, long n) {
        os << "  " << std::left << std::setw(10) << name << std::right << std::setw(7)
           << 100.0 * m.accuracy << std::setw(7) << 100.0 * m.precision << std::setw(7)
           << 100.0 * m.recall << std::setw(7) << 100.0 * m.f1 << std::setw(8) << n << "\n";
    };
    os << "strategy: " << strategy << "\n";
    os << "  " << std::left << std::setw(10) << "platform" << std::right << std::setw(7) << "Acc"
       << std::setw(7) << "Prec" << std::setw(7) << "Rec" << std::setw(7) << "F1" << std::setw(8)
       << "N" << "\n";
    for (const auto& [name, metrics] : per_platform) {
        row(name, metrics, per_platform_counts.at(name).total());
    }
    row("overall", overall, counts.total());
    if (unevaluated > 0) os << "  unevaluated: " << unevaluated << "\n";
    return os.str();
}

}  // namespace themis
