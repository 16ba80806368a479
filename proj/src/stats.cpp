#include "themis/stats.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "themis/errors.hpp"

namespace themis {

namespace {

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n == 0) return 0.0;
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double pop_std(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

StatsReport dataset_stats(const std::vector<Trajectory>& trajectories,
                          const std::vector<EvaluationRecord>& records) {
    if (trajectories.empty() || records.empty())
        throw SchemaError("dataset_stats", "empty input");

    std::unordered_map<std::string, const Trajectory*> by_id;
    for (const auto& t : trajectories) by_id[t.task.task_id] = &t;

    StatsReport r;
    std::vector<double> pcts;
    std::vector<double> counts;
    for (const auto& rec : records) {
        auto it = by_id.find(rec.trajectory_id);
        if (it == by_id.end())
            throw SchemaError("trajectory_id",
                              "record '" + rec.trajectory_id + "' has no matching trajectory");
        const int steps = it->second->step_count();
        const int milestones = rec.milestone_history.empty()
                                   ? 0
                                   : static_cast<int>(rec.milestone_history.back().size());
        const double pct = steps > 0 ? 100.0 * milestones / steps : 0.0;
        r.per_task.push_back({rec.trajectory_id, steps, milestones, pct});
        pcts.push_back(pct);
        counts.push_back(static_cast<double>(milestones));
        r.total_steps += steps;
        r.total_milestones += milestones;
    }
    r.total_tasks = static_cast<long>(records.size());
    r.task_level_mean_pct = mean_of(pcts);
    r.task_level_median_pct = median_of(pcts);
    r.pct_std = pop_std(pcts);
    r.step_level_overall_pct =
        r.total_steps > 0 ? 100.0 * static_cast<double>(r.total_milestones) /
                                static_cast<double>(r.total_steps)
                          : 0.0;
    r.milestone_count_mean = mean_of(counts);
    r.milestone_count_median = median_of(counts);
    r.milestone_count_std = pop_std(counts);
    r.avg_steps_per_task =
        static_cast<double>(r.total_steps) / static_cast<double>(r.total_tasks);
    return r;
}

json StatsReport::to_json() const {
    json tasks = json::array();
    for (const auto& pt : per_task) {
        tasks.push_back({{"task_id", pt.task_id},
                         {"steps", pt.steps},
                         {"milestones", pt.milestones},
                         {"percentage", pt.percentage}});
    }
    return json{{"milestone_percentage",
                 {{"task_level_mean", task_level_mean_pct},
                  {"median", task_level_median_pct},
                  {"std_deviation", pct_std},
                  {"step_level_overall", step_level_overall_pct}}},
                {"milestone_count",
                 {{"mean", milestone_count_mean},
                  {"median", milestone_count_median},
                  {"std_deviation", milestone_count_std}}},
                {"summary",
                 {{"total_tasks", total_tasks},
                  {"total_steps", total_steps},
                  {"total_milestones", total_milestones},
                  {"avg_steps_per_task", avg_steps_per_task}}},
                {"per_task", tasks}};
}

}  // namespace themis
