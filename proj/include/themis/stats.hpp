#pragma once

#include <string>
#include <vector>

#include "themis/types.hpp"

namespace themis {

/// Descriptive statistics over how densely trajectories were milestoned.
/// "Milestone percentage" of a task is |M| / T using the final milestone set.
struct StatsReport {
    struct PerTask {
        std::string task_id;
        int steps = 0;
        int milestones = 0;
        double percentage = 0.0;
    };

    std::vector<PerTask> per_task;
    double task_level_mean_pct = 0.0;
    double task_level_median_pct = 0.0;
    double pct_std = 0.0;                  // population std of per-task percentages
    double step_level_overall_pct = 0.0;   // sum(|M|) / sum(T)
    double milestone_count_mean = 0.0;
    double milestone_count_median = 0.0;
    double milestone_count_std = 0.0;
    long total_tasks = 0;
    long total_steps = 0;
    long total_milestones = 0;
    double avg_steps_per_task = 0.0;

    json to_json() const;
};

/// Matches records to trajectories by trajectory_id (== task_id). Throws
/// SchemaError on empty inputs or when a record has no matching trajectory.
StatsReport dataset_stats(const std::vector<Trajectory>& trajectories,
                          const std::vector<EvaluationRecord>& records);

}  // namespace themis
