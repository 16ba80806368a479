#include "themis/serialize.hpp"

namespace themis {

json agent_history_json(const Trajectory& trajectory) {
    json history = json::array();
    for (const auto& s : trajectory.steps) {
        history.push_back({{"step_index", s.index}, {"think", s.think}, {"action", s.action}});
    }
    return history;
}

json milestone_report_json(const std::vector<MilestoneSet>& history,
                           const std::vector<std::vector<VerificationResult>>& verifications,
                           const std::vector<std::vector<ReviewerIssue>>& prior_issues) {
    json report;
    report["milestone_revisions"] = history;
    report["verifications"] = verifications;
    if (!prior_issues.empty()) report["previously_raised_issues"] = prior_issues;
    return report;
}

json deliberation_json(const std::vector<MilestoneSet>& history,
                       const std::vector<std::vector<VerificationResult>>& verifications,
                       const std::vector<std::vector<ReviewerIssue>>& issues) {
    return json{{"milestone_revisions", history},
                {"verifications", verifications},
                {"issues", issues}};
}

std::string trajectory_summary_text(const Trajectory& trajectory) {
    json summary = {{"platform", to_string(trajectory.task.platform)},
                    {"total_steps", trajectory.step_count()},
                    {"agent_history", agent_history_json(trajectory)}};
    return summary.dump(2);
}

}  // namespace themis
