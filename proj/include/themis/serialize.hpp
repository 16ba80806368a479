#pragma once

#include <string>
#include <vector>

#include "themis/types.hpp"

namespace themis {

/// Agent history as an indexed array of {step_index, think, action} entries;
/// the serialization every agent prompt embeds.
json agent_history_json(const Trajectory& trajectory);

/// Milestones + verification results (+ previously raised issues) for the
/// Reviewer's audit.
json milestone_report_json(const std::vector<MilestoneSet>& history,
                           const std::vector<std::vector<VerificationResult>>& verifications,
                           const std::vector<std::vector<ReviewerIssue>>& prior_issues);

/// The complete deliberation handed to the Judge: every milestone revision,
/// every verification, every issue.
json deliberation_json(const std::vector<MilestoneSet>& history,
                       const std::vector<std::vector<VerificationResult>>& verifications,
                       const std::vector<std::vector<ReviewerIssue>>& issues);

std::string trajectory_summary_text(const Trajectory& trajectory);

}  // namespace themis
