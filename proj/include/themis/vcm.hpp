#pragma once

#include <string>
#include <vector>

#include "themis/mvm.hpp"
#include "themis/parsing.hpp"

namespace themis {

enum class ReviewerRole { critic, advisor, off };
enum class JudgeMode { judge, all_milestones_pass };

std::string to_string(ReviewerRole r);
ReviewerRole reviewer_role_from_string(const std::string& s);
std::string to_string(JudgeMode m);
JudgeMode judge_mode_from_string(const std::string& s);

struct VcmConfig {
    int reviewer_max_rounds = 2;
    ReviewerRole reviewer_role = ReviewerRole::critic;
    JudgeMode judge_mode = JudgeMode::judge;
};

struct PipelineConfig {
    MvmConfig mvm;
    VcmConfig vcm;
    RetryPolicy retry;
    ModelParams model;
    std::string prompts_dir;     // empty = built-in templates
    std::string audit_log_dir;   // empty = no per-trajectory transcript
};

/// One Reviewer audit round. In the off role no backend call is made and the
/// issue list is empty; schema failures degrade to zero issues so the
/// pipeline still reaches the Judge.
ParsedReviewerOutput review(const Trajectory& trajectory,
                            const std::vector<MilestoneSet>& milestone_history,
                            const std::vector<std::vector<VerificationResult>>& verifications,
                            const std::vector<std::vector<ReviewerIssue>>& prior_issues,
                            const VcmConfig& config, const PromptLibrary& prompts,
                            Backend& backend, PipelineSession& session);

struct JudgeOutcome {
    bool verdict = false;
    std::string justification;
};

/// Final synthesis. The Judge prompt carries the complete deliberation
/// history, never just the last verification pass. In all_milestones_pass
/// mode the verdict is the conjunction of the final revision's verdicts and
/// no model call is made. Schema failures degrade to verdict 0.
JudgeOutcome judge(const Trajectory& trajectory,
                   const std::vector<MilestoneSet>& milestone_history,
                   const std::vector<std::vector<VerificationResult>>& verifications,
                   const std::vector<std::vector<ReviewerIssue>>& issues, const VcmConfig& config,
                   const PromptLibrary& prompts, Backend& backend, PipelineSession& session);

/// Full pipeline for one trajectory: run the milestone verification module,
/// loop Reviewer audits back into refinement while issues remain and round
/// budgets allow, then synthesize the binary reward. Always produces a
/// record unless the backend fails hard.
EvaluationRecord evaluate_trajectory(const Trajectory& trajectory, const PipelineConfig& config,
                                     Backend& backend, int run_index = 0,
                                     TranscriptLogger* transcript = nullptr);

}  // namespace themis
