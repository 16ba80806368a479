#pragma once

#include <optional>
#include <vector>

#include "themis/prompts.hpp"
#include "themis/session.hpp"
#include "themis/types.hpp"

namespace themis {

struct MvmConfig {
    int selector_max_rounds = 6;
    bool verify_all_steps = false;         // ablation: skip the Selector entirely
    bool use_assignment_goal = true;       // ablation: criterion falls back to description
    bool selector_sees_screenshots = false;
};

struct MvmResult {
    MilestoneSet milestone_set;
    std::vector<VerificationResult> verifications;   // one per milestone, in order
    int rounds_used = 0;                             // selector rounds consumed by this run
};

/// The pre/post screenshots for the step a milestone points at. The
/// post-state for the last step is the trajectory's final screenshot, or the
/// pre-state itself when no terminal frame exists (flagged so the Verifier's
/// notes record it).
struct StateTransition {
    ImageRef pre;
    ImageRef post;
    bool post_is_pre_fallback = false;
};
StateTransition resolve_transition(const Trajectory& trajectory, int step_index);

/// Proposes a milestone set, or refines `prior` to address `guidance`.
/// Invalid model output consumes retries, then falls back to the prior set
/// (or to a single terminal-step milestone whose criterion is the task
/// instruction itself, when no prior exists).
MilestoneSet select_milestones(const Trajectory& trajectory, const MilestoneSet* prior,
                               const std::vector<ReviewerIssue>* guidance, const MvmConfig& config,
                               const PromptLibrary& prompts, Backend& backend,
                               PipelineSession& session);

/// Verifies one milestone against its local state transition. Unresolvable
/// screenshots degrade to text-only verification with a warning in notes.
VerificationResult verify_milestone(const Trajectory& trajectory, const Milestone& milestone,
                                    std::size_t milestone_ref, const MvmConfig& config,
                                    const PromptLibrary& prompts, Backend& backend,
                                    PipelineSession& session);

/// Select (or refine) then verify, sequentially. With a prior result, only
/// milestones new or modified since the prior revision are re-verified;
/// unchanged ones keep their previous verdicts. In verify_all_steps mode
/// every step becomes a milestone and the Selector is never called.
MvmResult run_mvm(const Trajectory& trajectory, const MvmResult* prior,
                  const std::vector<ReviewerIssue>* guidance, const MvmConfig& config,
                  const PromptLibrary& prompts, Backend& backend, PipelineSession& session);

}  // namespace themis
