#include "themis/vcm.hpp"

#include <filesystem>
#include <memory>

#include "themis/serialize.hpp"

namespace themis {

std::string to_string(ReviewerRole r) {
    switch (r) {
        case ReviewerRole::critic: return "critic";
        case ReviewerRole::advisor: return "advisor";
        case ReviewerRole::off: return "off";
    }
    return "critic";
}

ReviewerRole reviewer_role_from_string(const std::string& s) {
    if (s == "critic") return ReviewerRole::critic;
    if (s == "advisor") return ReviewerRole::advisor;
    if (s == "off") return ReviewerRole::off;
    throw SchemaError("reviewer_role", "expected critic|advisor|off, got '" + s + "'");
}

std::string to_string(JudgeMode m) {
    return m == JudgeMode::judge ? "judge" : "all_milestones_pass";
}

JudgeMode judge_mode_from_string(const std::string& s) {
    if (s == "judge") return JudgeMode::judge;
    if (s == "all_milestones_pass") return JudgeMode::all_milestones_pass;
    throw SchemaError("judge_mode", "expected judge|all_milestones_pass, got '" + s + "'");
}

ParsedReviewerOutput review(const Trajectory& trajectory,
                            const std::vector<MilestoneSet>& milestone_history,
                            const std::vector<std::vector<VerificationResult>>& verifications,
                            const std::vector<std::vector<ReviewerIssue>>& prior_issues,
                            const VcmConfig& config, const PromptLibrary& prompts,
                            Backend& backend, PipelineSession& session) {
    if (config.reviewer_role == ReviewerRole::off) return {};
    if (milestone_history.empty())
        throw Error("review requires at least one milestone verification pass");

    session.consume_reviewer_round();
    const auto& tmpl = prompts.get(config.reviewer_role == ReviewerRole::advisor
                                       ? "reviewer_advisor"
                                       : "reviewer_critic");
    std::map<std::string, std::string> context = {
        {"task_goal", trajectory.task.instruction},
        {"agent_history", agent_history_json(trajectory).dump(2)},
        {"milestone_report",
         milestone_report_json(milestone_history, verifications, prior_issues).dump(2)},
    };
    ChatRequest request = render(tmpl, context);

    const int step_count = trajectory.step_count();
    auto validator = [step_count](const ChatResponse& r) {
        try {
            parse_reviewer(r.text, step_count);
            return true;
        } catch (const ParseError&) {
            return false;
        }
    };
    ChatResponse response = session.call(backend, "reviewer", request, validator);
    if (!response.validated) {
        // Recall-preserving degradation: proceed to the Judge with no issues.
        session.note_degraded("reviewer_unvalidated");
        return {};
    }
    return parse_reviewer(response.text, step_count);
}

JudgeOutcome judge(const Trajectory& trajectory,
                   const std::vector<MilestoneSet>& milestone_history,
                   const std::vector<std::vector<VerificationResult>>& verifications,
                   const std::vector<std::vector<ReviewerIssue>>& issues, const VcmConfig& config,
                   const PromptLibrary& prompts, Backend& backend, PipelineSession& session) {
    if (config.judge_mode == JudgeMode::all_milestones_pass) {
        bool all_pass = true;
        if (!verifications.empty()) {
            for (const auto& v : verifications.back()) all_pass = all_pass && v.verdict;
        }
        return {all_pass, "conjunction of final milestone verdicts (judge disabled)"};
    }

    std::map<std::string, std::string> context = {
        {"task_goal", trajectory.task.instruction},
        {"trajectory_summary", trajectory_summary_text(trajectory)},
        {"deliberation", deliberation_json(milestone_history, verifications, issues).dump(2)},
    };
    ChatRequest request = render(prompts.get("judge"), context);

    auto validator = [](const ChatResponse& r) {
        try {
            parse_judge(r.text);
            return true;
        } catch (const ParseError&) {
            return false;
        }
    };
    ChatResponse response = session.call(backend, "judge", request, validator);
    if (!response.validated) {
        // Precision-preserving degradation: an unverifiable verdict scores 0.
        session.note_degraded("judge_unvalidated");
        return {false, "degraded: judge output remained invalid after retries"};
    }
    const ParsedJudgeOutput parsed = parse_judge(response.text);
    return {parsed.verdict, parsed.justification};
}

EvaluationRecord evaluate_trajectory(const Trajectory& trajectory, const PipelineConfig& config,
                                     Backend& backend, int run_index,
                                     TranscriptLogger* transcript) {
    trajectory.validate();
    const PromptLibrary prompts = config.prompts_dir.empty()
                                      ? PromptLibrary::builtin()
                                      : PromptLibrary::from_dir(config.prompts_dir);

    std::unique_ptr<TranscriptLogger> owned_transcript;
    if (!transcript && !config.audit_log_dir.empty()) {
        std::filesystem::create_directories(config.audit_log_dir);
        owned_transcript = std::make_unique<TranscriptLogger>(
            (std::filesystem::path(config.audit_log_dir) /
             (trajectory.task.task_id + ".jsonl"))
                .string());
        transcript = owned_transcript.get();
    }

    PipelineSession session(trajectory.task.task_id, config.mvm.selector_max_rounds,
                            config.vcm.reviewer_max_rounds, config.retry, config.model, run_index,
                            transcript);

    EvaluationRecord record;
    record.trajectory_id = trajectory.task.task_id;
    record.strategy = "themis";
    record.label = trajectory.label;

    MvmResult mvm = run_mvm(trajectory, nullptr, nullptr, config.mvm, prompts, backend, session);
    record.milestone_history.push_back(mvm.milestone_set);
    record.verifications.push_back(mvm.verifications);

    while (config.vcm.reviewer_role != ReviewerRole::off && session.reviewer_budget_left()) {
        ParsedReviewerOutput audit =
            review(trajectory, record.milestone_history, record.verifications, record.issues,
                   config.vcm, prompts, backend, session);
        record.issues.push_back(audit.issues);
        if (audit.issues.empty()) break;   // the Reviewer confirmed the decomposition is sound
        if (!session.reviewer_budget_left()) break;   // cap reached: refinement stops
        if (!session.selector_budget_left()) break;
        mvm = run_mvm(trajectory, &mvm, &audit.issues, config.mvm, prompts, backend, session);
        record.milestone_history.push_back(mvm.milestone_set);
        record.verifications.push_back(mvm.verifications);
    }

    JudgeOutcome outcome = judge(trajectory, record.milestone_history, record.verifications,
                                 record.issues, config.vcm, prompts, backend, session);
    record.verdict = outcome.verdict;
    record.justification = outcome.justification;
    record.rounds_used = {session.selector_rounds(), session.reviewer_rounds(), session.retries()};
    record.usage = session.usage();
    record.degraded = session.degraded();

    if (record.rounds_used.selector_rounds > config.mvm.selector_max_rounds ||
        record.rounds_used.reviewer_rounds > config.vcm.reviewer_max_rounds) {
        throw Error("round bound violated for trajectory " + record.trajectory_id);
    }
    return record;
}

}  // namespace themis
