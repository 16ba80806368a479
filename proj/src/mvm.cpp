#include "themis/mvm.hpp"

#include <filesystem>

#include "themis/parsing.hpp"
#include "themis/serialize.hpp"

namespace themis {

namespace {

bool image_available(const ImageRef& r) {
    switch (r.kind) {
        case ImageRef::Kind::inline_b64: return true;
        case ImageRef::Kind::path: return std::filesystem::exists(r.value);
        case ImageRef::Kind::missing: return false;
    }
    return false;
}

MilestoneSet fallback_set(const Trajectory& trajectory, int revision) {
    Milestone m;
    m.step_index = trajectory.step_count() - 1;
    m.description = "Final state satisfies the task goal";
    m.rationale = "selector unavailable; degraded to a whole-trajectory terminal check";
    m.assignment_goal = trajectory.task.instruction;
    MilestoneSet set;
    set.milestones = {std::move(m)};
    set.revision = revision;
    return set;
}

std::vector<ImageRef> selector_images(const Trajectory& trajectory) {
    std::vector<ImageRef> images;
    for (const auto& s : trajectory.steps) {
        if (image_available(s.screenshot)) images.push_back(s.screenshot);
    }
    return images;
}

}  // namespace

StateTransition resolve_transition(const Trajectory& trajectory, int step_index) {
    StateTransition tr;
    tr.pre = trajectory.steps[step_index].screenshot;
    if (step_index + 1 < trajectory.step_count()) {
        tr.post = trajectory.steps[step_index + 1].screenshot;
    } else if (trajectory.final_screenshot) {
        tr.post = *trajectory.final_screenshot;
    } else {
        tr.post = tr.pre;
        tr.post_is_pre_fallback = true;
    }
    return tr;
}

MilestoneSet select_milestones(const Trajectory& trajectory, const MilestoneSet* prior,
                               const std::vector<ReviewerIssue>* guidance, const MvmConfig& config,
                               const PromptLibrary& prompts, Backend& backend,
                               PipelineSession& session) {
    const int next_revision = prior ? prior->revision + 1 : 0;
    if (!session.selector_budget_left()) {
        session.note_degraded("selector_budget_exhausted");
        return prior ? *prior : fallback_set(trajectory, next_revision);
    }
    session.consume_selector_round();

    const bool refining = prior != nullptr;
    const auto& tmpl = prompts.get(refining ? "selector_refine" : "selector_initial");
    std::map<std::string, std::string> context = {
        {"task_goal", trajectory.task.instruction},
        {"agent_history", agent_history_json(trajectory).dump(2)},
    };
    if (refining) {
        context["prior_milestones"] = json(*prior).dump(2);
        context["verification_results"] = "(carried in the audit issues below)";
        json issues = json::array();
        if (guidance) {
            // Issues are forwarded verbatim so the evidence chain stays auditable.
            for (const auto& i : *guidance) issues.push_back(i);
        }
        context["reviewer_issues"] = issues.dump(2);
    }
    std::vector<ImageRef> images;
    if (config.selector_sees_screenshots) images = selector_images(trajectory);
    ChatRequest request = render(tmpl, context, images);

    const int step_count = trajectory.step_count();
    auto validator = [step_count](const ChatResponse& r) {
        try {
            parse_selector(r.text, step_count);
            return true;
        } catch (const ParseError&) {
            return false;
        }
    };
    ChatResponse response =
        session.call(backend, refining ? "selector_refine" : "selector_initial", request, validator);
    if (!response.validated) {
        if (prior) {
            session.note_degraded("selector_refine_failed");
            return *prior;
        }
        session.note_degraded("selector_fallback");
        return fallback_set(trajectory, next_revision);
    }

    MilestoneSet set;
    set.milestones = parse_selector(response.text, step_count).milestones;
    set.revision = next_revision;
    set.normalize();
    set.validate(step_count);
    return set;
}

VerificationResult verify_milestone(const Trajectory& trajectory, const Milestone& milestone,
                                    std::size_t milestone_ref, const MvmConfig& config,
                                    const PromptLibrary& prompts, Backend& backend,
                                    PipelineSession& session) {
    const StateTransition tr = resolve_transition(trajectory, milestone.step_index);
    const Step& step = trajectory.steps[milestone.step_index];

    std::vector<ImageRef> images;
    std::string image_note;
    std::string degrade_note;
    const bool pre_ok = image_available(tr.pre);
    const bool post_ok = image_available(tr.post);
    if (pre_ok && post_ok) {
        images = {tr.pre, tr.post};
        image_note = "Two screenshots attached: the state before the action, then the state after.";
    } else if (pre_ok || post_ok) {
        images = {pre_ok ? tr.pre : tr.post};
        image_note = pre_ok ? "Only the pre-action screenshot is attached; the post-action state "
                              "is unavailable."
                            : "Only the post-action screenshot is attached; the pre-action state "
                              "is unavailable.";
        degrade_note = "partial screenshot evidence; verification degraded";
    } else {
        image_note = "No screenshots are available; verify from the textual record only.";
        degrade_note = "no screenshot evidence; text-only verification";
    }
    if (tr.post_is_pre_fallback) {
        degrade_note += degrade_note.empty() ? "" : "; ";
        degrade_note += "no successor screenshot; pre-action state reused as post-state";
    }

    const std::string criterion = (config.use_assignment_goal && !milestone.assignment_goal.empty())
                                      ? milestone.assignment_goal
                                      : milestone.description;
    std::map<std::string, std::string> context = {
        {"task_goal", trajectory.task.instruction},
        {"step_index", std::to_string(milestone.step_index)},
        {"milestone",
         json{{"description", milestone.description}, {"rationale", milestone.rationale}}.dump(2)},
        {"criterion", criterion},
        {"action", step.action},
        {"think", step.think.empty() ? "(none)" : step.think},
        {"image_note", image_note},
    };
    ChatRequest request = render(prompts.get("verifier"), context, images);

    auto validator = [](const ChatResponse& r) {
        try {
            parse_verifier(r.text);
            return true;
        } catch (const ParseError&) {
            return false;
        }
    };
    ChatResponse response = session.call(backend, "verifier", request, validator);

    VerificationResult result;
    result.milestone_ref = milestone_ref;
    if (!response.validated) {
        session.note_degraded("verifier_unvalidated");
        result.verdict = false;
        result.feedback = "verifier output remained invalid after retries";
        result.notes = "degraded: unvalidated verifier response";
    } else {
        const ParsedVerifierOutput parsed = parse_verifier(response.text);
        result.verdict = parsed.verdict;
        result.evidence = parsed.evidence;
        result.feedback = parsed.feedback;
        result.notes = parsed.notes;
    }
    if (!degrade_note.empty()) {
        if (!result.notes.empty()) result.notes += " | ";
        result.notes += degrade_note;
    }
    return result;
}

namespace {

MilestoneSet all_steps_set(const Trajectory& trajectory, int revision) {
    MilestoneSet set;
    set.revision = revision;
    for (const auto& s : trajectory.steps) {
        Milestone m;
        m.step_index = s.index;
        m.description = "Step " + std::to_string(s.index) + " (" +
                        (s.action.empty() ? "no action" : s.action) + ") achieves its intended effect";
        m.rationale = "exhaustive per-step verification (selector disabled)";
        m.assignment_goal = m.description;
        set.milestones.push_back(std::move(m));
    }
    return set;
}

const VerificationResult* find_prior_result(const MvmResult& prior, const Milestone& m) {
    for (const auto& v : prior.verifications) {
        if (v.milestone_ref >= prior.milestone_set.milestones.size()) continue;
        const Milestone& pm = prior.milestone_set.milestones[v.milestone_ref];
        if (pm.step_index == m.step_index && pm.assignment_goal == m.assignment_goal) return &v;
    }
    return nullptr;
}

}  // namespace

MvmResult run_mvm(const Trajectory& trajectory, const MvmResult* prior,
                  const std::vector<ReviewerIssue>* guidance, const MvmConfig& config,
                  const PromptLibrary& prompts, Backend& backend, PipelineSession& session) {
    MvmResult result;
    const int rounds_before = session.selector_rounds();
    if (config.verify_all_steps) {
        result.milestone_set =
            all_steps_set(trajectory, prior ? prior->milestone_set.revision + 1 : 0);
    } else {
        result.milestone_set =
            select_milestones(trajectory, prior ? &prior->milestone_set : nullptr, guidance,
                              config, prompts, backend, session);
    }
    result.rounds_used = session.selector_rounds() - rounds_before;

    for (std::size_t i = 0; i < result.milestone_set.milestones.size(); ++i) {
        const Milestone& m = result.milestone_set.milestones[i];
        if (prior) {
            if (const VerificationResult* reused = find_prior_result(*prior, m)) {
                VerificationResult copy = *reused;
                copy.milestone_ref = i;
                result.verifications.push_back(std::move(copy));
                continue;
            }
        }
        result.verifications.push_back(
            verify_milestone(trajectory, m, i, config, prompts, backend, session));
    }
    return result;
}

}  // namespace themis
