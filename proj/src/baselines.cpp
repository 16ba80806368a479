#include "themis/baselines.hpp"

#include <filesystem>

#include "themis/mvm.hpp"
#include "themis/serialize.hpp"

namespace themis {

namespace {

const char* kZeroGuiSystem =
    "You are an evaluator for GUI task executions. You are given the task goal and the final "
    "screenshots of the interaction. Decide whether the task was completed successfully based on "
    "what the final states show.\n\n"
    "Output Rules:\n"
    "- Respond with valid JSON only using this schema:\n"
    "{\n  \"verdict\": <0 or 1>,\n  \"justification\": \"<grounding in the final screenshots>\"\n}";

const char* kDigirlSystem =
    "You are an evaluator for GUI task executions. You are given the task goal and one observed "
    "state. Decide whether this state already satisfies the goal.\n\n"
    "Output Rules:\n"
    "- Respond with valid JSON only using this schema:\n"
    "{\n  \"verdict\": <0 or 1>,\n  \"justification\": \"<grounding in the state>\"\n}";

bool image_available(const ImageRef& r) {
    switch (r.kind) {
        case ImageRef::Kind::inline_b64: return true;
        case ImageRef::Kind::path: return std::filesystem::exists(r.value);
        case ImageRef::Kind::missing: return false;
    }
    return false;
}

ResponseValidator judge_validator() {
    return [](const ChatResponse& r) {
        try {
            parse_judge(r.text);
            return true;
        } catch (const ParseError&) {
            return false;
        }
    };
}

EvaluationRecord base_record(const Trajectory& trajectory, std::string strategy) {
    EvaluationRecord record;
    record.trajectory_id = trajectory.task.task_id;
    record.strategy = std::move(strategy);
    record.label = trajectory.label;
    return record;
}

void finish_record(EvaluationRecord& record, const PipelineSession& session) {
    record.rounds_used = {0, 0, session.retries()};
    record.usage = session.usage();
    record.degraded = session.degraded();
}

}  // namespace

EvaluationRecord evaluate_zerogui(const Trajectory& trajectory, int last_k, Backend& backend,
                                  const PipelineConfig& config, int run_index) {
    trajectory.validate();
    if (last_k < 1) throw SchemaError("last_k", "must be >= 1");

    // The frame sequence is every step screenshot plus the terminal frame.
    std::vector<ImageRef> frames;
    for (const auto& s : trajectory.steps) {
        if (image_available(s.screenshot)) frames.push_back(s.screenshot);
    }
    if (trajectory.final_screenshot && image_available(*trajectory.final_screenshot))
        frames.push_back(*trajectory.final_screenshot);
    if (frames.size() > static_cast<std::size_t>(last_k))
        frames.erase(frames.begin(), frames.end() - last_k);

    PipelineSession session(trajectory.task.task_id, 0, 0, config.retry, config.model, run_index);
    ChatRequest request;
    request.messages.push_back({ChatMessage::Role::system, kZeroGuiSystem, {}});
    request.messages.push_back(
        {ChatMessage::Role::user,
         "Task goal:\n" + trajectory.task.instruction + "\n\nFinal screenshots (" +
             std::to_string(frames.size()) + ", oldest first) are attached.",
         frames});

    EvaluationRecord record = base_record(trajectory, "zerogui");
    ChatResponse response = session.call(backend, "zerogui", request, judge_validator());
    if (!response.validated) {
        session.note_degraded("zerogui_unvalidated");
        record.verdict = false;
        record.justification = "degraded: evaluator output remained invalid after retries";
    } else {
        const ParsedJudgeOutput parsed = parse_judge(response.text);
        record.verdict = parsed.verdict;
        record.justification = parsed.justification;
    }
    finish_record(record, session);
    return record;
}

EvaluationRecord evaluate_digirl(const Trajectory& trajectory, Backend& backend,
                                 const PipelineConfig& config, int run_index) {
    trajectory.validate();
    PipelineSession session(trajectory.task.task_id, 0, 0, config.retry, config.model, run_index);
    EvaluationRecord record = base_record(trajectory, "digirl");

    record.verdict = false;
    record.justification = "no state satisfied the goal before the trajectory terminated";
    for (int t = 0; t < trajectory.step_count(); ++t) {
        const StateTransition tr = resolve_transition(trajectory, t);
        std::vector<ImageRef> images;
        if (image_available(tr.post)) images.push_back(tr.post);

        ChatRequest request;
        request.messages.push_back({ChatMessage::Role::system, kDigirlSystem, {}});
        request.messages.push_back(
            {ChatMessage::Role::user,
             "Task goal:\n" + trajectory.task.instruction + "\n\nObserved state after step " +
                 std::to_string(t) + (images.empty() ? " (screenshot unavailable; use the action record)"
                                                     : " is attached.") +
                 "\nAction at this step: " + trajectory.steps[t].action,
             images});
        ChatResponse response = session.call(backend, "digirl", request, judge_validator());
        if (!response.validated) {
            session.note_degraded("digirl_unvalidated_step_" + std::to_string(t));
            continue;   // an unreadable answer never counts as goal satisfaction
        }
        const ParsedJudgeOutput parsed = parse_judge(response.text);
        if (parsed.verdict) {
            record.verdict = true;
            record.justification = "goal satisfied at step " + std::to_string(t) +
                                   (parsed.justification.empty() ? "" : ": " + parsed.justification);
            break;
        }
    }
    finish_record(record, session);
    return record;
}

std::string CriticStrategy::describe() const {
    switch (kind) {
        case Kind::themis: return "themis";
        case Kind::zerogui: return "zerogui(last_k=" + std::to_string(last_k) + ")";
        case Kind::digirl: return "digirl";
    }
    return "themis";
}

CriticStrategy CriticStrategy::themis(PipelineConfig config) {
    return {Kind::themis, std::move(config), 2};
}

CriticStrategy CriticStrategy::zerogui(int last_k, PipelineConfig config) {
    if (last_k < 1) throw SchemaError("last_k", "must be >= 1");
    return {Kind::zerogui, std::move(config), last_k};
}

CriticStrategy CriticStrategy::digirl(PipelineConfig config) {
    return {Kind::digirl, std::move(config), 2};
}

CriticStrategy CriticStrategy::parse(const std::string& name, const PipelineConfig& config) {
    if (name == "themis") return themis(config);
    if (name == "digirl") return digirl(config);
    if (name == "zerogui") return zerogui(2, config);
    if (name.rfind("zerogui:", 0) == 0) return zerogui(std::stoi(name.substr(8)), config);
    throw SchemaError("strategy", "expected themis|zerogui[:K]|digirl, got '" + name + "'");
}

EvaluationRecord evaluate_with_strategy(const Trajectory& trajectory,
                                        const CriticStrategy& strategy, Backend& backend,
                                        int run_index) {
    switch (strategy.kind) {
        case CriticStrategy::Kind::themis:
            return evaluate_trajectory(trajectory, strategy.themis_config, backend, run_index);
        case CriticStrategy::Kind::zerogui:
            return evaluate_zerogui(trajectory, strategy.last_k, backend, strategy.themis_config,
                                    run_index);
        case CriticStrategy::Kind::digirl:
            return evaluate_digirl(trajectory, backend, strategy.themis_config, run_index);
    }
    throw Error("invalid strategy kind");
}

}  // namespace themis
