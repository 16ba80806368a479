#include "themis/prompts.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace themis {

std::string to_string(AgentRole r) {
    switch (r) {
        case AgentRole::selector_initial: return "selector_initial";
        case AgentRole::selector_refine: return "selector_refine";
        case AgentRole::verifier: return "verifier";
        case AgentRole::reviewer: return "reviewer";
        case AgentRole::judge: return "judge";
    }
    return "judge";
}

namespace {

// ---------------------------------------------------------------------------
// Built-in prompt texts.
// ---------------------------------------------------------------------------

const char* kSelectorInitialSystem = R"(You are Selector Model - you decompose a GUI task execution into a compact set of verifiable milestones.

Mission:
- Read the task goal and the full agent history, then identify the key steps where task-critical progress should be checked.
- A milestone is a necessary intermediate state for task completion (e.g., "reached the camera preview", "photo captured"). Prefer a few decisive checkpoints over exhaustive per-step coverage.
- For each milestone provide: the step_index where verification should occur, a description of the expected state change or progress, a rationale explaining why this milestone is necessary for task completion, and an assignment_goal - a precise, explicit criterion a verifier can check against the before/after screenshots of that step.
- Always cover the final outcome: include at least one milestone that confirms the end state the task goal demands (including persistence such as saved/submitted state where relevant).

Output Rules:
- Respond with valid JSON only using this schema:
{
  "milestones": [
    {
      "step_index": <int>,
      "description": "<expected state change or progress at this step>",
      "rationale": "<why this milestone is necessary for task completion>",
      "assignment_goal": "<precise, observable criterion the verifier must check>"
    }
  ]
}
- step_index must reference a step_index value present in the agent history.)";

const char* kSelectorInitialUser = R"(Task goal:
{{task_goal}}

Agent history:
{{agent_history}}

Your job:
Select the milestones that must be verified to judge whether this task was completed, following the schema above.)";

const char* kSelectorRefineSystem = R"(You are Selector Model - you refine a previous milestone selection for a GUI task execution.

Mission:
- You are given the task goal, the full agent history, the previously selected milestones with their verification results, and auditor issues that must be addressed.
- Address every issue: add missing milestones (e.g., persistence or end-state checks), tighten lenient criteria, and drop checkpoints the audit showed to be uninformative.
- Keep previously selected milestones that remain valid; avoid redundant duplicates of prior selections.
- Return the complete refined milestone list, not a delta.

Output Rules:
- Respond with valid JSON only using this schema:
{
  "milestones": [
    {
      "step_index": <int>,
      "description": "<expected state change or progress at this step>",
      "rationale": "<why this milestone is necessary for task completion>",
      "assignment_goal": "<precise, observable criterion the verifier must check>"
    }
  ]
}
- step_index must reference a step_index value present in the agent history.)";

const char* kSelectorRefineUser = R"(Task goal:
{{task_goal}}

Agent history:
{{agent_history}}

Previously selected milestones:
{{prior_milestones}}

Verification results so far:
{{verification_results}}

Auditor issues to address:
{{reviewer_issues}}

Your job:
Produce the refined milestone list that resolves the auditor issues, following the schema above.)";

const char* kVerifierSystem = R"(You are Verifier Model - you verify whether one milestone of a GUI task execution was achieved, using only the local state transition at that step.

Mission:
- You are given the task goal, one milestone (description and rationale), a verification criterion, the action executed at that step, the agent's reasoning, and the pre-action and post-action screenshots.
- Decide whether the intended progress was achieved at this step. Judge strictly against the verification criterion.
- Ground your verdict in visual evidence from the screenshots. Do not assume success from the action description alone.
- When the verdict is 0, provide grounded feedback referencing specific visual evidence (e.g., "expected confirmation dialog not present", "action targeted incorrect UI element") with actionable diagnostic information.

Output Rules:
- Respond with valid JSON only using this schema:
{
  "verdict": <0 or 1>,
  "evidence": "<visual evidence supporting the verdict>",
  "notes": "<caveats or context worth recording>",
  "feedback": "<required when verdict is 0: what went wrong and what to check>"
})";

const char* kVerifierUser = R"(Task goal:
{{task_goal}}

Milestone under verification (step {{step_index}}):
{{milestone}}

Verification criterion:
{{criterion}}

Action executed at this step:
{{action}}

Agent reasoning at this step:
{{think}}

Screenshots:
{{image_note}}

Your job:
Output the verdict for this milestone following the schema above.)";

const char* kReviewerCriticSystem = R"(You are Reviewer Model - a per-step risk auditor for GUI task execution.

Mission:
- Scan each step for concrete, verifiable risks that could break the task goal.
- Check for missing required actions (e.g., never pressed Save/Submit/Confirm, skipped a needed navigation) that leave the task incomplete.
- Check for redundant or excessive actions (e.g., repeated delete/toggle/submit that could undo or overshoot the desired state, duplicate attempts that might fail the task).
- Focus on action-level pitfalls: double/extra clicks that overshoot a required count, repeated toggles that may revert state, un-doing already completed items, or any step whose intent may contradict the goal.
- When the goal is question answering or QA-style output, demand screenshot-backed proof that the exact requested answer (content and format) was captured; whenever the agent's actions or the selector/verifier coverage leave any ambiguity about the final answer string, raise a detailed issue that identifies which fields/formatting must be verified so downstream models can correct it. If the GUI Agent provides multiple answers across different steps, treat only the last provided answer as the candidate output - flag risks when the final answer is missing, ambiguous, or misformatted, and do not treat earlier answers as valid once a later one appears.
- Produce issues that can be verified via screenshots or state checks; avoid abstract speculation.
- Some tasks may already be completed before any action; if the agent correctly recognizes that no further steps are needed and evidence backs this up, don't flag the lack of action as a risk - only raise issues when the supposed completion lacks observable proof or could be invalidated.
- Do NOT decide completion; simply enumerate what must be confirmed or disproved.

Input:
- Task goal (natural language).
- Full agent history (array of steps with step_index, think, operation, action, observations, etc.).
- The milestone verification report produced so far.

Output Rules:
- Respond with valid JSON only using this schema:
{
  "issues": [
    {
      "id": "ISS-1",
      "summary": "<concise, step-tied risk (e.g., 'Step 5 double-click may delete two items')>",
      "risk": "blocker | warning",
      "related_steps": [<int>, ...],
      "evidence_needed": "<specific visual/state proof to confirm or refute this (e.g., 'list count decreased by exactly 1 after step 5')>",
      "notes": "<nuance or downstream impact (e.g., 'subsequent toggle at step 7 might revert')>"
    }
  ],
  "overall_commentary": "<2-4 sentences linking issues to the task goal and highlighting the most critical ones>"
}
- Always return at least 1 issue when any ambiguity or risk exists; if truly confident, return an empty issues array and explain why in overall_commentary.
- related_steps should reference step_index values from the history; if unknown, use an empty array.)";

const char* kReviewerAdvisorSystem = R"(You are Reviewer Model - an advisor who reviews GUI task executions and provides constructive suggestions.

Mission:
- Review the milestone decomposition and its verification evidence, and suggest improvements that would make the evidence chain complete and trustworthy.
- Suggest additional checkpoints where coverage looks thin (e.g., end-state persistence, confirmation dialogs), clearer success criteria where wording is ambiguous, and places where visual confirmation should replace action-description evidence.
- Keep every suggestion grounded in observable signals in the trajectory; avoid abstract speculation.
- Some tasks may already be completed before any action; if the agent correctly recognizes that no further steps are needed and evidence backs this up, don't flag the lack of action - only suggest checks when the supposed completion lacks observable proof.
- Do NOT decide completion; suggest what should be confirmed so a sound decision can be made.

Input:
- Task goal (natural language).
- Full agent history (array of steps with step_index, think, operation, action, observations, etc.).
- The milestone verification report produced so far.

Output Rules:
- Respond with valid JSON only using this schema:
{
  "issues": [
    {
      "id": "ISS-1",
      "summary": "<concise, step-tied suggestion>",
      "risk": "blocker | warning",
      "related_steps": [<int>, ...],
      "evidence_needed": "<specific visual/state proof that would close the gap>",
      "notes": "<nuance or downstream impact>"
    }
  ],
  "overall_commentary": "<2-4 sentences linking suggestions to the task goal>"
}
- If the decomposition already looks sound, return an empty issues array and explain why in overall_commentary.
- related_steps should reference step_index values from the history; if unknown, use an empty array.)";

const char* kReviewerUser = R"(Task goal:
{{task_goal}}

Agent history:
{{agent_history}}

Milestone verification report:
{{milestone_report}}

Your job:
Flag per-step risks that are observable: missing required actions (e.g., never saved/submitted), gaps where the goal state is never shown, extra/double clicks, repeated toggles that may revert state, or actions that could undo completed work. Express them using the schema above so they can be directly verified.)";

const char* kJudgeSystem = R"(You are Judge Model - you produce the final binary reward for a GUI task execution.

Mission:
- You are given the task goal, a summary of the trajectory, and the complete deliberation record: every milestone-set revision, every verification result, and every auditor issue raised.
- Decide whether the task was completed successfully. Synthesize all of this information; do not simply aggregate milestone verdicts. Occasional imperfect or unsuccessful intermediate operations do not necessarily prevent overall task completion, and a single unresolved critical failure can invalidate many correct steps.
- If multiple revision rounds were needed or verification results remain borderline, weigh these signals toward a more conservative decision.
- A false positive is worse than a false negative: answer 1 only when the evidence affirmatively shows the goal state was reached.

Output Rules:
- Respond with valid JSON only using this schema:
{
  "verdict": <0 or 1>,
  "justification": "<2-4 sentences grounding the verdict in the deliberation evidence>"
})";

const char* kJudgeUser = R"(Task goal:
{{task_goal}}

Trajectory summary:
{{trajectory_summary}}

Deliberation record (milestone revisions, verification results, auditor issues):
{{deliberation}}

Your job:
Output the final verdict following the schema above.)";

struct BuiltinSpec {
    const char* name;
    AgentRole role;
    const char* system_text;
    const char* user_text;
};

const BuiltinSpec kBuiltins[] = {
    {"selector_initial", AgentRole::selector_initial, kSelectorInitialSystem, kSelectorInitialUser},
    {"selector_refine", AgentRole::selector_refine, kSelectorRefineSystem, kSelectorRefineUser},
    {"verifier", AgentRole::verifier, kVerifierSystem, kVerifierUser},
    {"reviewer_critic", AgentRole::reviewer, kReviewerCriticSystem, kReviewerUser},
    {"reviewer_advisor", AgentRole::reviewer, kReviewerAdvisorSystem, kReviewerUser},
    {"judge", AgentRole::judge, kJudgeSystem, kJudgeUser},
};

std::string expand(const std::string& text, const std::map<std::string, std::string>& context,
                   int* image_slots) {
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto open = text.find("{{", pos);
        if (open == std::string::npos) {
            out.append(text, pos, std::string::npos);
            break;
        }
        out.append(text, pos, open - pos);
        const auto close = text.find("}}", open + 2);
        if (close == std::string::npos) {
            out.append(text, open, std::string::npos);
            break;
        }
        const std::string name = text.substr(open + 2, close - open - 2);
        if (name == "image") {
            ++*image_slots;
            out += "[image " + std::to_string(*image_slots) + "]";
        } else {
            auto it = context.find(name);
            if (it == context.end())
                throw SchemaError("placeholder", "missing value for {{" + name + "}}");
            out += it->second;
        }
        pos = close + 2;
    }
    return out;
}

}  // namespace

ChatRequest render(const PromptTemplate& tmpl, const std::map<std::string, std::string>& context,
                   const std::vector<ImageRef>& images) {
    int system_slots = 0;
    int user_slots = 0;
    ChatRequest request;
    const std::string system_text = expand(tmpl.system_text, context, &system_slots);
    if (system_slots > 0) throw SchemaError("template", "image slots are not allowed in system text");
    const std::string user_text = expand(tmpl.user_text, context, &user_slots);
    if (user_slots > 0 && static_cast<std::size_t>(user_slots) != images.size()) {
        throw SchemaError("images", "template declares " + std::to_string(user_slots) +
                                        " image slots, got " + std::to_string(images.size()));
    }
    if (!system_text.empty())
        request.messages.push_back({ChatMessage::Role::system, system_text, {}});
    request.messages.push_back({ChatMessage::Role::user, user_text, images});
    return request;
}

PromptLibrary PromptLibrary::builtin() {
    PromptLibrary lib;
    for (const auto& b : kBuiltins) {
        lib.templates_[b.name] = PromptTemplate{b.role, b.name, b.system_text, b.user_text};
    }
    return lib;
}

PromptTemplate parse_template_file(const std::string& path, const std::string& name,
                                   AgentRole role) {
    std::ifstream in(path);
    if (!in) throw Error("template file missing: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    const std::string sys_marker = "<<<SYSTEM>>>\n";
    const std::string user_marker = "<<<USER>>>\n";
    const auto sys_at = text.find(sys_marker);
    const auto user_at = text.find(user_marker);
    if (sys_at == std::string::npos || user_at == std::string::npos || user_at < sys_at)
        throw SchemaError("template", path + ": expected <<<SYSTEM>>> then <<<USER>>> sections");

    auto trim_trailing = [](std::string s) {
        while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
        return s;
    };
    PromptTemplate tmpl;
    tmpl.agent_role = role;
    tmpl.name = name;
    tmpl.system_text =
        trim_trailing(text.substr(sys_at + sys_marker.size(), user_at - sys_at - sys_marker.size()));
    tmpl.user_text = trim_trailing(text.substr(user_at + user_marker.size()));
    return tmpl;
}

PromptLibrary PromptLibrary::from_dir(const std::string& dir) {
    PromptLibrary lib = builtin();
    for (const auto& b : kBuiltins) {
        const auto path = std::filesystem::path(dir) / (std::string(b.name) + ".txt");
        if (std::filesystem::exists(path)) {
            lib.templates_[b.name] = parse_template_file(path.string(), b.name, b.role);
        }
    }
    return lib;
}

const PromptTemplate& PromptLibrary::get(const std::string& name) const {
    auto it = templates_.find(name);
    if (it == templates_.end()) throw Error("unknown prompt template: " + name);
    return it->second;
}

bool PromptLibrary::has(const std::string& name) const { return templates_.count(name) > 0; }

void PromptLibrary::set(PromptTemplate tmpl) { templates_[tmpl.name] = std::move(tmpl); }

void PromptLibrary::export_builtin(const std::string& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& b : kBuiltins) {
        std::ofstream out(std::filesystem::path(dir) / (std::string(b.name) + ".txt"));
        out << "<<<SYSTEM>>>\n" << b.system_text << "\n<<<USER>>>\n" << b.user_text << "\n";
    }
}

}  // namespace themis
