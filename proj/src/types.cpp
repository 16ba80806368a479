#include "themis/types.hpp"

#include <algorithm>
#include <set>

#include "themis/errors.hpp"

namespace themis {

std::string to_string(Platform p) {
    switch (p) {
        case Platform::ubuntu: return "ubuntu";
        case Platform::android: return "android";
        case Platform::windows: return "windows";
        case Platform::macos: return "macos";
        case Platform::web: return "web";
        case Platform::other: return "other";
    }
    return "other";
}

Platform platform_from_string(const std::string& s) {
    if (s == "ubuntu") return Platform::ubuntu;
    if (s == "android") return Platform::android;
    if (s == "windows") return Platform::windows;
    if (s == "macos") return Platform::macos;
    if (s == "web") return Platform::web;
    if (s == "other") return Platform::other;
    throw SchemaError("platform", "unknown platform '" + s + "'");
}

ImageRef ImageRef::from_path(std::string p) {
    ImageRef r;
    r.kind = Kind::path;
    r.value = std::move(p);
    return r;
}

ImageRef ImageRef::from_base64(std::string b64, std::string media_type) {
    ImageRef r;
    r.kind = Kind::inline_b64;
    r.value = std::move(b64);
    r.media_type = std::move(media_type);
    return r;
}

ImageRef ImageRef::none() { return ImageRef{}; }

void Trajectory::validate() const {
    if (task.instruction.empty()) throw SchemaError("instruction", "must be non-empty");
    if (steps.empty()) throw SchemaError("steps", "must be non-empty");
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (steps[i].index != static_cast<int>(i)) {
            throw SchemaError("steps[" + std::to_string(i) + "].index",
                              "expected " + std::to_string(i) + ", got " +
                                  std::to_string(steps[i].index));
        }
    }
}

void MilestoneSet::normalize() {
    std::stable_sort(milestones.begin(), milestones.end(),
                     [](const Milestone& a, const Milestone& b) {
                         return a.step_index < b.step_index;
                     });
    std::set<std::pair<int, std::string>> seen;
    std::vector<Milestone> kept;
    kept.reserve(milestones.size());
    for (auto& m : milestones) {
        if (seen.insert({m.step_index, m.assignment_goal}).second) {
            kept.push_back(std::move(m));
        }
    }
    milestones = std::move(kept);
}

void MilestoneSet::validate(int step_count) const {
    int prev = -1;
    for (std::size_t i = 0; i < milestones.size(); ++i) {
        const auto& m = milestones[i];
        const std::string where = "milestones[" + std::to_string(i) + "]";
        if (m.step_index < 0 || m.step_index >= step_count) {
            throw SchemaError(where + ".step_index", "out of range [0, " +
                                                         std::to_string(step_count) + ")");
        }
        if (m.step_index < prev) throw SchemaError(where + ".step_index", "not non-decreasing");
        if (m.description.empty()) throw SchemaError(where + ".description", "must be non-empty");
        if (m.assignment_goal.empty())
            throw SchemaError(where + ".assignment_goal", "must be non-empty");
        prev = m.step_index;
    }
}

UsageStats& UsageStats::operator+=(const UsageStats& o) {
    prompt_tokens += o.prompt_tokens;
    completion_tokens += o.completion_tokens;
    calls += o.calls;
    wall_latency += o.wall_latency;
    return *this;
}

void to_json(json& j, const ImageRef& r) {
    switch (r.kind) {
        case ImageRef::Kind::path:
            j = r.value;
            break;
        case ImageRef::Kind::inline_b64:
            j = json{{"base64", r.value}, {"media_type", r.media_type}};
            break;
        case ImageRef::Kind::missing:
            j = nullptr;
            break;
    }
}

void from_json(const json& j, ImageRef& r) {
    if (j.is_null()) {
        r = ImageRef::none();
    } else if (j.is_string()) {
        r = ImageRef::from_path(j.get<std::string>());
    } else if (j.is_object()) {
        if (!j.contains("base64") || !j["base64"].is_string())
            throw SchemaError("screenshot.base64", "inline screenshot requires a base64 string");
        r = ImageRef::from_base64(j["base64"].get<std::string>(),
                                  j.value("media_type", std::string("image/png")));
    } else {
        throw SchemaError("screenshot", "expected string path, inline object, or null");
    }
}

void to_json(json& j, const Step& s) {
    j = json{{"index", s.index},
             {"screenshot", s.screenshot},
             {"think", s.think},
             {"action", s.action},
             {"metadata", s.metadata}};
}

void to_json(json& j, const Trajectory& t) {
    j = json{{"task_id", t.task.task_id},
             {"instruction", t.task.instruction},
             {"platform", to_string(t.task.platform)},
             {"steps", t.steps}};
    if (t.final_screenshot) j["final_screenshot"] = *t.final_screenshot;
    if (t.label) j["label"] = *t.label;
    if (!t.agent_model.empty()) j["agent_model"] = t.agent_model;
}

void to_json(json& j, const Milestone& m) {
    j = json{{"step_index", m.step_index},
             {"description", m.description},
             {"rationale", m.rationale},
             {"assignment_goal", m.assignment_goal}};
}

void from_json(const json& j, Milestone& m) {
    if (!j.contains("step_index") || !j["step_index"].is_number_integer())
        throw SchemaError("milestone.step_index", "required integer");
    m.step_index = j["step_index"].get<int>();
    m.description = j.value("description", std::string());
    m.rationale = j.value("rationale", std::string());
    m.assignment_goal = j.value("assignment_goal", std::string());
}

void to_json(json& j, const MilestoneSet& s) {
    j = json{{"revision", s.revision}, {"milestones", s.milestones}};
}

void from_json(const json& j, MilestoneSet& s) {
    s.revision = j.value("revision", 0);
    s.milestones = j.value("milestones", std::vector<Milestone>{});
}

void to_json(json& j, const VerificationResult& v) {
    j = json{{"milestone_ref", v.milestone_ref},
             {"verdict", v.verdict ? 1 : 0},
             {"evidence", v.evidence},
             {"feedback", v.feedback},
             {"notes", v.notes}};
}

void from_json(const json& j, VerificationResult& v) {
    v.milestone_ref = j.value("milestone_ref", std::size_t{0});
    v.verdict = j.value("verdict", 0) != 0;
    v.evidence = j.value("evidence", std::string());
    v.feedback = j.value("feedback", std::string());
    v.notes = j.value("notes", std::string());
}

void to_json(json& j, const ReviewerIssue& i) {
    j = json{{"id", i.id},
             {"summary", i.summary},
             {"risk", to_string(i.risk)},
             {"related_steps", i.related_steps},
             {"evidence_needed", i.evidence_needed},
             {"notes", i.notes}};
}

void from_json(const json& j, ReviewerIssue& i) {
    i.id = j.value("id", std::string());
    i.summary = j.value("summary", std::string());
    i.risk = issue_risk_from_string(j.value("risk", std::string("warning")));
    i.related_steps = j.value("related_steps", std::vector<int>{});
    i.evidence_needed = j.value("evidence_needed", std::string());
    i.notes = j.value("notes", std::string());
}

std::string to_string(IssueRisk r) { return r == IssueRisk::blocker ? "blocker" : "warning"; }

IssueRisk issue_risk_from_string(const std::string& s) {
    if (s == "blocker") return IssueRisk::blocker;
    if (s == "warning") return IssueRisk::warning;
    throw SchemaError("risk", "expected 'blocker' or 'warning', got '" + s + "'");
}

void to_json(json& j, const UsageStats& u) {
    j = json{{"prompt_tokens", u.prompt_tokens},
             {"completion_tokens", u.completion_tokens},
             {"calls", u.calls},
             {"wall_latency", u.wall_latency}};
}

void from_json(const json& j, UsageStats& u) {
    u.prompt_tokens = j.value("prompt_tokens", std::int64_t{0});
    u.completion_tokens = j.value("completion_tokens", std::int64_t{0});
    u.calls = j.value("calls", std::int64_t{0});
    u.wall_latency = j.value("wall_latency", 0.0);
}

void to_json(json& j, const EvaluationRecord& r) {
    j = json{{"trajectory_id", r.trajectory_id},
             {"strategy", r.strategy},
             {"milestone_history", r.milestone_history},
             {"verifications", r.verifications},
             {"issues", r.issues},
             {"verdict", r.verdict ? 1 : 0},
             {"justification", r.justification},
             {"rounds_used",
              json{{"selector_rounds", r.rounds_used.selector_rounds},
                   {"reviewer_rounds", r.rounds_used.reviewer_rounds},
                   {"retries", r.rounds_used.retries}}},
             {"usage", r.usage},
             {"degraded", r.degraded}};
    if (!r.sub_verdicts.empty()) j["sub_verdicts"] = r.sub_verdicts;
    if (r.label) j["label"] = *r.label;
}

void from_json(const json& j, EvaluationRecord& r) {
    r.trajectory_id = j.value("trajectory_id", std::string());
    r.strategy = j.value("strategy", std::string("themis"));
    r.milestone_history = j.value("milestone_history", std::vector<MilestoneSet>{});
    r.verifications = j.value("verifications", std::vector<std::vector<VerificationResult>>{});
    r.issues = j.value("issues", std::vector<std::vector<ReviewerIssue>>{});
    r.verdict = j.value("verdict", 0) != 0;
    r.justification = j.value("justification", std::string());
    if (j.contains("rounds_used")) {
        const auto& ru = j["rounds_used"];
        r.rounds_used.selector_rounds = ru.value("selector_rounds", 0);
        r.rounds_used.reviewer_rounds = ru.value("reviewer_rounds", 0);
        r.rounds_used.retries = ru.value("retries", 0);
    }
    r.usage = j.value("usage", UsageStats{});
    r.degraded = j.value("degraded", std::vector<std::string>{});
    r.sub_verdicts = j.value("sub_verdicts", std::vector<int>{});
    if (j.contains("label") && !j["label"].is_null()) r.label = j["label"].get<bool>();
}

namespace {

template <typename T>
T require_field(const json& j, const char* name) {
    if (!j.contains(name)) throw SchemaError(name, "required field missing");
    try {
        return j.at(name).get<T>();
    } catch (const json::exception&) {
        throw SchemaError(name, "wrong type");
    }
}

}  // namespace

Trajectory trajectory_from_json(const json& j) {
    if (!j.is_object()) throw SchemaError("record", "expected a JSON object");
    Trajectory t;
    t.task.task_id = require_field<std::string>(j, "task_id");
    t.task.instruction = require_field<std::string>(j, "instruction");
    if (t.task.instruction.empty()) throw SchemaError("instruction", "must be non-empty");
    t.task.platform = platform_from_string(require_field<std::string>(j, "platform"));

    if (!j.contains("steps") || !j["steps"].is_array() || j["steps"].empty())
        throw SchemaError("steps", "required non-empty array");
    int expected = 0;
    for (const auto& sj : j["steps"]) {
        Step s;
        s.index = require_field<int>(sj, "index");
        if (s.index != expected)
            throw SchemaError("steps[" + std::to_string(expected) + "].index",
                              "indices must run 0..T-1 without gaps");
        if (sj.contains("screenshot")) from_json(sj["screenshot"], s.screenshot);
        s.think = sj.value("think", std::string());
        s.action = sj.value("action", std::string());
        s.metadata = sj.value("metadata", json::object());
        if (!s.metadata.is_object()) throw SchemaError("metadata", "expected an object");
        t.steps.push_back(std::move(s));
        ++expected;
    }

    if (j.contains("final_screenshot") && !j["final_screenshot"].is_null()) {
        ImageRef r;
        from_json(j["final_screenshot"], r);
        t.final_screenshot = r;
    }
    if (j.contains("label") && !j["label"].is_null()) {
        if (!j["label"].is_boolean()) throw SchemaError("label", "expected a boolean");
        t.label = j["label"].get<bool>();
    }
    t.agent_model = j.value("agent_model", std::string());
    t.validate();
    return t;
}

}  // namespace themis
