#include "themis/parsing.hpp"

#include <set>

namespace themis {

namespace {

// Finds the end of the balanced JSON value starting at `start` (which must
// point at '{' or '['). Returns npos when the value never closes.
std::size_t balanced_end(const std::string& s, std::size_t start) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < s.size(); ++i) {
        const char c = s[i];
        if (in_string) {
            if (escaped) {
                escaped = false;
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '{' || c == '[') {
            ++depth;
        } else if (c == '}' || c == ']') {
            --depth;
            if (depth == 0) return i;
            if (depth < 0) return std::string::npos;
        }
    }
    return std::string::npos;
}

}  // namespace

json extract_json(const std::string& raw) {
    bool saw_candidate = false;
    bool saw_unbalanced = false;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] != '{' && raw[i] != '[') continue;
        saw_candidate = true;
        const std::size_t end = balanced_end(raw, i);
        if (end == std::string::npos) {
            saw_unbalanced = true;
            continue;
        }
        try {
            return json::parse(raw.substr(i, end - i + 1));
        } catch (const json::exception&) {
            // keep scanning; prose may contain brace-like fragments
        }
    }
    if (!saw_candidate) throw ParseError(ParseFault::no_json_found, "output", "no JSON value found");
    if (saw_unbalanced)
        throw ParseError(ParseFault::unbalanced, "output", "JSON value never closes");
    throw ParseError(ParseFault::parse_failure, "output", "candidate JSON fails to parse");
}

namespace {

std::string require_string(const json& j, const char* field, bool allow_empty = true) {
    if (!j.contains(field) || !j[field].is_string())
        throw ParseError(ParseFault::schema_violation, field, "required string");
    auto v = j[field].get<std::string>();
    if (!allow_empty && v.empty())
        throw ParseError(ParseFault::schema_violation, field, "must be non-empty");
    return v;
}

bool parse_binary_verdict(const json& j) {
    if (!j.contains("verdict"))
        throw ParseError(ParseFault::schema_violation, "verdict", "required field");
    const auto& v = j["verdict"];
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_number_integer()) {
        const auto n = v.get<int>();
        if (n == 0 || n == 1) return n == 1;
    }
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "0" || s == "1") return s == "1";
    }
    throw ParseError(ParseFault::schema_violation, "verdict", "must be 0 or 1");
}

}  // namespace

ParsedSelectorOutput parse_selector(const std::string& raw, int step_count) {
    const json j = extract_json(raw);
    if (!j.is_object() || !j.contains("milestones") || !j["milestones"].is_array())
        throw ParseError(ParseFault::schema_violation, "milestones", "required array");
    if (j["milestones"].empty())
        throw ParseError(ParseFault::schema_violation, "milestones", "must name at least one");

    ParsedSelectorOutput out;
    for (const auto& mj : j["milestones"]) {
        Milestone m;
        if (!mj.contains("step_index") || !mj["step_index"].is_number_integer())
            throw ParseError(ParseFault::schema_violation, "step_index", "required integer");
        m.step_index = mj["step_index"].get<int>();
        if (m.step_index < 0 || m.step_index >= step_count)
            throw ParseError(ParseFault::schema_violation, "step_index",
                             std::to_string(m.step_index) + " out of range [0, " +
                                 std::to_string(step_count) + ")");
        m.description = require_string(mj, "description", /*allow_empty=*/false);
        m.rationale = mj.value("rationale", std::string());
        m.assignment_goal = require_string(mj, "assignment_goal", /*allow_empty=*/false);
        out.milestones.push_back(std::move(m));
    }
    return out;
}

ParsedVerifierOutput parse_verifier(const std::string& raw) {
    const json j = extract_json(raw);
    if (!j.is_object())
        throw ParseError(ParseFault::schema_violation, "output", "expected a JSON object");
    ParsedVerifierOutput out;
    out.verdict = parse_binary_verdict(j);
    out.evidence = j.value("evidence", std::string());
    out.notes = j.value("notes", std::string());
    out.feedback = j.value("feedback", std::string());
    if (!out.verdict && out.feedback.empty())
        throw ParseError(ParseFault::schema_violation, "feedback",
                         "required when verdict is 0");
    return out;
}

ParsedReviewerOutput parse_reviewer(const std::string& raw, int step_count) {
    const json j = extract_json(raw);
    if (!j.is_object() || !j.contains("issues") || !j["issues"].is_array())
        throw ParseError(ParseFault::schema_violation, "issues", "required array");

    ParsedReviewerOutput out;
    out.overall_commentary = j.value("overall_commentary", std::string());
    std::set<std::string> ids;
    int n = 0;
    for (const auto& ij : j["issues"]) {
        ++n;
        ReviewerIssue issue;
        issue.id = ij.value("id", "ISS-" + std::to_string(n));
        if (!ids.insert(issue.id).second)
            throw ParseError(ParseFault::schema_violation, "id",
                             "duplicate issue id '" + issue.id + "'");
        issue.summary = require_string(ij, "summary", /*allow_empty=*/false);
        const std::string risk = require_string(ij, "risk");
        if (risk == "blocker") {
            issue.risk = IssueRisk::blocker;
        } else if (risk == "warning") {
            issue.risk = IssueRisk::warning;
        } else {
            throw ParseError(ParseFault::enum_violation, "risk",
                             "expected 'blocker' or 'warning', got '" + risk + "'");
        }
        if (ij.contains("related_steps")) {
            if (!ij["related_steps"].is_array())
                throw ParseError(ParseFault::schema_violation, "related_steps", "expected array");
            bool in_range = true;
            std::vector<int> steps;
            for (const auto& sj : ij["related_steps"]) {
                if (!sj.is_number_integer()) {
                    in_range = false;
                    break;
                }
                const int s = sj.get<int>();
                if (s < 0 || s >= step_count) {
                    in_range = false;
                    break;
                }
                steps.push_back(s);
            }
            if (in_range) {
                issue.related_steps = std::move(steps);
            } else {
                // Reviewer contract: unknown references collapse to an empty array.
                out.warnings.push_back("issue " + issue.id +
                                       ": related_steps out of range, cleared");
            }
        }
        issue.evidence_needed = ij.value("evidence_needed", std::string());
        issue.notes = ij.value("notes", std::string());
        out.issues.push_back(std::move(issue));
    }
    return out;
}

ParsedJudgeOutput parse_judge(const std::string& raw) {
    const json j = extract_json(raw);
    if (!j.is_object())
        throw ParseError(ParseFault::schema_violation, "output", "expected a JSON object");
    ParsedJudgeOutput out;
    out.verdict = parse_binary_verdict(j);
    out.justification = j.value("justification", std::string());
    return out;
}

}  // namespace themis
