#pragma once

#include <string>
#include <vector>

#include "themis/errors.hpp"
#include "themis/types.hpp"

namespace themis {

enum class ParseFault {
    no_json_found,
    unbalanced,
    parse_failure,
    schema_violation,
    enum_violation
};

class ParseError : public Error {
public:
    ParseError(ParseFault fault, const std::string& field, const std::string& reason)
        : Error("parse error [" + field + "]: " + reason), fault_(fault), field_(field) {}
    ParseFault fault() const { return fault_; }
    const std::string& field() const { return field_; }

private:
    ParseFault fault_;
    std::string field_;
};

/// Locates the first balanced top-level JSON object or array in raw model
/// output, tolerating markdown fences and surrounding prose, and parses it.
json extract_json(const std::string& raw);

struct ParsedSelectorOutput {
    std::vector<Milestone> milestones;
};

struct ParsedVerifierOutput {
    bool verdict = false;
    std::string evidence;
    std::string notes;
    std::string feedback;
};

struct ParsedReviewerOutput {
    std::vector<ReviewerIssue> issues;
    std::string overall_commentary;
    std::vector<std::string> warnings;   // non-fatal fixups (clamped steps, ...)

    bool has_blocker() const {
        for (const auto& i : issues)
            if (i.risk == IssueRisk::blocker) return true;
        return false;
    }
};

struct ParsedJudgeOutput {
    bool verdict = false;
    std::string justification;
};

/// All parsers throw ParseError on any deviation from the declared schema so
/// the retry validator in the backend layer can reject the attempt.
ParsedSelectorOutput parse_selector(const std::string& raw, int step_count);
ParsedVerifierOutput parse_verifier(const std::string& raw);
ParsedReviewerOutput parse_reviewer(const std::string& raw, int step_count);
ParsedJudgeOutput parse_judge(const std::string& raw);

}  // namespace themis
