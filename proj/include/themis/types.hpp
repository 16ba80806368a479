#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace themis {

using json = nlohmann::json;

enum class Platform { ubuntu, android, windows, macos, web, other };

std::string to_string(Platform p);
Platform platform_from_string(const std::string& s);

/// Opaque handle for a screenshot: a file path, an inline base64 payload,
/// or an explicit "missing" marker.
struct ImageRef {
    enum class Kind { path, inline_b64, missing };

    Kind kind = Kind::missing;
    std::string value;                   // path or base64 payload
    std::string media_type = "image/png";

    static ImageRef from_path(std::string p);
    static ImageRef from_base64(std::string b64, std::string media_type = "image/png");
    static ImageRef none();

    bool is_missing() const { return kind == Kind::missing; }
    bool operator==(const ImageRef&) const = default;
};

struct TaskInstruction {
    std::string task_id;
    std::string instruction;
    Platform platform = Platform::other;
};

/// One <screenshot, think, action> step of a GUI trajectory.
struct Step {
    int index = 0;
    ImageRef screenshot;
    std::string think;
    std::string action;
    json metadata = json::object();   // agent-generated, passed through opaquely
};

struct Trajectory {
    TaskInstruction task;
    std::vector<Step> steps;
    std::optional<ImageRef> final_screenshot;
    std::optional<bool> label;
    std::string agent_model;

    int step_count() const { return static_cast<int>(steps.size()); }

    /// Throws SchemaError unless steps are non-empty, indexed 0..T-1, and the
    /// instruction/platform invariants hold.
    void validate() const;
};

/// A verifiable sub-goal proposed by the Selector: where to check, what
/// progress is expected, why it matters, and the explicit criterion handed
/// to the Verifier.
struct Milestone {
    int step_index = 0;
    std::string description;
    std::string rationale;
    std::string assignment_goal;
};

struct MilestoneSet {
    std::vector<Milestone> milestones;
    int revision = 0;

    std::size_t size() const { return milestones.size(); }

    /// Sorts by step_index (stable) and drops duplicates sharing
    /// (step_index, assignment_goal), keeping the first occurrence.
    void normalize();
    void validate(int step_count) const;
};

/// Per-milestone binary verdict. Failed verdicts carry grounded feedback.
struct VerificationResult {
    std::size_t milestone_ref = 0;   // index into the owning MilestoneSet
    bool verdict = false;
    std::string evidence;
    std::string feedback;            // required when verdict is false
    std::string notes;
};

enum class IssueRisk { blocker, warning };

std::string to_string(IssueRisk r);
IssueRisk issue_risk_from_string(const std::string& s);

/// A Reviewer audit finding with the targeted query that would confirm or
/// refute it.
struct ReviewerIssue {
    std::string id;                  // e.g. "ISS-1"
    std::string summary;
    IssueRisk risk = IssueRisk::warning;
    std::vector<int> related_steps;
    std::string evidence_needed;
    std::string notes;
};

struct UsageStats {
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;
    std::int64_t calls = 0;
    double wall_latency = 0.0;       // sum of per-call latencies, seconds

    UsageStats& operator+=(const UsageStats& o);
};

struct RoundsUsed {
    int selector_rounds = 0;
    int reviewer_rounds = 0;
    int retries = 0;                 // attempts beyond the first, summed over calls
};

/// Full deliberation transcript for one trajectory: how the milestone set
/// evolved, every verification, every audit issue, and the final verdict.
struct EvaluationRecord {
    std::string trajectory_id;
    std::string strategy = "themis";
    std::vector<MilestoneSet> milestone_history;
    std::vector<std::vector<VerificationResult>> verifications;  // per revision
    std::vector<std::vector<ReviewerIssue>> issues;              // per review round
    bool verdict = false;
    std::string justification;
    RoundsUsed rounds_used;
    UsageStats usage;
    std::vector<std::string> degraded;   // degradation events, in order
    std::vector<int> sub_verdicts;       // populated by voting aggregation
    std::optional<bool> label;           // echoed ground truth when known
};

// JSON (de)serialization. Field order is canonicalized by nlohmann's
// ordered map, so dump() output is stable for identical records.
void to_json(json& j, const ImageRef& r);
void from_json(const json& j, ImageRef& r);
void to_json(json& j, const Step& s);
void to_json(json& j, const Trajectory& t);
void to_json(json& j, const Milestone& m);
void from_json(const json& j, Milestone& m);
void to_json(json& j, const MilestoneSet& s);
void from_json(const json& j, MilestoneSet& s);
void to_json(json& j, const VerificationResult& v);
void from_json(const json& j, VerificationResult& v);
void to_json(json& j, const ReviewerIssue& i);
void from_json(const json& j, ReviewerIssue& i);
void to_json(json& j, const UsageStats& u);
void from_json(const json& j, UsageStats& u);
void to_json(json& j, const EvaluationRecord& r);
void from_json(const json& j, EvaluationRecord& r);

/// Parses one dataset record (see README for the line schema). Throws
/// SchemaError naming the offending field.
Trajectory trajectory_from_json(const json& j);

}  // namespace themis
