#include "themis/voting.hpp"

#include <sstream>

namespace themis {

std::string VotingRule::describe() const {
    const char* name = kind == Kind::majority ? "majority" : kind == Kind::all ? "all" : "any";
    return std::string(name) + "(k=" + std::to_string(k) + ")";
}

VotingRule VotingRule::parse(const std::string& name, int k) {
    if (k < 1) throw SchemaError("k", "must be >= 1");
    if (name == "majority") return {Kind::majority, k};
    if (name == "all") return {Kind::all, k};
    if (name == "any") return {Kind::any, k};
    throw SchemaError("vote", "expected majority|all|any, got '" + name + "'");
}

bool vote(const std::vector<int>& verdicts, const VotingRule& rule) {
    if (verdicts.empty()) throw SchemaError("verdicts", "empty verdict list");
    int positives = 0;
    for (int v : verdicts) positives += v ? 1 : 0;
    const int k = static_cast<int>(verdicts.size());
    switch (rule.kind) {
        case VotingRule::Kind::majority: return 2 * positives > k;   // ties resolve negative
        case VotingRule::Kind::all: return positives == k;
        case VotingRule::Kind::any: return positives > 0;
    }
    return false;
}

EvaluationRecord vote_evaluate(const Trajectory& trajectory, const CriticStrategy& strategy,
                               const VotingRule& rule, Backend& backend) {
    if (rule.k < 1) throw SchemaError("k", "must be >= 1");

    std::vector<EvaluationRecord> runs;
    runs.reserve(rule.k);
    for (int i = 0; i < rule.k; ++i) {
        runs.push_back(evaluate_with_strategy(trajectory, strategy, backend, i));
    }

    EvaluationRecord record = runs.front();
    record.sub_verdicts.clear();
    UsageStats usage;
    int total_retries = 0;
    for (const auto& r : runs) {
        record.sub_verdicts.push_back(r.verdict ? 1 : 0);
        usage += r.usage;
        total_retries += r.rounds_used.retries;
    }
    record.verdict = vote(record.sub_verdicts, rule);
    record.usage = usage;
    record.rounds_used.retries = total_retries;

    std::ostringstream why;
    why << rule.describe() << " over sub-verdicts [";
    for (std::size_t i = 0; i < record.sub_verdicts.size(); ++i)
        why << (i ? "," : "") << record.sub_verdicts[i];
    why << "] -> " << (record.verdict ? 1 : 0);
    record.justification = why.str();
    return record;
}

}  // namespace themis
