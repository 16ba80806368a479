#pragma once

#include <vector>

#include "themis/baselines.hpp"

namespace themis {

/// Aggregation over k independent critic runs. Majority is strict
/// (positives must exceed k/2), so a tie at even k resolves negative.
struct VotingRule {
    enum class Kind { majority, all, any };
    Kind kind = Kind::majority;
    int k = 1;

    std::string describe() const;
    static VotingRule parse(const std::string& name, int k);
};

bool vote(const std::vector<int>& verdicts, const VotingRule& rule);

/// Runs k independent evaluations of the same trajectory (distinct run
/// indices keep the backend sessions independent) and aggregates the
/// verdicts. All k sub-verdicts are persisted on the returned record.
EvaluationRecord vote_evaluate(const Trajectory& trajectory, const CriticStrategy& strategy,
                               const VotingRule& rule, Backend& backend);

}  // namespace themis
