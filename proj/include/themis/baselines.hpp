#pragma once

#include <string>

#include "themis/vcm.hpp"

namespace themis {

/// Which critic paradigm evaluates a trajectory. All three share the same
/// record-producing interface.
struct CriticStrategy {
    enum class Kind { themis, zerogui, digirl };

    Kind kind = Kind::themis;
    PipelineConfig themis_config;
    int last_k = 2;

    std::string describe() const;

    static CriticStrategy themis(PipelineConfig config = {});
    static CriticStrategy zerogui(int last_k = 2, PipelineConfig config = {});
    static CriticStrategy digirl(PipelineConfig config = {});

    /// "themis" | "zerogui" | "zerogui:K" | "digirl" (CLI spelling).
    static CriticStrategy parse(const std::string& name, const PipelineConfig& config);
};

/// Direct assessment from the final min(last_k, T) frames: one judge-style
/// call carrying the instruction and those screenshots.
EvaluationRecord evaluate_zerogui(const Trajectory& trajectory, int last_k, Backend& backend,
                                  const PipelineConfig& config = {}, int run_index = 0);

/// Sequential check: one goal-satisfaction query per state, in order,
/// stopping at the first positive. Verdict 1 iff any state satisfied the
/// goal; at most T model calls.
EvaluationRecord evaluate_digirl(const Trajectory& trajectory, Backend& backend,
                                 const PipelineConfig& config = {}, int run_index = 0);

EvaluationRecord evaluate_with_strategy(const Trajectory& trajectory,
                                        const CriticStrategy& strategy, Backend& backend,
                                        int run_index = 0);

}  // namespace themis
