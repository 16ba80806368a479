#pragma once

// Three authored end-to-end transcripts replayed through the scripted
// backend: a clean pass, a reviewer-driven refinement, and a run where the
// judge overrules a failed milestone. Replays must be byte-identical across
// runs and worker counts.

#include <vector>

#include "themis/scripted_backend.hpp"
#include "themis/vcm.hpp"

namespace themis::testing {

struct GoldenCase {
    std::string name;
    Trajectory trajectory;
    bool expected_verdict = false;
    int expected_selector_rounds = 0;
    int expected_reviewer_rounds = 0;
    std::size_t expected_final_milestones = 0;
};

std::vector<GoldenCase> golden_cases();

/// One backend scripting all three cases (keys carry the trajectory id).
ScriptedBackend golden_backend();

/// Defaults with an immediate (no-backoff) retry policy.
PipelineConfig golden_config();

/// A small synthetic trajectory with inline screenshots.
Trajectory make_demo_trajectory(const std::string& id, int steps);

}  // namespace themis::testing
