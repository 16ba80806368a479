#include <doctest.h>

#include "support/golden_transcripts.hpp"
#include "support/oracle_world.hpp"
#include "themis/mvm.hpp"

using namespace themis;
using themis::testing::CountingBackend;
using themis::testing::make_demo_trajectory;

namespace {

PipelineSession make_session(const std::string& id, int selector_rounds = 6,
                             int reviewer_rounds = 2) {
    return PipelineSession(id, selector_rounds, reviewer_rounds, RetryPolicy::immediate(2));
}

std::string milestones_text(std::initializer_list<std::pair<int, const char*>> entries) {
    json arr = json::array();
    for (const auto& [step, goal] : entries) {
        arr.push_back({{"step_index", step},
                       {"description", std::string("desc ") + goal},
                       {"rationale", "r"},
                       {"assignment_goal", goal}});
    }
    return json{{"milestones", arr}}.dump();
}

}  // namespace

TEST_SUITE("mvm") {

TEST_CASE("scripted selector proposes a validated set") {
    ScriptedBackend backend;
    backend.add({"selector_initial", "t", 0, 0},
                milestones_text({{2, "g1"}, {5, "g2"}, {8, "g3"}}));
    Trajectory t = make_demo_trajectory("t", 10);
    auto session = make_session("t");
    MilestoneSet set = select_milestones(t, nullptr, nullptr, {}, PromptLibrary::builtin(),
                                         backend, session);
    CHECK(set.size() == 3);
    CHECK(set.revision == 0);
    CHECK(session.selector_rounds() == 1);
}

TEST_CASE("selector output is deduplicated and ordered") {
    ScriptedBackend backend;
    backend.add({"selector_initial", "t", 0, 0},
                milestones_text({{7, "g-late"}, {2, "g-early"}, {7, "g-late"}}));
    Trajectory t = make_demo_trajectory("t", 10);
    auto session = make_session("t");
    MilestoneSet set =
        select_milestones(t, nullptr, nullptr, {}, PromptLibrary::builtin(), backend, session);
    REQUIRE(set.size() == 2);
    CHECK(set.milestones[0].step_index == 2);
    CHECK(set.milestones[1].step_index == 7);
}

TEST_CASE("refinement addresses issues and bumps the revision") {
    ScriptedBackend backend;
    backend.add({"selector_refine", "t", 0, 0},
                milestones_text({{2, "g1"}, {5, "g2"}, {9, "persistence"}}));
    testing::CountingBackend counting(backend);
    Trajectory t = make_demo_trajectory("t", 10);
    auto session = make_session("t");

    MilestoneSet prior;
    prior.revision = 0;
    prior.milestones = {{2, "desc g1", "r", "g1"}, {5, "desc g2", "r", "g2"}};
    std::vector<ReviewerIssue> issues = {{"ISS-1", "no persistence check", IssueRisk::blocker,
                                          {9}, "note list shows entry", ""}};
    MilestoneSet refined =
        select_milestones(t, &prior, &issues, {}, PromptLibrary::builtin(), counting, session);
    CHECK(refined.size() == 3);
    CHECK(refined.revision == 1);

    // the refine prompt carries the issue verbatim
    auto requests = counting.requests();
    REQUIRE(requests.size() == 1);
    CHECK(requests[0].first_user()->text.find("no persistence check") != std::string::npos);
}

TEST_CASE("selector falling over yields the terminal fallback milestone") {
    testing::AlwaysMalformedBackend malformed;
    testing::CountingBackend counting(malformed);
    Trajectory t = make_demo_trajectory("t", 7);
    auto session = make_session("t");
    MilestoneSet set =
        select_milestones(t, nullptr, nullptr, {}, PromptLibrary::builtin(), counting, session);
    REQUIRE(set.size() == 1);
    CHECK(set.milestones[0].step_index == 6);
    CHECK(set.milestones[0].assignment_goal == t.task.instruction);
    CHECK(counting.total_calls() == 3);   // 1 + 2 retries
    REQUIRE(session.degraded().size() == 1);
    CHECK(session.degraded()[0] == "selector_fallback");
}

TEST_CASE("failed refinement falls back to the prior set") {
    testing::AlwaysMalformedBackend malformed;
    Trajectory t = make_demo_trajectory("t", 7);
    auto session = make_session("t");
    MilestoneSet prior;
    prior.revision = 2;
    prior.milestones = {{3, "d", "r", "g"}};
    MilestoneSet out =
        select_milestones(t, &prior, nullptr, {}, PromptLibrary::builtin(), malformed, session);
    CHECK(out.revision == 2);
    CHECK(out.size() == 1);
    CHECK(session.degraded()[0] == "selector_refine_failed");
}

TEST_CASE("exhausted selector budget short-circuits without a call") {
    ScriptedBackend backend;   // would throw if called
    Trajectory t = make_demo_trajectory("t", 4);
    PipelineSession session("t", 1, 2, RetryPolicy::none());
    session.consume_selector_round();
    MilestoneSet set =
        select_milestones(t, nullptr, nullptr, {}, PromptLibrary::builtin(), backend, session);
    CHECK(set.size() == 1);
    CHECK(session.degraded()[0] == "selector_budget_exhausted");
}

TEST_CASE("verifier replay and transition resolution") {
    ScriptedBackend backend;
    backend.add({"verifier", "t", 0, 0},
                R"({"verdict":1,"evidence":"dialog visible","notes":""})");
    testing::CountingBackend counting(backend);
    Trajectory t = make_demo_trajectory("t", 5);
    auto session = make_session("t");
    Milestone m{2, "dialog opened", "r", "dialog visible"};
    VerificationResult v =
        verify_milestone(t, m, 0, {}, PromptLibrary::builtin(), counting, session);
    CHECK(v.verdict);
    CHECK(v.evidence == "dialog visible");

    auto requests = counting.requests();
    REQUIRE(requests.size() == 1);
    REQUIRE(requests[0].first_user()->images.size() == 2);
    CHECK(requests[0].first_user()->images[0].value == "shot-t-2");
    CHECK(requests[0].first_user()->images[1].value == "shot-t-3");
}

TEST_CASE("last-step milestone uses the terminal frame as post-state") {
    ScriptedBackend backend;
    backend.add({"verifier", "t", 0, 0}, R"({"verdict":1,"evidence":"e","notes":""})");
    testing::CountingBackend counting(backend);
    Trajectory t = make_demo_trajectory("t", 5);
    auto session = make_session("t");
    Milestone m{4, "end state", "r", "end state reached"};
    verify_milestone(t, m, 0, {}, PromptLibrary::builtin(), counting, session);
    auto images = counting.requests()[0].first_user()->images;
    REQUIRE(images.size() == 2);
    CHECK(images[1].value == "shot-t-final");

    SUBCASE("without a terminal frame the pre-state is reused and flagged") {
        Trajectory bare = make_demo_trajectory("t", 5);
        bare.final_screenshot.reset();
        StateTransition tr = resolve_transition(bare, 4);
        CHECK(tr.post_is_pre_fallback);
        CHECK(tr.post.value == tr.pre.value);
    }
}

TEST_CASE("missing screenshots degrade to text-only verification") {
    ScriptedBackend backend;
    backend.add({"verifier", "t", 0, 0}, R"({"verdict":1,"evidence":"e","notes":""})");
    testing::CountingBackend counting(backend);
    Trajectory t = make_demo_trajectory("t", 3);
    for (auto& s : t.steps) s.screenshot = ImageRef::none();
    t.final_screenshot.reset();
    auto session = make_session("t");
    Milestone m{1, "d", "r", "g"};
    VerificationResult v =
        verify_milestone(t, m, 0, {}, PromptLibrary::builtin(), counting, session);
    CHECK(counting.requests()[0].first_user()->images.empty());
    CHECK(v.notes.find("text-only") != std::string::npos);
}

TEST_CASE("disabling assignment goals only changes prompt content") {
    auto run = [](bool use_goal) {
        ScriptedBackend backend;
        backend.add({"verifier", "t", 0, 0}, R"({"verdict":1,"evidence":"e","notes":""})");
        CountingBackend counting(backend);
        Trajectory t = make_demo_trajectory("t", 5);
        MvmConfig config;
        config.use_assignment_goal = use_goal;
        auto session = make_session("t");
        Milestone m{2, "the description", "r", "the explicit criterion"};
        verify_milestone(t, m, 0, config, PromptLibrary::builtin(), counting, session);
        return counting.requests()[0];
    };
    ChatRequest with_goal = run(true);
    ChatRequest without_goal = run(false);
    CHECK(with_goal.first_user()->text.find("the explicit criterion") != std::string::npos);
    CHECK(without_goal.first_user()->text.find("the explicit criterion") == std::string::npos);
    CHECK(without_goal.first_user()->text.find("the description") != std::string::npos);
    // identical call structure either way
    CHECK(with_goal.key.agent_role == without_goal.key.agent_role);
    CHECK(with_goal.messages.size() == without_goal.messages.size());
    CHECK(with_goal.first_user()->images.size() == without_goal.first_user()->images.size());
}

TEST_CASE("run_mvm verifies each milestone in order") {
    ScriptedBackend backend;
    backend.add({"selector_initial", "t", 0, 0},
                milestones_text({{1, "g1"}, {3, "g2"}, {4, "g3"}}));
    for (int i = 0; i < 3; ++i)
        backend.add({"verifier", "t", i, 0}, R"({"verdict":1,"evidence":"e","notes":""})");
    Trajectory t = make_demo_trajectory("t", 5);
    auto session = make_session("t");
    MvmResult result = run_mvm(t, nullptr, nullptr, {}, PromptLibrary::builtin(), backend, session);
    CHECK(result.rounds_used == 1);
    REQUIRE(result.verifications.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(result.verifications[i].milestone_ref == i);
}

TEST_CASE("verify_all_steps skips the selector and covers every step") {
    ScriptedBackend backend;
    for (int i = 0; i < 5; ++i)
        backend.add({"verifier", "t", i, 0}, R"({"verdict":1,"evidence":"e","notes":""})");
    CountingBackend counting(backend);
    Trajectory t = make_demo_trajectory("t", 5);
    MvmConfig config;
    config.verify_all_steps = true;
    auto session = make_session("t");
    MvmResult result =
        run_mvm(t, nullptr, nullptr, config, PromptLibrary::builtin(), counting, session);
    CHECK(result.verifications.size() == 5);
    CHECK(result.rounds_used == 0);
    CHECK(counting.calls_for_role("selector_initial") == 0);
    CHECK(counting.calls_for_role("selector_refine") == 0);
    CHECK(counting.calls_for_role("verifier") == 5);
}

TEST_CASE("refinement re-verifies only new or modified milestones") {
    ScriptedBackend backend;
    backend.add({"selector_initial", "t", 0, 0}, milestones_text({{1, "g1"}, {3, "g2"}}));
    backend.add({"verifier", "t", 0, 0}, R"({"verdict":1,"evidence":"first","notes":""})");
    backend.add({"verifier", "t", 1, 0}, R"({"verdict":1,"evidence":"second","notes":""})");
    backend.add({"selector_refine", "t", 0, 0},
                milestones_text({{1, "g1"}, {3, "g2"}, {4, "g3"}}));
    backend.add({"verifier", "t", 2, 0}, R"({"verdict":1,"evidence":"third","notes":""})");
    CountingBackend counting(backend);
    Trajectory t = make_demo_trajectory("t", 5);
    auto session = make_session("t");
    const PromptLibrary lib = PromptLibrary::builtin();

    MvmResult first = run_mvm(t, nullptr, nullptr, {}, lib, counting, session);
    std::vector<ReviewerIssue> issues = {
        {"ISS-1", "missing terminal check", IssueRisk::blocker, {4}, "end state visible", ""}};
    MvmResult second = run_mvm(t, &first, &issues, {}, lib, counting, session);

    CHECK(counting.calls_for_role("verifier") == 3);   // two initial + one new
    REQUIRE(second.verifications.size() == 3);
    CHECK(second.verifications[0].evidence == "first");
    CHECK(second.verifications[2].evidence == "third");
    CHECK(second.milestone_set.revision == 1);
}

TEST_CASE("oracle world verdicts equal planted truth") {
    testing::OracleWorld world = testing::make_oracle_world(12, 5);
    testing::OracleBackend oracle;
    const PromptLibrary lib = PromptLibrary::builtin();
    int milestones_checked = 0;
    for (const auto& t : world.trajectories) {
        auto session = make_session(t.task.task_id);
        MvmResult result = run_mvm(t, nullptr, nullptr, {}, lib, oracle, session);
        for (const auto& v : result.verifications) {
            const Milestone& m = result.milestone_set.milestones[v.milestone_ref];
            const std::string& action = t.steps[m.step_index].action;
            const bool planted_ok = action.find(":ok>>") != std::string::npos;
            CHECK(v.verdict == planted_ok);
            ++milestones_checked;
        }
    }
    CHECK(milestones_checked >= 24);   // 12 trajectories x 2..5 goals
}

}  // TEST_SUITE
