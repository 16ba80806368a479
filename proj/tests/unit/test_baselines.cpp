#include <doctest.h>

#include "support/golden_transcripts.hpp"
#include "support/oracle_world.hpp"
#include "themis/baselines.hpp"

using namespace themis;
using themis::testing::CountingBackend;
using themis::testing::make_demo_trajectory;

TEST_SUITE("baselines") {

TEST_CASE("zerogui sends exactly the final K frames") {
    ScriptedBackend backend;
    backend.add({"zerogui", "t", 0, 0}, R"({"verdict":1,"justification":"done"})");
    CountingBackend counting(backend);
    Trajectory t = make_demo_trajectory("t", 10);
    EvaluationRecord record = evaluate_zerogui(t, 2, counting);
    CHECK(record.verdict);
    CHECK(record.strategy == "zerogui");
    auto requests = counting.requests();
    REQUIRE(requests.size() == 1);
    REQUIRE(requests[0].first_user()->images.size() == 2);
    // the last two frames of the sequence (terminal frame last)
    CHECK(requests[0].first_user()->images[0].value == "shot-t-9");
    CHECK(requests[0].first_user()->images[1].value == "shot-t-final");
}

TEST_CASE("zerogui clamps when the trajectory is shorter than K") {
    ScriptedBackend backend;
    backend.add({"zerogui", "t", 0, 0}, R"({"verdict":0,"justification":"not done"})");
    CountingBackend counting(backend);
    Trajectory t = make_demo_trajectory("t", 1);
    t.final_screenshot.reset();
    EvaluationRecord record = evaluate_zerogui(t, 2, counting);
    CHECK_FALSE(record.verdict);
    CHECK(counting.requests()[0].first_user()->images.size() == 1);
    CHECK_THROWS_AS(evaluate_zerogui(t, 0, counting), SchemaError);
}

TEST_CASE("digirl stops at the first satisfied state") {
    ScriptedBackend backend;
    backend.add({"digirl", "t", 0, 0}, R"({"verdict":0,"justification":"no"})");
    backend.add({"digirl", "t", 1, 0}, R"({"verdict":0,"justification":"no"})");
    backend.add({"digirl", "t", 2, 0}, R"({"verdict":1,"justification":"yes"})");
    CountingBackend counting(backend);
    Trajectory t = make_demo_trajectory("t", 5);
    EvaluationRecord record = evaluate_digirl(t, counting);
    CHECK(record.verdict);
    CHECK(counting.calls_for_role("digirl") == 3);
}

TEST_CASE("digirl exhausts every state on all-negative answers") {
    ScriptedBackend backend;
    for (int i = 0; i < 4; ++i)
        backend.add({"digirl", "t", i, 0}, R"({"verdict":0,"justification":"no"})");
    CountingBackend counting(backend);
    Trajectory t = make_demo_trajectory("t", 4);
    EvaluationRecord record = evaluate_digirl(t, counting);
    CHECK_FALSE(record.verdict);
    CHECK(counting.calls_for_role("digirl") == 4);
}

TEST_CASE("single-step trajectory needs one call") {
    ScriptedBackend backend;
    backend.add({"digirl", "t", 0, 0}, R"({"verdict":1,"justification":"yes"})");
    CountingBackend counting(backend);
    Trajectory t = make_demo_trajectory("t", 1);
    EvaluationRecord record = evaluate_digirl(t, counting);
    CHECK(record.verdict);
    CHECK(counting.calls_for_role("digirl") == 1);
}

TEST_CASE("digirl never exceeds T calls on oracle trajectories") {
    testing::OracleWorld world = testing::make_oracle_world(8, 21);
    testing::OracleBackend oracle;
    for (const auto& t : world.trajectories) {
        CountingBackend counting(oracle);
        evaluate_digirl(t, counting);
        CHECK(counting.calls_for_role("digirl") <= t.step_count());
    }
}

TEST_CASE("strategy parsing and description") {
    PipelineConfig config;
    CHECK(CriticStrategy::parse("themis", config).kind == CriticStrategy::Kind::themis);
    CHECK(CriticStrategy::parse("digirl", config).describe() == "digirl");
    CriticStrategy z = CriticStrategy::parse("zerogui:4", config);
    CHECK(z.last_k == 4);
    CHECK(z.describe() == "zerogui(last_k=4)");
    CHECK_THROWS_AS(CriticStrategy::parse("prm", config), SchemaError);
    CHECK_THROWS_AS(CriticStrategy::zerogui(0), SchemaError);
}

TEST_CASE("dispatch runs the matching paradigm") {
    ScriptedBackend backend = testing::golden_backend();
    backend.add({"zerogui", "golden-clean", 0, 0}, R"({"verdict":0,"justification":"no"})");
    Trajectory t = make_demo_trajectory("golden-clean", 6);
    EvaluationRecord themis_record = evaluate_with_strategy(
        t, CriticStrategy::themis(testing::golden_config()), backend);
    CHECK(themis_record.strategy == "themis");
    CHECK(themis_record.verdict);
    EvaluationRecord zero_record =
        evaluate_with_strategy(t, CriticStrategy::zerogui(2, testing::golden_config()), backend);
    CHECK(zero_record.strategy == "zerogui");
    CHECK_FALSE(zero_record.verdict);
}

}  // TEST_SUITE
