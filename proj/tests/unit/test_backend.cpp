#include <doctest.h>

#include <random>

#include "support/oracle_world.hpp"
#include "themis/scripted_backend.hpp"

using namespace themis;

namespace {

ChatRequest keyed_request(const std::string& role, const std::string& id, int round) {
    ChatRequest r;
    r.messages.push_back({ChatMessage::Role::user, "hello", {}});
    r.key = {role, id, round, 0};
    return r;
}

}  // namespace

TEST_SUITE("backend") {

TEST_CASE("scripted backend replays canned text verbatim") {
    ScriptedBackend backend;
    backend.add({"judge", "t1", 0, 0}, "canned {\"verdict\":1}");
    ChatResponse r = backend.complete(keyed_request("judge", "t1", 0));
    CHECK(r.text == "canned {\"verdict\":1}");
    // purity: identical key, identical bytes, every time
    for (int i = 0; i < 5; ++i) {
        ChatResponse again = backend.complete(keyed_request("judge", "t1", 0));
        CHECK(again.text == r.text);
        CHECK(again.prompt_tokens == r.prompt_tokens);
    }
    CHECK_THROWS_AS(backend.complete(keyed_request("judge", "t1", 99)), BackendError);
}

TEST_CASE("script files round trip") {
    ScriptedBackend backend;
    backend.add({"verifier", "t1", 2, 1}, ScriptedBackend::Entry{"yes", 12, 3, 0.25});
    const auto path =
        (std::filesystem::temp_directory_path() / "script_rt.json").string();
    backend.save(path);
    ScriptedBackend loaded = ScriptedBackend::from_file(path);
    ChatRequest req = keyed_request("verifier", "t1", 2);
    req.key.run_index = 1;
    ChatResponse r = loaded.complete(req);
    CHECK(r.text == "yes");
    CHECK(r.prompt_tokens == 12);
    CHECK(r.latency == doctest::Approx(0.25));
    std::remove(path.c_str());
}

TEST_CASE("retry accepts the first valid attempt") {
    ScriptedBackend backend;
    backend.add({"judge", "t", 0, 0}, "ok");
    testing::CountingBackend counting(backend);
    ChatResponse r = complete_with_retry(counting, keyed_request("judge", "t", 0),
                                         RetryPolicy::immediate(2),
                                         [](const ChatResponse&) { return true; });
    CHECK(r.validated);
    CHECK(counting.total_calls() == 1);
}

TEST_CASE("retry keeps trying until the validator accepts") {
    ScriptedBackend backend;
    backend.add({"judge", "t", 0, 0}, "ok");
    testing::CountingBackend counting(backend);
    int seen = 0;
    ChatResponse r = complete_with_retry(counting, keyed_request("judge", "t", 0),
                                         RetryPolicy::immediate(2),
                                         [&seen](const ChatResponse&) { return ++seen >= 3; });
    CHECK(r.validated);
    CHECK(counting.total_calls() == 3);
}

TEST_CASE("exhausted retries return the last response unvalidated") {
    ScriptedBackend backend;
    backend.add({"judge", "t", 0, 0}, "still wrong");
    testing::CountingBackend counting(backend);
    ChatResponse r = complete_with_retry(counting, keyed_request("judge", "t", 0),
                                         RetryPolicy::immediate(2),
                                         [](const ChatResponse&) { return false; });
    CHECK_FALSE(r.validated);
    CHECK(r.text == "still wrong");
    CHECK(counting.total_calls() == 3);   // 1 + 2 retries, never more
}

TEST_CASE("never issues more than 1 + max_retries calls") {
    for (int retries = 0; retries <= 4; ++retries) {
        ScriptedBackend backend;
        backend.add({"judge", "t", 0, 0}, "x");
        testing::CountingBackend counting(backend);
        complete_with_retry(counting, keyed_request("judge", "t", 0),
                            RetryPolicy::immediate(retries),
                            [](const ChatResponse&) { return false; });
        CHECK(counting.total_calls() == 1 + retries);
    }
}

TEST_CASE("all transport failures raise a hard error") {
    struct Failing : Backend {
        ChatResponse complete(const ChatRequest&) override {
            throw BackendError(BackendFault::transport, "connection refused");
        }
    } failing;
    testing::CountingBackend counting(failing);
    CHECK_THROWS_AS(complete_with_retry(counting, keyed_request("judge", "t", 0),
                                        RetryPolicy::immediate(2), {}),
                    BackendError);
    CHECK(counting.total_calls() == 3);
}

TEST_CASE("usage totals sum and are associative") {
    CHECK(usage_totals({}).calls == 0);
    CHECK(usage_totals({}).prompt_tokens == 0);

    std::vector<ChatResponse> two = {{"a", 100, 10, 0.5, true}, {"b", 200, 20, 0.25, true}};
    UsageStats t = usage_totals(two);
    CHECK(t.prompt_tokens == 300);
    CHECK(t.completion_tokens == 30);
    CHECK(t.calls == 2);
    CHECK(t.wall_latency == doctest::Approx(0.75));

    std::mt19937_64 rng(11);
    std::vector<ChatResponse> all;
    for (int i = 0; i < 20; ++i)
        all.push_back({"", static_cast<std::int64_t>(rng() % 1000),
                       static_cast<std::int64_t>(rng() % 100), 0.01 * (i + 1), true});
    for (std::size_t split = 0; split <= all.size(); split += 5) {
        std::vector<ChatResponse> left(all.begin(), all.begin() + split);
        std::vector<ChatResponse> right(all.begin() + split, all.end());
        UsageStats sum = usage_totals(left);
        sum += usage_totals(right);
        UsageStats whole = usage_totals(all);
        CHECK(sum.prompt_tokens == whole.prompt_tokens);
        CHECK(sum.completion_tokens == whole.completion_tokens);
        CHECK(sum.calls == whole.calls);
        CHECK(sum.wall_latency == doctest::Approx(whole.wall_latency));
    }
}

TEST_CASE("per-trajectory averages over a cost fixture") {
    // 10 trajectories engineered so corpus averages land on
    // prompt 164624.0, completion 6416.8, calls 14.1.
    UsageStats corpus;
    for (int traj = 0; traj < 10; ++traj) {
        const int calls = traj == 0 ? 15 : 14;
        const std::int64_t completion_total = traj < 8 ? 6417 : 6416;
        std::vector<ChatResponse> responses;
        std::int64_t prompt_left = 164624, completion_left = completion_total;
        for (int c = 0; c < calls; ++c) {
            const std::int64_t prompt = c + 1 == calls ? prompt_left : 164624 / calls;
            const std::int64_t completion = c + 1 == calls ? completion_left : completion_total / calls;
            prompt_left -= prompt;
            completion_left -= completion;
            responses.push_back({"", prompt, completion, 0.1, true});
        }
        corpus += usage_totals(responses);
    }
    CHECK(corpus.prompt_tokens / 10.0 == doctest::Approx(164624.0));
    CHECK(corpus.completion_tokens / 10.0 == doctest::Approx(6416.8));
    CHECK(corpus.calls / 10.0 == doctest::Approx(14.1));
}

}  // TEST_SUITE
