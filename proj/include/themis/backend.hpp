#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "themis/errors.hpp"
#include "themis/types.hpp"

namespace themis {

/// Identifies a model call independently of the prompt text: which agent is
/// speaking, for which trajectory, on which round, in which voting run. The
/// live backend ignores it; the scripted backend replays by it.
struct RequestKey {
    std::string agent_role;
    std::string trajectory_id;
    int round_index = 0;
    int run_index = 0;

    std::string to_string() const {
        return agent_role + "|" + trajectory_id + "|" + std::to_string(round_index) + "|" +
               std::to_string(run_index);
    }
};

struct ChatMessage {
    enum class Role { system, user };
    Role role = Role::user;
    std::string text;
    std::vector<ImageRef> images;   // attached after the text, in order
};

struct ChatRequest {
    std::vector<ChatMessage> messages;
    std::string model_name;
    double temperature = 0.0;
    int max_output_tokens = 2048;
    RequestKey key;

    const ChatMessage* first_user() const {
        for (const auto& m : messages)
            if (m.role == ChatMessage::Role::user) return &m;
        return nullptr;
    }
};

struct ChatResponse {
    std::string text;
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;
    double latency = 0.0;      // seconds
    bool validated = true;     // false when returned after exhausting retries
};

struct RetryPolicy {
    int max_retries = 2;
    std::vector<std::chrono::milliseconds> backoff = {std::chrono::milliseconds(500),
                                                      std::chrono::milliseconds(1000)};

    static RetryPolicy none() { return {0, {}}; }
    static RetryPolicy immediate(int retries) { return {retries, {}}; }
};

class Backend {
public:
    virtual ~Backend() = default;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
};

using ResponseValidator = std::function<bool(const ChatResponse&)>;

/// Observer invoked once per attempt; response is null when the attempt
/// failed at the transport level (error non-null in that case).
using AttemptObserver =
    std::function<void(const ChatRequest&, const ChatResponse*, const BackendError*)>;

/// Issues the request up to 1 + max_retries times. Returns the first
/// response the validator accepts; when every attempt is rejected, returns
/// the last response with validated=false so callers can degrade. Throws
/// the last BackendError only if no attempt produced a response at all.
ChatResponse complete_with_retry(Backend& backend, const ChatRequest& request,
                                 const RetryPolicy& policy, const ResponseValidator& validator,
                                 const AttemptObserver& observer = {});

UsageStats usage_totals(const std::vector<ChatResponse>& responses);

}  // namespace themis
