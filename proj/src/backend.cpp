#include "themis/backend.hpp"

#include <exception>
#include <optional>
#include <thread>

namespace themis {

ChatResponse complete_with_retry(Backend& backend, const ChatRequest& request,
                                 const RetryPolicy& policy, const ResponseValidator& validator,
                                 const AttemptObserver& observer) {
    const int attempts = 1 + std::max(0, policy.max_retries);
    std::optional<ChatResponse> last_response;
    std::exception_ptr last_error;

    for (int attempt = 0; attempt < attempts; ++attempt) {
        if (attempt > 0 && !policy.backoff.empty()) {
            const auto idx = std::min<std::size_t>(attempt - 1, policy.backoff.size() - 1);
            std::this_thread::sleep_for(policy.backoff[idx]);
        }
        ChatResponse response;
        try {
            response = backend.complete(request);
        } catch (const BackendError& e) {
            last_error = std::current_exception();
            if (observer) observer(request, nullptr, &e);
            continue;
        }
        response.validated = !validator || validator(response);
        if (observer) observer(request, &response, nullptr);
        last_response = response;
        if (response.validated) return response;
    }

    if (last_response) {
        last_response->validated = false;
        return *last_response;
    }
    std::rethrow_exception(last_error);
}

UsageStats usage_totals(const std::vector<ChatResponse>& responses) {
    UsageStats total;
    for (const auto& r : responses) {
        total.prompt_tokens += r.prompt_tokens;
        total.completion_tokens += r.completion_tokens;
        total.calls += 1;
        total.wall_latency += r.latency;
    }
    return total;
}

}  // namespace themis
