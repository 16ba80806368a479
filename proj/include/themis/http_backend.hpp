#pragma once

#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>

#include "themis/backend.hpp"

namespace themis {

/// Runtime-sized counting semaphore bounding in-flight requests.
class InflightLimiter {
public:
    explicit InflightLimiter(int limit) : available_(limit) {}

    void acquire() {
        std::unique_lock<std::mutex> lock(mutex_);
        cv_.wait(lock, [this] { return available_ > 0; });
        --available_;
    }
    void release() {
        std::lock_guard<std::mutex> lock(mutex_);
        ++available_;
        cv_.notify_one();
    }

private:
    std::mutex mutex_;
    std::condition_variable cv_;
    int available_;
};

struct HttpBackendSettings {
    std::string endpoint = "http://127.0.0.1:8000";   // scheme://host[:port]
    std::string path = "/v1/chat/completions";
    std::string model = "default";
    std::string api_key;
    int timeout_seconds = 120;
    int max_inflight = 8;
};

/// Live client speaking the OpenAI-compatible chat-completions protocol,
/// with multimodal content parts (images as base64 data URIs). Shareable
/// across concurrent pipeline workers; in-flight requests are bounded.
class HttpBackend : public Backend {
public:
    explicit HttpBackend(HttpBackendSettings settings);
    ~HttpBackend() override;

    ChatResponse complete(const ChatRequest& request) override;

    /// Wire payload construction, exposed so tests can assert its shape.
    static json build_wire_body(const ChatRequest& request, const std::string& model);

    /// Resolves an image reference to a data URI. Path references are read
    /// from disk and base64-encoded; throws BackendError(transport) when
    /// the file cannot be read.
    static std::string to_data_uri(const ImageRef& image);

private:
    struct Impl;
    HttpBackendSettings settings_;
    InflightLimiter limiter_;
    std::unique_ptr<Impl> impl_;
};

std::string base64_encode(const std::string& bytes);

}  // namespace themis
