#include "themis/http_backend.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <httplib.h>

namespace themis {

std::string base64_encode(const std::string& bytes) {
    static const char* tbl = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    while (i + 2 < bytes.size()) {
        unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                     (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                     static_cast<unsigned char>(bytes[i + 2]);
        out += tbl[(v >> 18) & 63];
        out += tbl[(v >> 12) & 63];
        out += tbl[(v >> 6) & 63];
        out += tbl[v & 63];
        i += 3;
    }
    if (i + 1 == bytes.size()) {
        unsigned v = static_cast<unsigned char>(bytes[i]) << 16;
        out += tbl[(v >> 18) & 63];
        out += tbl[(v >> 12) & 63];
        out += "==";
    } else if (i + 2 == bytes.size()) {
        unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                     (static_cast<unsigned char>(bytes[i + 1]) << 8);
        out += tbl[(v >> 18) & 63];
        out += tbl[(v >> 12) & 63];
        out += tbl[(v >> 6) & 63];
        out += '=';
    }
    return out;
}

std::string HttpBackend::to_data_uri(const ImageRef& image) {
    switch (image.kind) {
        case ImageRef::Kind::inline_b64:
            return "data:" + image.media_type + ";base64," + image.value;
        case ImageRef::Kind::path: {
            std::ifstream in(image.value, std::ios::binary);
            if (!in)
                throw BackendError(BackendFault::transport,
                                   "cannot read image file: " + image.value);
            std::ostringstream buf;
            buf << in.rdbuf();
            return "data:" + image.media_type + ";base64," + base64_encode(buf.str());
        }
        case ImageRef::Kind::missing:
            throw BackendError(BackendFault::transport, "missing image reference");
    }
    throw BackendError(BackendFault::transport, "invalid image reference");
}

json HttpBackend::build_wire_body(const ChatRequest& request, const std::string& model) {
    json messages = json::array();
    for (const auto& m : request.messages) {
        const char* role = m.role == ChatMessage::Role::system ? "system" : "user";
        if (m.images.empty()) {
            messages.push_back({{"role", role}, {"content", m.text}});
            continue;
        }
        json parts = json::array();
        parts.push_back({{"type", "text"}, {"text", m.text}});
        for (const auto& img : m.images) {
            parts.push_back(
                {{"type", "image_url"}, {"image_url", {{"url", to_data_uri(img)}}}});
        }
        messages.push_back({{"role", role}, {"content", parts}});
    }
    return json{{"model", model.empty() ? request.model_name : model},
                {"messages", messages},
                {"temperature", request.temperature},
                {"max_tokens", request.max_output_tokens}};
}

struct HttpBackend::Impl {
    explicit Impl(const HttpBackendSettings& s) : client(s.endpoint) {
        client.set_connection_timeout(s.timeout_seconds, 0);
        client.set_read_timeout(s.timeout_seconds, 0);
        client.set_write_timeout(s.timeout_seconds, 0);
        if (!s.api_key.empty())
            client.set_default_headers({{"Authorization", "Bearer " + s.api_key}});
    }
    httplib::Client client;
};

HttpBackend::HttpBackend(HttpBackendSettings settings)
    : settings_(std::move(settings)),
      limiter_(std::max(1, settings_.max_inflight)),
      impl_(std::make_unique<Impl>(settings_)) {}

HttpBackend::~HttpBackend() = default;

ChatResponse HttpBackend::complete(const ChatRequest& request) {
    limiter_.acquire();
    struct Release {
        InflightLimiter& l;
        ~Release() { l.release(); }
    } release{limiter_};

    const json body = build_wire_body(request, settings_.model);
    const auto start = std::chrono::steady_clock::now();
    auto result = impl_->client.Post(settings_.path, body.dump(), "application/json");
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (!result) {
        const auto err = result.error();
        if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
            err == httplib::Error::Write) {
            throw BackendError(BackendFault::timeout,
                               "request timed out: " + httplib::to_string(err));
        }
        throw BackendError(BackendFault::transport,
                           "transport failure: " + httplib::to_string(err));
    }
    if (result->status < 200 || result->status >= 300) {
        throw BackendError(BackendFault::http_status,
                           "HTTP " + std::to_string(result->status) + ": " + result->body,
                           result->status);
    }

    json parsed;
    try {
        parsed = json::parse(result->body);
    } catch (const json::exception& e) {
        throw BackendError(BackendFault::response_schema,
                           std::string("response is not JSON: ") + e.what());
    }
    if (!parsed.contains("choices") || !parsed["choices"].is_array() ||
        parsed["choices"].empty() || !parsed["choices"][0].contains("message")) {
        throw BackendError(BackendFault::response_schema, "missing choices[0].message");
    }

    ChatResponse response;
    response.text = parsed["choices"][0]["message"].value("content", std::string());
    if (parsed.contains("usage")) {
        response.prompt_tokens = parsed["usage"].value("prompt_tokens", std::int64_t{0});
        response.completion_tokens = parsed["usage"].value("completion_tokens", std::int64_t{0});
    }
    response.latency = elapsed;
    return response;
}

}  // namespace themis
