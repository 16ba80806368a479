#pragma once

#include <map>
#include <mutex>
#include <string>

#include "themis/backend.hpp"

namespace themis {

/// Deterministic replay backend. Responses are keyed on
/// (agent_role, trajectory_id, round_index, run_index) rather than prompt
/// text, so prompt-template changes never break recorded transcripts.
/// Identical keys always yield byte-identical responses.
class ScriptedBackend : public Backend {
public:
    struct Entry {
        std::string text;
        std::int64_t prompt_tokens = 100;
        std::int64_t completion_tokens = 10;
        double latency = 0.01;
    };

    ScriptedBackend() = default;

    /// Script file: JSON object mapping "role|trajectory|round|run" to either
    /// a plain response string or {"text","prompt_tokens","completion_tokens","latency"}.
    static ScriptedBackend from_file(const std::string& path);
    static ScriptedBackend from_json(const json& j);

    void add(const RequestKey& key, Entry entry);
    void add(const RequestKey& key, const std::string& text);

    /// Fallback used when no key matches (empty = throw response_schema error).
    void set_default_response(const std::string& text) { default_text_ = text; }

    json to_json() const;
    void save(const std::string& path) const;

    ChatResponse complete(const ChatRequest& request) override;

private:
    std::map<std::string, Entry> entries_;
    std::string default_text_;
    mutable std::mutex mutex_;
};

}  // namespace themis
