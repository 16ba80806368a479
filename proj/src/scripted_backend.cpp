#include "themis/scripted_backend.hpp"

#include <fstream>

namespace themis {

ScriptedBackend ScriptedBackend::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("script file missing: " + path);
    json j;
    in >> j;
    return from_json(j);
}

ScriptedBackend ScriptedBackend::from_json(const json& j) {
    ScriptedBackend backend;
    for (auto it = j.begin(); it != j.end(); ++it) {
        Entry e;
        if (it.value().is_string()) {
            e.text = it.value().get<std::string>();
        } else {
            e.text = it.value().value("text", std::string());
            e.prompt_tokens = it.value().value("prompt_tokens", std::int64_t{100});
            e.completion_tokens = it.value().value("completion_tokens", std::int64_t{10});
            e.latency = it.value().value("latency", 0.01);
        }
        backend.entries_[it.key()] = std::move(e);
    }
    return backend;
}

void ScriptedBackend::add(const RequestKey& key, Entry entry) {
    std::lock_guard<std::mutex> lock(mutex_);
    entries_[key.to_string()] = std::move(entry);
}

void ScriptedBackend::add(const RequestKey& key, const std::string& text) {
    add(key, Entry{text, 100, 10, 0.01});
}

json ScriptedBackend::to_json() const {
    std::lock_guard<std::mutex> lock(mutex_);
    json j = json::object();
    for (const auto& [key, e] : entries_) {
        j[key] = {{"text", e.text},
                  {"prompt_tokens", e.prompt_tokens},
                  {"completion_tokens", e.completion_tokens},
                  {"latency", e.latency}};
    }
    return j;
}

void ScriptedBackend::save(const std::string& path) const {
    std::ofstream out(path);
    out << to_json().dump(2) << '\n';
}

ChatResponse ScriptedBackend::complete(const ChatRequest& request) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = entries_.find(request.key.to_string());
    ChatResponse r;
    if (it == entries_.end()) {
        if (default_text_.empty())
            throw BackendError(BackendFault::response_schema,
                               "no scripted response for key " + request.key.to_string());
        r.text = default_text_;
        r.prompt_tokens = 100;
        r.completion_tokens = 10;
        r.latency = 0.01;
        return r;
    }
    r.text = it->second.text;
    r.prompt_tokens = it->second.prompt_tokens;
    r.completion_tokens = it->second.completion_tokens;
    r.latency = it->second.latency;
    return r;
}

}  // namespace themis
