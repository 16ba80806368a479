#include "themis/config.hpp"

#include <cstdlib>
#include <fstream>

namespace themis {

AppConfig AppConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("config file missing: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw SchemaError("config", std::string("not valid JSON: ") + e.what());
    }
    return from_json(j);
}

AppConfig AppConfig::from_json(const json& j) {
    AppConfig cfg;
    if (j.contains("backend")) {
        const auto& b = j["backend"];
        cfg.backend.endpoint = b.value("endpoint", cfg.backend.endpoint);
        cfg.backend.path = b.value("path", cfg.backend.path);
        cfg.backend.model = b.value("model", cfg.backend.model);
        cfg.backend.timeout_seconds = b.value("timeout_seconds", cfg.backend.timeout_seconds);
        cfg.backend.max_inflight = b.value("max_inflight", cfg.backend.max_inflight);
        cfg.api_key_env = b.value("api_key_env", cfg.api_key_env);
    }
    auto& p = cfg.pipeline;
    if (j.contains("retry")) {
        p.retry.max_retries = j["retry"].value("max_retries", p.retry.max_retries);
        if (j["retry"].contains("backoff_ms")) {
            p.retry.backoff.clear();
            for (const auto& ms : j["retry"]["backoff_ms"])
                p.retry.backoff.push_back(std::chrono::milliseconds(ms.get<int>()));
        }
    }
    if (j.contains("model")) {
        p.model.model_name = j["model"].value("name", p.model.model_name);
        p.model.temperature = j["model"].value("temperature", p.model.temperature);
        p.model.max_output_tokens = j["model"].value("max_output_tokens", p.model.max_output_tokens);
    }
    if (j.contains("mvm")) {
        const auto& m = j["mvm"];
        p.mvm.selector_max_rounds = m.value("selector_max_rounds", p.mvm.selector_max_rounds);
        if (p.mvm.selector_max_rounds < 1)
            throw SchemaError("selector_max_rounds", "must be >= 1");
        p.mvm.verify_all_steps = m.value("verify_all_steps", p.mvm.verify_all_steps);
        p.mvm.use_assignment_goal = m.value("use_assignment_goal", p.mvm.use_assignment_goal);
        p.mvm.selector_sees_screenshots =
            m.value("selector_sees_screenshots", p.mvm.selector_sees_screenshots);
    }
    if (j.contains("vcm")) {
        const auto& v = j["vcm"];
        p.vcm.reviewer_max_rounds = v.value("reviewer_max_rounds", p.vcm.reviewer_max_rounds);
        if (p.vcm.reviewer_max_rounds < 0)
            throw SchemaError("reviewer_max_rounds", "must be >= 0");
        if (v.contains("reviewer_role"))
            p.vcm.reviewer_role = reviewer_role_from_string(v["reviewer_role"].get<std::string>());
        if (v.contains("judge_mode"))
            p.vcm.judge_mode = judge_mode_from_string(v["judge_mode"].get<std::string>());
    }
    p.prompts_dir = j.value("prompts_dir", p.prompts_dir);
    p.audit_log_dir = j.value("audit_log_dir", p.audit_log_dir);
    return cfg;
}

void AppConfig::apply_env_overrides() {
    if (const char* endpoint = std::getenv("THEMIS_ENDPOINT")) backend.endpoint = endpoint;
    if (!api_key_env.empty()) {
        if (const char* key = std::getenv(api_key_env.c_str())) backend.api_key = key;
    }
}

json AppConfig::to_json() const {
    json backoff = json::array();
    for (const auto& ms : pipeline.retry.backoff) backoff.push_back(ms.count());
    return json{
        {"backend",
         {{"endpoint", backend.endpoint},
          {"path", backend.path},
          {"model", backend.model},
          {"timeout_seconds", backend.timeout_seconds},
          {"max_inflight", backend.max_inflight},
          {"api_key_env", api_key_env}}},
        {"retry", {{"max_retries", pipeline.retry.max_retries}, {"backoff_ms", backoff}}},
        {"model",
         {{"name", pipeline.model.model_name},
          {"temperature", pipeline.model.temperature},
          {"max_output_tokens", pipeline.model.max_output_tokens}}},
        {"mvm",
         {{"selector_max_rounds", pipeline.mvm.selector_max_rounds},
          {"verify_all_steps", pipeline.mvm.verify_all_steps},
          {"use_assignment_goal", pipeline.mvm.use_assignment_goal},
          {"selector_sees_screenshots", pipeline.mvm.selector_sees_screenshots}}},
        {"vcm",
         {{"reviewer_max_rounds", pipeline.vcm.reviewer_max_rounds},
          {"reviewer_role", to_string(pipeline.vcm.reviewer_role)},
          {"judge_mode", to_string(pipeline.vcm.judge_mode)}}},
        {"prompts_dir", pipeline.prompts_dir},
        {"audit_log_dir", pipeline.audit_log_dir}};
}

}  // namespace themis
