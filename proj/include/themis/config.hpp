#pragma once

#include <string>

#include "themis/http_backend.hpp"
#include "themis/vcm.hpp"

namespace themis {

/// CLI/application configuration: backend endpoint plus pipeline caps and
/// roles. Loadable from a JSON file; THEMIS_ENDPOINT and the configured
/// credential environment variable override the file.
struct AppConfig {
    HttpBackendSettings backend;
    std::string api_key_env = "THEMIS_API_KEY";
    PipelineConfig pipeline;

    static AppConfig from_file(const std::string& path);
    static AppConfig from_json(const json& j);
    void apply_env_overrides();
    json to_json() const;
};

}  // namespace themis
