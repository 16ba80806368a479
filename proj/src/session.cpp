#include "themis/session.hpp"

namespace themis {

TranscriptLogger::TranscriptLogger(const std::string& path) : out_(path, std::ios::app) {
    if (!out_) throw Error("cannot open transcript log: " + path);
}

void TranscriptLogger::log(const json& entry) {
    std::lock_guard<std::mutex> lock(mutex_);
    out_ << entry.dump() << '\n';
    out_.flush();
}

PipelineSession::PipelineSession(std::string trajectory_id, int selector_max_rounds,
                                 int reviewer_max_rounds, RetryPolicy retry, ModelParams params,
                                 int run_index, TranscriptLogger* transcript)
    : trajectory_id_(std::move(trajectory_id)),
      selector_max_rounds_(selector_max_rounds),
      reviewer_max_rounds_(reviewer_max_rounds),
      retry_(std::move(retry)),
      params_(std::move(params)),
      run_index_(run_index),
      transcript_(transcript) {}

void PipelineSession::consume_selector_round() {
    if (selector_rounds_ >= selector_max_rounds_)
        throw Error("selector round bound exceeded (" + std::to_string(selector_max_rounds_) + ")");
    ++selector_rounds_;
}

void PipelineSession::consume_reviewer_round() {
    if (reviewer_rounds_ >= reviewer_max_rounds_)
        throw Error("reviewer round bound exceeded (" + std::to_string(reviewer_max_rounds_) + ")");
    ++reviewer_rounds_;
}

ChatResponse PipelineSession::call(Backend& backend, const std::string& role, ChatRequest request,
                                   const ResponseValidator& validator) {
    request.key = RequestKey{role, trajectory_id_, role_rounds_[role]++, run_index_};
    if (request.model_name.empty()) request.model_name = params_.model_name;
    request.temperature = params_.temperature;
    request.max_output_tokens = params_.max_output_tokens;

    int attempts = 0;
    auto observer = [&](const ChatRequest& req, const ChatResponse* response,
                        const BackendError* error) {
        ++attempts;
        if (response) {
            usage_.prompt_tokens += response->prompt_tokens;
            usage_.completion_tokens += response->completion_tokens;
            usage_.calls += 1;
            usage_.wall_latency += response->latency;
        }
        if (transcript_) {
            json entry = {{"trajectory_id", trajectory_id_},
                          {"role", req.key.agent_role},
                          {"round", req.key.round_index},
                          {"run", req.key.run_index},
                          {"attempt", attempts}};
            json messages = json::array();
            for (const auto& m : req.messages) {
                messages.push_back(
                    {{"role", m.role == ChatMessage::Role::system ? "system" : "user"},
                     {"text", m.text},
                     {"images", m.images.size()}});
            }
            entry["request"] = std::move(messages);
            if (response) {
                entry["response"] = {{"text", response->text},
                                     {"prompt_tokens", response->prompt_tokens},
                                     {"completion_tokens", response->completion_tokens},
                                     {"validated", response->validated}};
            } else if (error) {
                entry["error"] = error->what();
            }
            transcript_->log(entry);
        }
    };

    ChatResponse response;
    try {
        response = complete_with_retry(backend, request, retry_, validator, observer);
    } catch (...) {
        retries_ += std::max(0, attempts - 1);
        max_attempts_per_call_ = std::max(max_attempts_per_call_, attempts);
        throw;
    }
    retries_ += attempts - 1;
    max_attempts_per_call_ = std::max(max_attempts_per_call_, attempts);
    return response;
}

}  // namespace themis
