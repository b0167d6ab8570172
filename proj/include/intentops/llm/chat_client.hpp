// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include <chrono>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace intentops::llm {

/// Transport-level failure talking to the model endpoint.
class BackendUnavailable : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// The model replied, but no structured document could be recovered.
class MalformedResponse : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct ChatMessage
{
    std::string role;
    std::string content;
};

struct ChatRequest
{
    std::vector<ChatMessage> messages;
    double temperature = 0.0;
};

struct ChatReply
{
    std::string content;
    nlohmann::json raw;
};

class ChatClient
{
public:
    virtual ~ChatClient() = default;

    virtual ChatReply complete(const ChatRequest& request) = 0;
};

struct EndpointConfig
{
    std::string base_url;
    std::string model;
    /// Name of the environment variable holding the bearer credential.
    std::string api_key_env = "OPENAI_API_KEY";
    int max_in_flight = 4;
    std::chrono::seconds timeout{60};
};

/// Chat-completions request body for `model`.
nlohmann::json build_completion_body(std::string_view model, const ChatRequest& request);

/// Extracts choices[0].message.content. Throws MalformedResponse.
ChatReply parse_completion_body(std::string_view body);

/// Finds the structured part of a model reply: the first fenced ```json block,
/// otherwise the first balanced top-level {...} that parses.
std::optional<nlohmann::json> extract_json_document(std::string_view text);

/// Substitutes `{{name}}` placeholders. Unknown placeholders are left as-is.
std::string render_template(std::string_view text,
                            const std::vector<std::pair<std::string, std::string>>& values);

/// Chat-completions over HTTP(S). Limits concurrent requests to
/// `max_in_flight`; the credential is read from the environment per request.
std::unique_ptr<ChatClient> make_http_chat_client(EndpointConfig config);

/// Replays canned replies in order and records every request it receives.
class ReplayChatClient : public ChatClient
{
public:
    explicit ReplayChatClient(std::vector<std::string> replies);

    ChatReply complete(const ChatRequest& request) override;

    const std::vector<ChatRequest>& requests() const { return requests_; }

private:
    std::vector<std::string> replies_;
    std::size_t next_ = 0;
    std::vector<ChatRequest> requests_;
};

} // namespace intentops::llm
