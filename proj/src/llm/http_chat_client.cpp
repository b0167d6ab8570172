// SPDX-License-Identifier: Apache-2.0
#include "intentops/llm/chat_client.hpp"

#include <httplib.h>

#include <cstdlib>
#include <semaphore>

namespace intentops::llm {

namespace {

struct SplitUrl
{
    std::string origin;
    std::string path_prefix;
};

SplitUrl split_base_url(const std::string& base_url)
{
    const auto scheme_end = base_url.find("://");
    const auto host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    const auto path_start = base_url.find('/', host_start);
    if (path_start == std::string::npos)
        return {base_url, ""};
    auto prefix = base_url.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/')
        prefix.pop_back();
    return {base_url.substr(0, path_start), prefix};
}

class HttpChatClient final : public ChatClient
{
public:
    explicit HttpChatClient(EndpointConfig config)
        : config_(std::move(config)), url_(split_base_url(config_.base_url)),
          slots_(std::max(1, config_.max_in_flight))
    {
    }

    ChatReply complete(const ChatRequest& request) override
    {
        slots_.acquire();
        struct Release
        {
            std::counting_semaphore<>& slots;
            ~Release() { slots.release(); }
        } release{slots_};

        httplib::Client client(url_.origin);
        client.set_connection_timeout(config_.timeout);
        client.set_read_timeout(config_.timeout);

        httplib::Headers headers;
        if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key)
            headers.emplace("Authorization", std::string("Bearer ") + key);

        const auto body = build_completion_body(config_.model, request).dump();
        auto response = client.Post(url_.path_prefix + "/chat/completions", headers, body, "application/json");
        if (!response)
            throw BackendUnavailable("chat endpoint unreachable: " + httplib::to_string(response.error()));
        if (response->status != 200)
            throw BackendUnavailable("chat endpoint returned HTTP " + std::to_string(response->status) + ": " +
                                     response->body.substr(0, 200));
        return parse_completion_body(response->body);
    }

private:
    EndpointConfig config_;
    SplitUrl url_;
    std::counting_semaphore<> slots_;
};

} // namespace

std::unique_ptr<ChatClient> make_http_chat_client(EndpointConfig config)
{
    return std::make_unique<HttpChatClient>(std::move(config));
}

} // namespace intentops::llm
