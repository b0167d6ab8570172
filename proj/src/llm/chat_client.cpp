// SPDX-License-Identifier: Apache-2.0
#include "intentops/llm/chat_client.hpp"

namespace intentops::llm {

using nlohmann::json;

json build_completion_body(std::string_view model, const ChatRequest& request)
{
    json messages = json::array();
    for (const auto& message : request.messages)
        messages.push_back({{"role", message.role}, {"content", message.content}});
    return {
        {"model", model},
        {"messages", messages},
        {"temperature", request.temperature},
    };
}

ChatReply parse_completion_body(std::string_view body)
{
    json document;
    try {
        document = json::parse(body);
    } catch (const json::parse_error& error) {
        throw MalformedResponse(std::string("completion body is not JSON: ") + error.what());
    }
    const auto choices = document.find("choices");
    if (choices == document.end() || !choices->is_array() || choices->empty())
        throw MalformedResponse("completion body has no choices");
    const auto& message = (*choices)[0].value("message", json::object());
    const auto content = message.find("content");
    if (content == message.end() || !content->is_string())
        throw MalformedResponse("completion choice has no text content");
    return {content->get<std::string>(), std::move(document)};
}

namespace {

std::optional<json> try_parse(std::string_view text)
{
    auto parsed = json::parse(text.begin(), text.end(), nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object())
        return std::nullopt;
    return parsed;
}

std::optional<json> fenced_block(std::string_view text)
{
    std::size_t search = 0;
    while (true) {
        const auto open = text.find("```", search);
        if (open == std::string_view::npos)
            return std::nullopt;
        const auto line_end = text.find('\n', open);
        if (line_end == std::string_view::npos)
            return std::nullopt;
        const auto close = text.find("```", line_end);
        if (close == std::string_view::npos)
            return std::nullopt;
        if (auto parsed = try_parse(text.substr(line_end + 1, close - line_end - 1)))
            return parsed;
        search = close + 3;
    }
}

// Scans for balanced braces outside string literals.
std::optional<json> balanced_object(std::string_view text)
{
    for (std::size_t start = text.find('{'); start != std::string_view::npos; start = text.find('{', start + 1)) {
        int depth = 0;
        bool in_string = false;
        bool escaped = false;
        for (std::size_t i = start; i < text.size(); ++i) {
            const char c = text[i];
            if (in_string) {
                if (escaped)
                    escaped = false;
                else if (c == '\\')
                    escaped = true;
                else if (c == '"')
                    in_string = false;
                continue;
            }
            if (c == '"')
                in_string = true;
            else if (c == '{')
                ++depth;
            else if (c == '}' && --depth == 0) {
                if (auto parsed = try_parse(text.substr(start, i - start + 1)))
                    return parsed;
                break;
            }
        }
    }
    return std::nullopt;
}

} // namespace

std::optional<json> extract_json_document(std::string_view text)
{
    if (auto fenced = fenced_block(text))
        return fenced;
    return balanced_object(text);
}

std::string render_template(std::string_view text,
                            const std::vector<std::pair<std::string, std::string>>& values)
{
    std::string out(text);
    for (const auto& [name, value] : values) {
        const std::string placeholder = "{{" + name + "}}";
        for (auto pos = out.find(placeholder); pos != std::string::npos;
             pos = out.find(placeholder, pos + value.size()))
            out.replace(pos, placeholder.size(), value);
    }
    return out;
}

ReplayChatClient::ReplayChatClient(std::vector<std::string> replies) : replies_(std::move(replies)) {}

ChatReply ReplayChatClient::complete(const ChatRequest& request)
{
    requests_.push_back(request);
    if (next_ >= replies_.size())
        throw BackendUnavailable("replay transcript exhausted");
    return parse_completion_body(replies_[next_++]);
}

} // namespace intentops::llm
