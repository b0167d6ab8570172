// SPDX-License-Identifier: Apache-2.0
#include "intentops/decomposer/decomposer.hpp"

namespace intentops::decomposer {

namespace {

constexpr std::string_view kDefaultPrompt =
#include "decompose_prompt.inc"
    ;

std::string join(std::span<const std::string> items, std::string_view separator)
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i)
            out += separator;
        out += items[i];
    }
    return out;
}

} // namespace

LlmBackend::LlmBackend(llm::ChatClient& client, std::string prompt_template)
    : client_(client), prompt_template_(std::move(prompt_template))
{
}

std::string_view LlmBackend::default_prompt_template()
{
    return kDefaultPrompt;
}

std::string LlmBackend::render_prompt(const ProposalRequest& request) const
{
    std::string refs;
    for (const auto& [name, value] : request.thresholds)
        refs += "- " + name + " (currently " + nlohmann::json(value).dump() + ")\n";
    if (refs.empty())
        refs = "(none)\n";

    std::string repair;
    if (!request.previous_violations.empty()) {
        repair = "\nYour previous answer was rejected for these reasons. Fix every one:\n";
        for (const auto& violation : request.previous_violations)
            repair += "- " + violation + "\n";
    }

    return llm::render_template(prompt_template_, {
                                                      {"vocabulary", join(request.vocabulary, ", ")},
                                                      {"threshold_refs", refs},
                                                      {"fleet", request.fleet.describe()},
                                                      {"repair", repair},
                                                  });
}

nlohmann::json LlmBackend::propose(const ProposalRequest& request) const
{
    llm::ChatRequest chat;
    chat.messages.push_back({"system", render_prompt(request)});
    chat.messages.push_back({"user", std::string(request.raw_text)});

    const auto reply = client_.complete(chat);
    auto document = llm::extract_json_document(reply.content);
    if (!document)
        throw llm::MalformedResponse("reply contains no structured intent document");
    return *document;
}

} // namespace intentops::decomposer
