// SPDX-License-Identifier: Apache-2.0
#include "intentops/intent/intent_json.hpp"
#include "intentops/runtime/planner.hpp"

namespace intentops::runtime {

using nlohmann::json;

namespace {

constexpr std::string_view kDefaultPrompt =
#include "plan_step_prompt.inc"
    ;

// Observations can carry whole fleet snapshots; keep the prompt bounded.
constexpr std::size_t kObservationBudget = 6000;

std::string clipped(std::string text)
{
    if (text.size() > kObservationBudget)
        text = text.substr(0, kObservationBudget) + "...(truncated)";
    return text;
}

} // namespace

LlmPlanner::LlmPlanner(llm::ChatClient& client, std::string prompt_template)
    : client_(client), prompt_template_(std::move(prompt_template))
{
}

std::string_view LlmPlanner::default_prompt_template()
{
    return kDefaultPrompt;
}

std::string LlmPlanner::render_prompt(const PlannerContext& context) const
{
    std::string tools;
    for (const auto& name : context.agent.tool_names)
        if (const auto spec = context.tools.resolve(name))
            tools += "- " + describe(*spec).dump() + "\n";
    if (tools.empty())
        tools = "(none)\n";

    std::string sub_agents;
    for (const auto& name : context.agent.sub_agent_names)
        sub_agents += (sub_agents.empty() ? "" : ", ") + name;
    if (sub_agents.empty())
        sub_agents = "(none)";

    std::string observations;
    for (const auto& observation : context.observations) {
        json entry = {
            {"source", observation.source == Observation::Source::Tool ? "tool" : "agent"},
            {"name", observation.name},
            {"ok", observation.ok},
            {"payload", observation.payload},
        };
        if (!observation.error.empty())
            entry["error"] = observation.error;
        if (!observation.text.empty())
            entry["text"] = observation.text;
        observations += "- " + clipped(entry.dump()) + "\n";
    }
    if (observations.empty())
        observations = "(nothing yet)\n";

    return llm::render_template(prompt_template_, {
                                                      {"agent", context.agent.name},
                                                      {"role", context.agent.role_instructions},
                                                      {"intent", intent::encode(context.intent).dump()},
                                                      {"task", std::string(context.task)},
                                                      {"task_input", context.task_input.dump()},
                                                      {"tools", tools},
                                                      {"sub_agents", sub_agents},
                                                      {"observations", observations},
                                                  });
}

PlannerStep LlmPlanner::next(const PlannerContext& context)
{
    llm::ChatRequest request;
    request.messages.push_back({"system", render_prompt(context)});
    request.messages.push_back({"user", context.intent.raw_text});

    const auto reply = client_.complete(request);
    const auto document = llm::extract_json_document(reply.content);
    if (!document)
        throw llm::MalformedResponse("planner reply contains no decision document");
    return parse_planner_decision(*document);
}

} // namespace intentops::runtime
