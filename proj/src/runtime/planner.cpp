// SPDX-License-Identifier: Apache-2.0
#include "intentops/runtime/planner.hpp"

namespace intentops::runtime {

using nlohmann::json;

ScriptedPlanner::ScriptedPlanner(std::map<std::string, std::vector<PlannerStep>> scripts)
    : scripts_(std::move(scripts))
{
}

PlannerStep ScriptedPlanner::next(const PlannerContext& context)
{
    auto key = context.agent.name;
    if (!scripts_.contains(key))
        key = "*";
    const auto script = scripts_.find(key);
    auto& cursor = cursors_[key];
    if (script == scripts_.end() || cursor >= script->second.size())
        return {"", Respond{}};
    return script->second[cursor++];
}

std::unique_ptr<PlannerBackend> scripted_planner(std::vector<PlannerStep> script)
{
    std::map<std::string, std::vector<PlannerStep>> scripts;
    scripts.emplace("*", std::move(script));
    return std::make_unique<ScriptedPlanner>(std::move(scripts));
}

std::unique_ptr<PlannerBackend> scripted_planner(std::map<std::string, std::vector<PlannerStep>> scripts)
{
    return std::make_unique<ScriptedPlanner>(std::move(scripts));
}

namespace {

std::string required_string(const json& document, const char* key)
{
    const auto it = document.find(key);
    if (it == document.end() || !it->is_string())
        throw llm::MalformedResponse(std::string("decision field '") + key + "' missing or not a string");
    return it->get<std::string>();
}

} // namespace

PlannerStep parse_planner_decision(const json& document)
{
    if (!document.is_object())
        throw llm::MalformedResponse("decision is not a document");

    PlannerStep step;
    if (const auto thought = document.find("thought"); thought != document.end() && thought->is_string())
        step.thought = thought->get<std::string>();

    const auto action = required_string(document, "action");
    if (action == "call_tool") {
        ToolCall call{required_string(document, "tool"), document.value("arguments", json::object())};
        step.decision = CallTool{std::move(call)};
    } else if (action == "delegate") {
        step.decision = Delegate{required_string(document, "agent"), document.value("task", std::string{}),
                                 document.value("input", json())};
    } else if (action == "respond") {
        step.decision = Respond{document.value("text", std::string{}), document.value("payload", json())};
    } else {
        throw llm::MalformedResponse("unknown decision action '" + action + "'");
    }
    return step;
}

json encode(const PlannerDecision& decision)
{
    return std::visit(
        [](const auto& value) -> json {
            using T = std::decay_t<decltype(value)>;
            if constexpr (std::is_same_v<T, CallTool>)
                return {{"action", "call_tool"}, {"tool", value.call.tool}, {"arguments", value.call.arguments}};
            else if constexpr (std::is_same_v<T, Delegate>)
                return {{"action", "delegate"}, {"agent", value.agent}, {"task", value.task}, {"input", value.input}};
            else
                return {{"action", "respond"}, {"text", value.text}, {"payload", value.payload}};
        },
        decision);
}

} // namespace intentops::runtime
