// SPDX-License-Identifier: Apache-2.0
#include "intentops/runtime/runtime.hpp"

#include "intentops/intent/intent_json.hpp"

#include <algorithm>
#include <stdexcept>

namespace intentops::runtime {

using nlohmann::json;

namespace {

struct AgentOutcome
{
    std::string text;
    json payload;
    bool budget_exceeded = false;
};

class TurnExecutor
{
public:
    TurnExecutor(Session& session, const intent::Intent& intent, const AgentDirectory& agents,
                 PlannerBackend& planner, const ToolRegistry& tools, ConfirmationGate& gate,
                 const RuntimeOptions& options, TurnResult& result)
        : session_(session), intent_(intent), agents_(agents), planner_(planner), tools_(tools), gate_(gate),
          options_(options), result_(result)
    {
    }

    AgentOutcome run_agent(const AgentSpec& agent, std::string_view task, const json& input, int depth,
                           EventId frame)
    {
        result_.max_depth = std::max(result_.max_depth, depth);
        std::vector<Observation> observations;

        for (int step = 0; step < agent.max_steps; ++step) {
            const PlannerContext context{agent, intent_, task, input, observations, step, depth, tools_};
            auto planned = planner_.next(context);
            ++session_.budget_consumed;
            ++result_.decisions;

            EventId parent = frame;
            if (!planned.thought.empty())
                parent = session_.trace.append(EventKind::Thought, agent.name, frame, {{"text", planned.thought}});

            if (auto* call = std::get_if<CallTool>(&planned.decision)) {
                observations.push_back(call_tool(agent, call->call, parent));
            } else if (auto* delegate = std::get_if<Delegate>(&planned.decision)) {
                observations.push_back(delegate_to(agent, *delegate, depth, parent));
            } else {
                auto& respond = std::get<Respond>(planned.decision);
                json payload = respond.payload.is_null() ? last_success(observations) : respond.payload;
                session_.trace.append(EventKind::AgentResponse, agent.name, parent,
                                      {{"text", respond.text}, {"payload", payload}});
                return {std::move(respond.text), std::move(payload), false};
            }
        }

        auto summary = budget_summary(agent, observations);
        json payload = last_success(observations);
        session_.trace.append(EventKind::AgentResponse, agent.name, frame,
                              {{"text", summary}, {"payload", payload}, {"budget_exceeded", true}});
        return {std::move(summary), std::move(payload), true};
    }

private:
    Observation call_tool(const AgentSpec& agent, const ToolCall& call, EventId parent)
    {
        ++result_.tool_calls;
        const auto call_event = session_.trace.append(EventKind::ToolCallEvent, agent.name, parent, encode(call));

        const bool allowed =
            std::find(agent.tool_names.begin(), agent.tool_names.end(), call.tool) != agent.tool_names.end();
        const auto result = allowed ? invoke_tool(tools_, call, gate_)
                                    : ToolResult::failure(ToolErrorKind::UnknownTool,
                                                          {{"tool", call.tool}, {"agent", agent.name}});
        session_.trace.append(EventKind::ToolResultEvent, agent.name, call_event, encode(result));

        Observation observation;
        observation.source = Observation::Source::Tool;
        observation.name = call.tool;
        observation.ok = result.ok();
        observation.payload = result.payload;
        if (result.error_kind)
            observation.error = std::string(to_string(*result.error_kind));
        return observation;
    }

    Observation delegate_to(const AgentSpec& agent, const Delegate& delegate, int depth, EventId parent)
    {
        Observation observation;
        observation.source = Observation::Source::SubAgent;
        observation.name = delegate.agent;

        json event = {{"to", delegate.agent}, {"task", delegate.task}, {"input", delegate.input}};
        const AgentSpec* sub = nullptr;
        if (std::find(agent.sub_agent_names.begin(), agent.sub_agent_names.end(), delegate.agent) !=
            agent.sub_agent_names.end())
            sub = agents_.find(delegate.agent);

        if (!sub)
            observation.error = "unknown_agent";
        else if (depth + 1 > options_.delegation_depth_limit)
            observation.error = "delegation_depth_exceeded";

        if (!observation.error.empty()) {
            event["rejected"] = observation.error;
            session_.trace.append(EventKind::Delegation, agent.name, parent, std::move(event));
            observation.ok = false;
            observation.payload = {{"agent", delegate.agent}, {"depth_limit", options_.delegation_depth_limit}};
            return observation;
        }

        const auto frame = session_.trace.append(EventKind::Delegation, agent.name, parent, std::move(event));
        auto outcome = run_agent(*sub, delegate.task, delegate.input, depth + 1, frame);
        observation.ok = !outcome.budget_exceeded;
        observation.text = std::move(outcome.text);
        observation.payload = std::move(outcome.payload);
        if (outcome.budget_exceeded)
            observation.error = "budget_exceeded";
        return observation;
    }

    static json last_success(const std::vector<Observation>& observations)
    {
        for (auto it = observations.rbegin(); it != observations.rend(); ++it)
            if (it->ok)
                return it->payload;
        return nullptr;
    }

    static std::string budget_summary(const AgentSpec& agent, const std::vector<Observation>& observations)
    {
        const auto failures = std::count_if(observations.begin(), observations.end(),
                                            [](const Observation& o) { return !o.ok; });
        return "BudgetExceeded: " + agent.name + " used all " + std::to_string(agent.max_steps) + " steps (" +
               std::to_string(observations.size()) + " observations, " + std::to_string(failures) +
               " failed) without responding";
    }

    Session& session_;
    const intent::Intent& intent_;
    const AgentDirectory& agents_;
    PlannerBackend& planner_;
    const ToolRegistry& tools_;
    ConfirmationGate& gate_;
    const RuntimeOptions& options_;
    TurnResult& result_;
};

} // namespace

TurnResult run_turn(Session& session,
                    const intent::Intent& intent,
                    const AgentDirectory& agents,
                    std::string_view root_agent,
                    PlannerBackend& planner,
                    const ToolRegistry& tools,
                    ConfirmationGate& gate,
                    const RuntimeOptions& options)
{
    if (const auto violations = intent::validate_intent(intent); !violations.empty())
        throw std::invalid_argument("intent is invalid: " + violations.front());
    if (const auto problems = agents.validate(tools); !problems.empty())
        throw InvalidAgentGraph(problems.front());
    const AgentSpec* root = agents.find(root_agent);
    if (!root)
        throw InvalidAgentGraph("unknown root agent '" + std::string(root_agent) + "'");

    TurnResult result;
    result.root_event = session.trace.append(EventKind::UserTurn, "user", std::nullopt,
                                             {{"text", intent.raw_text}, {"intent_id", intent.id}});
    session.history.push_back({"user", intent.raw_text});

    TurnExecutor executor(session, intent, agents, planner, tools, gate, options, result);
    AgentOutcome outcome;
    try {
        outcome = executor.run_agent(*root, intent.raw_text, intent::encode(intent), 0, result.root_event);
    } catch (const std::exception& error) {
        session.trace.append(EventKind::AgentResponse, root->name, result.root_event,
                             {{"text", std::string("turn aborted: ") + error.what()}, {"error", true}});
        throw;
    }

    result.response = std::move(outcome.text);
    result.payload = std::move(outcome.payload);
    result.budget_exceeded = outcome.budget_exceeded;
    result.pending_confirmation = gate.pending();
    session.pending_confirmation = gate.pending();
    session.history.push_back({"agent", result.response});
    return result;
}

TurnResult run_confirmation(Session& session,
                            const PendingConfirmation& confirmed,
                            std::string_view agent,
                            const ToolRegistry& tools)
{
    TurnResult result;
    result.root_event =
        session.trace.append(EventKind::UserTurn, "user", std::nullopt, {{"confirm", confirmed.token}});
    session.history.push_back({"user", "confirm " + confirmed.token});

    ConfirmationGate gate;
    gate.approve(confirmed);
    json outcomes = json::array();
    std::string summary;
    bool all_ok = true;
    for (const auto& call : confirmed.calls) {
        ++result.tool_calls;
        const auto call_event =
            session.trace.append(EventKind::ToolCallEvent, std::string(agent), result.root_event, encode(call));
        const auto tool_result = invoke_tool(tools, call, gate);
        session.trace.append(EventKind::ToolResultEvent, std::string(agent), call_event, encode(tool_result));
        all_ok = all_ok && tool_result.ok();
        outcomes.push_back({{"call", encode(call)}, {"result", encode(tool_result)}});
    }

    result.response = all_ok ? "Confirmed: executed " + std::to_string(confirmed.calls.size()) + " critical action(s)"
                             : "Confirmed, but some critical actions failed";
    result.payload = {{"executed", outcomes}};
    session.trace.append(EventKind::AgentResponse, std::string(agent), result.root_event,
                         {{"text", result.response}, {"payload", result.payload}});
    session.pending_confirmation.reset();
    session.history.push_back({"agent", result.response});
    return result;
}

} // namespace intentops::runtime
