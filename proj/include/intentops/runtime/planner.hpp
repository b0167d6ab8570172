// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "intentops/intent/intent.hpp"
#include "intentops/llm/chat_client.hpp"
#include "intentops/runtime/agent.hpp"
#include "intentops/runtime/tool.hpp"

#include <json.hpp>

#include <map>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace intentops::runtime {

struct CallTool
{
    ToolCall call;
};

/// `input` carries structured data for the sub-agent alongside the task text.
struct Delegate
{
    std::string agent;
    std::string task;
    nlohmann::json input;
};

/// Ends the acting agent's loop. A null payload is replaced by the payload of
/// the agent's last successful observation.
struct Respond
{
    std::string text;
    nlohmann::json payload;
};

using PlannerDecision = std::variant<CallTool, Delegate, Respond>;

struct PlannerStep
{
    /// Reasoning recorded as a Thought event before the action; may be empty.
    std::string thought;
    PlannerDecision decision;
};

/// What the acting agent saw after one of its decisions.
struct Observation
{
    enum class Source { Tool, SubAgent };

    Source source = Source::Tool;
    /// Tool or sub-agent name.
    std::string name;
    bool ok = true;
    nlohmann::json payload;
    /// Error kind for failed observations ("schema_violation", "unknown_tool", ...).
    std::string error;
    /// Sub-agent response text.
    std::string text;
};

struct PlannerContext
{
    const AgentSpec& agent;
    const intent::Intent& intent;
    std::string_view task;
    const nlohmann::json& task_input;
    std::span<const Observation> observations;
    int step = 0;
    int depth = 0;
    const ToolRegistry& tools;
};

class PlannerBackend
{
public:
    virtual ~PlannerBackend() = default;

    virtual PlannerStep next(const PlannerContext& context) = 0;
};

/// Replays fixed decisions. Scripts are keyed by agent name; the "*" key is a
/// shared fallback queue. An agent whose script is exhausted responds with an
/// empty text immediately.
class ScriptedPlanner final : public PlannerBackend
{
public:
    explicit ScriptedPlanner(std::map<std::string, std::vector<PlannerStep>> scripts);

    PlannerStep next(const PlannerContext& context) override;

private:
    std::map<std::string, std::vector<PlannerStep>> scripts_;
    std::map<std::string, std::size_t> cursors_;
};

std::unique_ptr<PlannerBackend> scripted_planner(std::vector<PlannerStep> script);
std::unique_ptr<PlannerBackend> scripted_planner(std::map<std::string, std::vector<PlannerStep>> scripts);

/// Drives decisions through a chat-completion model. The client is borrowed.
class LlmPlanner final : public PlannerBackend
{
public:
    explicit LlmPlanner(llm::ChatClient& client, std::string prompt_template = std::string(default_prompt_template()));

    /// Throws llm::BackendUnavailable or llm::MalformedResponse.
    PlannerStep next(const PlannerContext& context) override;

    std::string render_prompt(const PlannerContext& context) const;
    static std::string_view default_prompt_template();

private:
    llm::ChatClient& client_;
    std::string prompt_template_;
};

/// Parses a model decision document. Throws llm::MalformedResponse.
PlannerStep parse_planner_decision(const nlohmann::json& document);

nlohmann::json encode(const PlannerDecision& decision);

} // namespace intentops::runtime
