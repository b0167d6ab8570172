// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "intentops/intent/intent.hpp"
#include "intentops/runtime/agent.hpp"
#include "intentops/runtime/confirmation.hpp"
#include "intentops/runtime/planner.hpp"
#include "intentops/runtime/tool.hpp"
#include "intentops/runtime/trace.hpp"

#include <json.hpp>

#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace intentops::runtime {

struct ConversationTurn
{
    std::string role;
    std::string text;
};

class Session
{
public:
    explicit Session(std::string id) : id_(std::move(id)) {}

    const std::string& id() const { return id_; }

    std::vector<ConversationTurn> history;
    Trace trace;
    int budget_consumed = 0;
    std::optional<PendingConfirmation> pending_confirmation;

private:
    std::string id_;
};

struct RuntimeOptions
{
    int delegation_depth_limit = 3;
};

struct TurnResult
{
    std::string response;
    nlohmann::json payload;
    bool budget_exceeded = false;
    int decisions = 0;
    int tool_calls = 0;
    /// Deepest delegation level reached; the root runs at 0.
    int max_depth = 0;
    std::optional<PendingConfirmation> pending_confirmation;
    EventId root_event = 0;
};

/// Runs one user turn: the root agent's planner decides, tools run through
/// `gate`, sub-agents run their own loops and report back a single response.
///
/// Tool and delegation failures are fed back to the planner as observations.
/// Exceptions from the planner propagate after the turn is closed in the
/// trace. Throws std::invalid_argument for an invalid intent and
/// InvalidAgentGraph for a topology that does not validate.
TurnResult run_turn(Session& session,
                    const intent::Intent& intent,
                    const AgentDirectory& agents,
                    std::string_view root_agent,
                    PlannerBackend& planner,
                    const ToolRegistry& tools,
                    ConfirmationGate& gate,
                    const RuntimeOptions& options = {});

/// Runs an approved batch of deferred calls as a turn of its own.
TurnResult run_confirmation(Session& session,
                            const PendingConfirmation& confirmed,
                            std::string_view agent,
                            const ToolRegistry& tools);

} // namespace intentops::runtime
