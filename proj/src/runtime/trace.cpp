// SPDX-License-Identifier: Apache-2.0
#include "intentops/runtime/trace.hpp"

#include <chrono>
#include <map>
#include <stdexcept>

namespace intentops::runtime {

using nlohmann::json;

namespace {

std::int64_t now_ms()
{
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

} // namespace

EventId Trace::append(EventKind kind, std::string agent, std::optional<EventId> parent, json payload)
{
    std::lock_guard lock(mutex_);
    const EventId id = events_.size() + 1;
    if (!parent && kind != EventKind::UserTurn)
        throw std::logic_error("only a user turn may start a trace tree");
    if (parent && (*parent == 0 || *parent >= id))
        throw std::logic_error("trace parent " + std::to_string(*parent) + " does not exist");
    events_.push_back({id, parent, now_ms(), kind, std::move(agent), std::move(payload)});
    return id;
}

std::vector<TraceEvent> Trace::events() const
{
    std::lock_guard lock(mutex_);
    return events_;
}

std::vector<TraceEvent> Trace::since(EventId cursor) const
{
    std::lock_guard lock(mutex_);
    if (cursor >= events_.size())
        return {};
    return {events_.begin() + static_cast<std::ptrdiff_t>(cursor), events_.end()};
}

EventId Trace::head() const
{
    std::lock_guard lock(mutex_);
    return events_.size();
}

std::string_view to_string(EventKind kind)
{
    switch (kind) {
    case EventKind::UserTurn: return "user_turn";
    case EventKind::Thought: return "thought";
    case EventKind::Delegation: return "delegation";
    case EventKind::ToolCallEvent: return "tool_call";
    case EventKind::ToolResultEvent: return "tool_result";
    case EventKind::AgentResponse: return "agent_response";
    }
    return "user_turn";
}

json encode(const TraceEvent& event)
{
    return {
        {"id", event.id},
        {"parent", event.parent ? json(*event.parent) : json(nullptr)},
        {"timestamp", event.timestamp_ms},
        {"kind", to_string(event.kind)},
        {"agent", event.agent},
        {"payload", event.payload},
    };
}

std::string to_jsonl(std::span<const TraceEvent> events)
{
    std::string out;
    for (const auto& event : events) {
        out += encode(event).dump();
        out += '\n';
    }
    return out;
}

std::vector<std::string> verify_trace_structure(std::span<const TraceEvent> events)
{
    std::vector<std::string> problems;
    std::map<EventId, const TraceEvent*> seen;
    EventId previous = 0;
    for (const auto& event : events) {
        const auto where = "event " + std::to_string(event.id);
        if (event.id <= previous)
            problems.push_back(where + ": id not strictly increasing");
        previous = event.id;
        if (!event.parent) {
            if (event.kind != EventKind::UserTurn)
                problems.push_back(where + ": root is not a user turn");
        } else if (!seen.contains(*event.parent)) {
            problems.push_back(where + ": parent " + std::to_string(*event.parent) + " not emitted before it");
        }
        seen.emplace(event.id, &event);
    }
    return problems;
}

} // namespace intentops::runtime
