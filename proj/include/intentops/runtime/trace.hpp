// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace intentops::runtime {

enum class EventKind { UserTurn, Thought, Delegation, ToolCallEvent, ToolResultEvent, AgentResponse };

using EventId = std::uint64_t;

struct TraceEvent
{
    EventId id = 0;
    std::optional<EventId> parent;
    std::int64_t timestamp_ms = 0;
    EventKind kind = EventKind::UserTurn;
    std::string agent;
    nlohmann::json payload;
};

/// Append-only causal record. Each turn is a tree rooted at its UserTurn;
/// ids start at 1 and increase in emission order. Appends are atomic, so
/// readers may poll while a turn is running.
class Trace
{
public:
    Trace() = default;
    Trace(const Trace&) = delete;
    Trace& operator=(const Trace&) = delete;

    /// Only UserTurn events may omit the parent; a parent must already exist.
    /// Throws std::logic_error otherwise.
    EventId append(EventKind kind, std::string agent, std::optional<EventId> parent, nlohmann::json payload);

    std::vector<TraceEvent> events() const;
    /// Events with id > cursor, in order.
    std::vector<TraceEvent> since(EventId cursor) const;
    /// Id of the newest event, or 0 when empty.
    EventId head() const;

private:
    mutable std::mutex mutex_;
    std::vector<TraceEvent> events_;
};

std::string_view to_string(EventKind kind);

nlohmann::json encode(const TraceEvent& event);
/// One event per line.
std::string to_jsonl(std::span<const TraceEvent> events);

/// Structural problems with a trace: non-increasing ids, dangling or forward
/// parents, roots that are not UserTurn. Empty means well formed.
std::vector<std::string> verify_trace_structure(std::span<const TraceEvent> events);

} // namespace intentops::runtime
