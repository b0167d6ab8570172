// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include <functional>
#include <map>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace intentops::runtime {

class ConfirmationGate;

/// Semantic type of a tool parameter or return value.
enum class ValueKind { String, Int, Float, Bool, Enum, IntList, Document };

struct TypeTag
{
    ValueKind kind = ValueKind::String;
    std::vector<std::string> enum_values;

    static TypeTag string() { return {ValueKind::String, {}}; }
    static TypeTag integer() { return {ValueKind::Int, {}}; }
    static TypeTag floating() { return {ValueKind::Float, {}}; }
    static TypeTag boolean() { return {ValueKind::Bool, {}}; }
    static TypeTag one_of(std::vector<std::string> values) { return {ValueKind::Enum, std::move(values)}; }
    static TypeTag int_list() { return {ValueKind::IntList, {}}; }
    static TypeTag document() { return {ValueKind::Document, {}}; }
};

struct ParamSpec
{
    std::string name;
    TypeTag type;
    bool required = true;
    std::string description;
};

/// Critical is the strongest form of Mutating: it changes state and also
/// needs operator confirmation.
enum class Effect { ReadOnly, Mutating, Critical };

constexpr bool is_mutating(Effect effect) noexcept
{
    return effect != Effect::ReadOnly;
}

struct ToolSpec
{
    std::string name;
    std::string description;
    std::vector<ParamSpec> params;
    TypeTag returns = TypeTag::document();
    std::string returns_description;
    Effect effect = Effect::ReadOnly;
};

struct ToolCall
{
    std::string tool;
    nlohmann::json arguments = nlohmann::json::object();

    bool operator==(const ToolCall&) const = default;
};

enum class ToolStatus { Ok, Err };
enum class ToolErrorKind { UnknownTool, SchemaViolation, ConfirmationRequired, ExecutionFailed };

struct ToolResult
{
    ToolStatus status = ToolStatus::Ok;
    nlohmann::json payload;
    std::optional<ToolErrorKind> error_kind;

    bool ok() const { return status == ToolStatus::Ok; }

    static ToolResult success(nlohmann::json payload);
    static ToolResult failure(ToolErrorKind kind, nlohmann::json payload);
};

/// Receives arguments that already passed schema validation.
using ToolHandler = std::function<ToolResult(const nlohmann::json& arguments)>;

struct ParamViolation
{
    std::string param;
    std::string detail;
};

/// Presence and type checks; unexpected parameters are violations too.
std::vector<ParamViolation> validate_arguments(const ToolSpec& spec, const nlohmann::json& arguments);

class DuplicateToolName : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

class ToolRegistry
{
public:
    ToolRegistry() = default;
    ToolRegistry(const ToolRegistry&) = delete;
    ToolRegistry& operator=(const ToolRegistry&) = delete;

    void register_tool(ToolSpec spec, ToolHandler handler);

    std::optional<ToolSpec> resolve(std::string_view name) const;
    bool contains(std::string_view name) const;
    /// In registration order.
    std::vector<ToolSpec> specs() const;

    friend ToolResult invoke_tool(const ToolRegistry& registry, const ToolCall& call, ConfirmationGate& gate);

private:
    struct Entry
    {
        ToolSpec spec;
        ToolHandler handler;
    };

    mutable std::shared_mutex mutex_;
    std::map<std::string, Entry, std::less<>> entries_;
    std::vector<std::string> order_;
};

/// Validates the call, applies the confirmation gate to Critical tools and
/// runs the handler. Never throws for bad calls; failures are Err results.
ToolResult invoke_tool(const ToolRegistry& registry, const ToolCall& call, ConfirmationGate& gate);

std::string_view to_string(ValueKind kind);
std::string_view to_string(Effect effect);
std::string_view to_string(ToolErrorKind kind);

nlohmann::json describe(const ToolSpec& spec);
nlohmann::json encode(const ToolCall& call);
nlohmann::json encode(const ToolResult& result);

} // namespace intentops::runtime
