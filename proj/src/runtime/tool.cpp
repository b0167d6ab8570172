// SPDX-License-Identifier: Apache-2.0
#include "intentops/runtime/tool.hpp"

#include "intentops/runtime/confirmation.hpp"

#include <algorithm>
#include <mutex>
#include <set>

namespace intentops::runtime {

using nlohmann::json;

ToolResult ToolResult::success(json payload)
{
    return {ToolStatus::Ok, std::move(payload), std::nullopt};
}

ToolResult ToolResult::failure(ToolErrorKind kind, json payload)
{
    return {ToolStatus::Err, std::move(payload), kind};
}

namespace {

std::optional<std::string> type_mismatch(const TypeTag& type, const json& value)
{
    switch (type.kind) {
    case ValueKind::String:
        if (!value.is_string())
            return "expected string";
        break;
    case ValueKind::Int:
        if (!value.is_number_integer())
            return "expected int";
        break;
    case ValueKind::Float:
        if (!value.is_number())
            return "expected float";
        break;
    case ValueKind::Bool:
        if (!value.is_boolean())
            return "expected bool";
        break;
    case ValueKind::Enum:
        if (!value.is_string() ||
            std::find(type.enum_values.begin(), type.enum_values.end(), value.get<std::string>()) ==
                type.enum_values.end()) {
            std::string allowed;
            for (const auto& option : type.enum_values)
                allowed += (allowed.empty() ? "" : "|") + option;
            return "expected one of " + allowed;
        }
        break;
    case ValueKind::IntList:
        if (!value.is_array() ||
            !std::all_of(value.begin(), value.end(), [](const json& item) { return item.is_number_integer(); }))
            return "expected list of int";
        break;
    case ValueKind::Document:
        if (!value.is_object())
            return "expected document";
        break;
    }
    return std::nullopt;
}

} // namespace

std::vector<ParamViolation> validate_arguments(const ToolSpec& spec, const json& arguments)
{
    std::vector<ParamViolation> violations;
    if (!arguments.is_object()) {
        violations.push_back({"", "arguments must be a document"});
        return violations;
    }
    std::set<std::string> known;
    for (const auto& param : spec.params) {
        known.insert(param.name);
        const auto it = arguments.find(param.name);
        if (it == arguments.end() || it->is_null()) {
            if (param.required)
                violations.push_back({param.name, "required parameter missing"});
            continue;
        }
        if (auto mismatch = type_mismatch(param.type, *it))
            violations.push_back({param.name, std::move(*mismatch)});
    }
    for (const auto& [name, value] : arguments.items())
        if (!known.contains(name))
            violations.push_back({name, "unexpected parameter"});
    return violations;
}

void ToolRegistry::register_tool(ToolSpec spec, ToolHandler handler)
{
    std::unique_lock lock(mutex_);
    if (spec.name.empty())
        throw std::invalid_argument("tool name must not be empty");
    if (entries_.contains(spec.name))
        throw DuplicateToolName("tool '" + spec.name + "' is already registered");
    auto name = spec.name;
    order_.push_back(name);
    entries_.emplace(std::move(name), Entry{std::move(spec), std::move(handler)});
}

std::optional<ToolSpec> ToolRegistry::resolve(std::string_view name) const
{
    std::shared_lock lock(mutex_);
    const auto it = entries_.find(name);
    if (it == entries_.end())
        return std::nullopt;
    return it->second.spec;
}

bool ToolRegistry::contains(std::string_view name) const
{
    std::shared_lock lock(mutex_);
    return entries_.find(name) != entries_.end();
}

std::vector<ToolSpec> ToolRegistry::specs() const
{
    std::shared_lock lock(mutex_);
    std::vector<ToolSpec> out;
    out.reserve(order_.size());
    for (const auto& name : order_)
        out.push_back(entries_.find(name)->second.spec);
    return out;
}

ToolResult invoke_tool(const ToolRegistry& registry, const ToolCall& call, ConfirmationGate& gate)
{
    ToolSpec spec;
    ToolHandler handler;
    {
        std::shared_lock lock(registry.mutex_);
        const auto it = registry.entries_.find(call.tool);
        if (it == registry.entries_.end())
            return ToolResult::failure(ToolErrorKind::UnknownTool, {{"tool", call.tool}});
        spec = it->second.spec;
        handler = it->second.handler;
    }

    if (const auto violations = validate_arguments(spec, call.arguments); !violations.empty()) {
        json details = json::array();
        for (const auto& violation : violations)
            details.push_back({{"param", violation.param}, {"detail", violation.detail}});
        return ToolResult::failure(ToolErrorKind::SchemaViolation, {{"tool", call.tool}, {"violations", details}});
    }

    if (spec.effect == Effect::Critical && gate.admit(call) == ConfirmationGate::Verdict::Deferred)
        return ToolResult::failure(ToolErrorKind::ConfirmationRequired,
                                   {{"tool", call.tool}, {"token", gate.pending()->token}});

    try {
        return handler(call.arguments);
    } catch (const std::exception& error) {
        return ToolResult::failure(ToolErrorKind::ExecutionFailed, {{"tool", call.tool}, {"message", error.what()}});
    }
}

std::string_view to_string(ValueKind kind)
{
    switch (kind) {
    case ValueKind::String: return "string";
    case ValueKind::Int: return "int";
    case ValueKind::Float: return "float";
    case ValueKind::Bool: return "bool";
    case ValueKind::Enum: return "enum";
    case ValueKind::IntList: return "int_list";
    case ValueKind::Document: return "document";
    }
    return "string";
}

std::string_view to_string(Effect effect)
{
    switch (effect) {
    case Effect::ReadOnly: return "read_only";
    case Effect::Mutating: return "mutating";
    case Effect::Critical: return "critical";
    }
    return "read_only";
}

std::string_view to_string(ToolErrorKind kind)
{
    switch (kind) {
    case ToolErrorKind::UnknownTool: return "unknown_tool";
    case ToolErrorKind::SchemaViolation: return "schema_violation";
    case ToolErrorKind::ConfirmationRequired: return "confirmation_required";
    case ToolErrorKind::ExecutionFailed: return "execution_failed";
    }
    return "execution_failed";
}

json describe(const ToolSpec& spec)
{
    auto type_json = [](const TypeTag& type) {
        json out = {{"type", to_string(type.kind)}};
        if (type.kind == ValueKind::Enum)
            out["values"] = type.enum_values;
        return out;
    };
    json params = json::array();
    for (const auto& param : spec.params) {
        auto entry = type_json(param.type);
        entry["name"] = param.name;
        entry["required"] = param.required;
        if (!param.description.empty())
            entry["description"] = param.description;
        params.push_back(std::move(entry));
    }
    auto returns = type_json(spec.returns);
    returns["description"] = spec.returns_description;
    return {
        {"name", spec.name},
        {"description", spec.description},
        {"params", params},
        {"returns", returns},
        {"effect", to_string(spec.effect)},
    };
}

json encode(const ToolCall& call)
{
    return {{"tool", call.tool}, {"arguments", call.arguments}};
}

json encode(const ToolResult& result)
{
    json out = {{"status", result.ok() ? "ok" : "err"}, {"payload", result.payload}};
    if (result.error_kind)
        out["error_kind"] = to_string(*result.error_kind);
    return out;
}

} // namespace intentops::runtime
