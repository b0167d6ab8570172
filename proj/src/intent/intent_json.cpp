// SPDX-License-Identifier: Apache-2.0
#include "intentops/intent/intent_json.hpp"

#include <cmath>
#include <limits>

namespace intentops::intent {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& detail)
{
    throw IntentDecodeError(path + ": " + detail);
}

const json& require(const json& object, const char* key, const std::string& path)
{
    if (!object.is_object())
        fail(path, "expected object");
    const auto it = object.find(key);
    if (it == object.end())
        fail(path + "." + key, "missing");
    return *it;
}

const json* optional_field(const json& object, const char* key)
{
    const auto it = object.find(key);
    if (it == object.end() || it->is_null())
        return nullptr;
    return &*it;
}

std::string as_string(const json& value, const std::string& path)
{
    if (!value.is_string())
        fail(path, "expected string");
    return value.get<std::string>();
}

double as_number(const json& value, const std::string& path)
{
    if (!value.is_number())
        fail(path, "expected number");
    return value.get<double>();
}

const json& as_array(const json& value, const std::string& path)
{
    if (!value.is_array())
        fail(path, "expected array");
    return value;
}

template <typename Enum>
Enum as_enum(const json& value, const std::string& path, std::optional<Enum> (*parse)(std::string_view))
{
    const auto text = as_string(value, path);
    const auto parsed = parse(text);
    if (!parsed)
        fail(path, "unknown value '" + text + "'");
    return *parsed;
}

json encode_filter(const TargetFilter& filter)
{
    if (std::holds_alternative<AllEngines>(filter))
        return {{"kind", "all"}};
    if (const auto* below = std::get_if<MetricBelow>(&filter))
        return {{"kind", "metric_below"}, {"metric", below->metric}, {"value", below->value}};
    const auto& at_least = std::get<MetricAtLeast>(filter);
    return {{"kind", "metric_at_least"}, {"metric", at_least.metric}, {"value", at_least.value}};
}

TargetFilter decode_filter(const json& document, const std::string& path)
{
    const auto kind = as_string(require(document, "kind", path), path + ".kind");
    if (kind == "all")
        return AllEngines{};
    if (kind == "metric_below" || kind == "metric_at_least") {
        auto metric = as_string(require(document, "metric", path), path + ".metric");
        const auto value = as_number(require(document, "value", path), path + ".value");
        if (kind == "metric_below")
            return MetricBelow{std::move(metric), value};
        return MetricAtLeast{std::move(metric), value};
    }
    fail(path + ".kind", "unknown filter '" + kind + "'");
}

} // namespace

json encode(const TargetSelector& selector)
{
    if (const auto* fixed = std::get_if<StaticTargets>(&selector)) {
        json ids = json::array();
        for (auto id : fixed->engine_ids)
            ids.push_back(to_int(id));
        return {{"variant", "static"}, {"engine_ids", ids}};
    }
    return {{"variant", "dynamic"}, {"filter", encode_filter(std::get<DynamicTargets>(selector).filter)}};
}

TargetSelector decode_target_selector(const json& document)
{
    const std::string path = "targets";
    const auto variant = as_string(require(document, "variant", path), path + ".variant");
    if (variant == "static") {
        StaticTargets targets;
        const auto& ids = as_array(require(document, "engine_ids", path), path + ".engine_ids");
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (!ids[i].is_number_integer())
                fail(path + ".engine_ids[" + std::to_string(i) + "]", "expected integer");
            targets.engine_ids.push_back(make_engine_id(ids[i].get<std::int32_t>()));
        }
        return targets;
    }
    if (variant == "dynamic")
        return DynamicTargets{decode_filter(require(document, "filter", path), path + ".filter")};
    fail(path + ".variant", "unknown variant '" + variant + "'");
}

json encode(const Intent& intent)
{
    json expectations = json::array();
    for (const auto& expectation : intent.expectations)
        expectations.push_back({
            {"description", expectation.description},
            {"metric", expectation.metric ? json(*expectation.metric) : json(nullptr)},
            {"objective", to_string(expectation.objective)},
        });

    json conditions = json::array();
    for (const auto& condition : intent.conditions) {
        json encoded = {
            {"subject", condition.subject},
            {"comparator", to_string(condition.comparator)},
            {"threshold", std::isfinite(condition.threshold) ? json(condition.threshold) : json(nullptr)},
            {"unit", condition.unit},
        };
        if (condition.threshold_ref)
            encoded["threshold_ref"] = *condition.threshold_ref;
        conditions.push_back(std::move(encoded));
    }

    json information = json::array();
    for (const auto& item : intent.information)
        information.push_back({{"key", item.key}, {"value", item.value}});

    return {
        {"id", intent.id},
        {"raw_text", intent.raw_text},
        {"expectations", expectations},
        {"conditions", conditions},
        {"targets", encode(intent.targets)},
        {"context",
         {
             {"priority", to_string(intent.context.priority)},
             {"timeframe", intent.context.timeframe_days ? json(*intent.context.timeframe_days) : json(nullptr)},
             {"scope", intent.context.scope},
         }},
        {"information", information},
    };
}

Intent decode_intent(const json& document)
{
    if (!document.is_object())
        fail("intent", "expected object");

    Intent intent;
    if (const auto* id = optional_field(document, "id"))
        intent.id = as_string(*id, "id");
    // Decomposition overwrites raw_text with the operator's text, so a model
    // reply that leaves it out is still usable.
    if (const auto* raw_text = optional_field(document, "raw_text"))
        intent.raw_text = as_string(*raw_text, "raw_text");

    const auto& expectations = as_array(require(document, "expectations", "intent"), "expectations");
    for (std::size_t i = 0; i < expectations.size(); ++i) {
        const auto path = "expectations[" + std::to_string(i) + "]";
        const auto& item = expectations[i];
        Expectation expectation;
        expectation.description = as_string(require(item, "description", path), path + ".description");
        if (const auto* metric = optional_field(item, "metric"))
            expectation.metric = as_string(*metric, path + ".metric");
        expectation.objective = as_enum(require(item, "objective", path), path + ".objective", &parse_objective);
        intent.expectations.push_back(std::move(expectation));
    }

    if (const auto* conditions = optional_field(document, "conditions")) {
        as_array(*conditions, "conditions");
        for (std::size_t i = 0; i < conditions->size(); ++i) {
            const auto path = "conditions[" + std::to_string(i) + "]";
            const auto& item = (*conditions)[i];
            Condition condition;
            condition.subject = as_string(require(item, "subject", path), path + ".subject");
            condition.comparator =
                as_enum(require(item, "comparator", path), path + ".comparator", &parse_comparator);
            if (const auto* ref = optional_field(item, "threshold_ref"))
                condition.threshold_ref = as_string(*ref, path + ".threshold_ref");
            if (const auto* threshold = optional_field(item, "threshold"))
                condition.threshold = as_number(*threshold, path + ".threshold");
            else if (condition.threshold_ref)
                condition.threshold = std::numeric_limits<double>::quiet_NaN();
            else
                fail(path + ".threshold", "missing");
            if (const auto* unit = optional_field(item, "unit"))
                condition.unit = as_string(*unit, path + ".unit");
            intent.conditions.push_back(std::move(condition));
        }
    }

    intent.targets = decode_target_selector(require(document, "targets", "intent"));

    const auto& context = require(document, "context", "intent");
    intent.context.priority = as_enum(require(context, "priority", "context"), "context.priority", &parse_priority);
    if (const auto* timeframe = optional_field(context, "timeframe")) {
        if (!timeframe->is_number_integer())
            fail("context.timeframe", "expected integer days");
        intent.context.timeframe_days = timeframe->get<int>();
    }
    if (const auto* scope = optional_field(context, "scope"))
        intent.context.scope = as_string(*scope, "context.scope");

    if (const auto* information = optional_field(document, "information")) {
        as_array(*information, "information");
        for (std::size_t i = 0; i < information->size(); ++i) {
            const auto path = "information[" + std::to_string(i) + "]";
            const auto& item = (*information)[i];
            InfoItem info;
            info.key = as_string(require(item, "key", path), path + ".key");
            const auto& value = require(item, "value", path);
            info.value = value.is_string() ? value.get<std::string>() : value.dump();
            intent.information.push_back(std::move(info));
        }
    }
    return intent;
}

json encode(const std::vector<ExpectationCompliance>& compliance)
{
    json out = json::array();
    for (const auto& entry : compliance) {
        json evidence = json::array();
        for (const auto& item : entry.evidence)
            evidence.push_back({{"target", to_int(item.target)}, {"metric", item.metric}, {"value", item.measured}});
        out.push_back({
            {"expectation", entry.expectation_index},
            {"status", to_string(entry.state)},
            {"evidence", evidence},
        });
    }
    return out;
}

} // namespace intentops::intent
