// SPDX-License-Identifier: Apache-2.0
#include "intentops/intent/intent.hpp"

#include "intentops/intent/metrics.hpp"

#include <cmath>
#include <set>

namespace intentops::intent {

namespace {

void check_filter_metric(const TargetFilter& filter, std::vector<std::string>& out)
{
    auto check = [&out](const std::string& metric, double value) {
        if (!is_known_metric(metric))
            out.push_back("target filter metric '" + metric + "' not in vocabulary");
        if (!std::isfinite(value))
            out.push_back("target filter value not finite");
    };
    if (const auto* below = std::get_if<MetricBelow>(&filter))
        check(below->metric, below->value);
    else if (const auto* at_least = std::get_if<MetricAtLeast>(&filter))
        check(at_least->metric, at_least->value);
}

} // namespace

std::optional<std::string> Intent::info(std::string_view key) const
{
    for (const auto& item : information)
        if (item.key == key)
            return item.value;
    return std::nullopt;
}

std::vector<std::string> validate_intent(const Intent& intent)
{
    std::vector<std::string> violations;

    if (intent.expectations.empty())
        violations.emplace_back("no expectations");
    for (std::size_t i = 0; i < intent.expectations.size(); ++i) {
        const auto& expectation = intent.expectations[i];
        const auto where = "expectation " + std::to_string(i);
        if (expectation.description.empty())
            violations.push_back(where + ": empty description");
        if (expectation.metric && !is_known_metric(*expectation.metric))
            violations.push_back(where + ": metric '" + *expectation.metric + "' not in vocabulary");
    }

    for (std::size_t i = 0; i < intent.conditions.size(); ++i) {
        const auto& condition = intent.conditions[i];
        const auto where = "condition " + std::to_string(i);
        if (!is_known_metric(condition.subject))
            violations.push_back(where + ": subject '" + condition.subject + "' not in vocabulary");
        if (!std::isfinite(condition.threshold))
            violations.push_back(where + ": threshold not finite");
    }

    if (const auto* fixed = std::get_if<StaticTargets>(&intent.targets)) {
        if (fixed->engine_ids.empty())
            violations.emplace_back("empty static target list");
        std::set<EngineId> seen;
        for (auto id : fixed->engine_ids)
            if (!seen.insert(id).second)
                violations.push_back("duplicate engine " + to_string(id) + " in static target list");
    } else {
        check_filter_metric(std::get<DynamicTargets>(intent.targets).filter, violations);
    }

    if (intent.context.timeframe_days && *intent.context.timeframe_days < 0)
        violations.emplace_back("timeframe must be a non-negative number of days");

    for (std::size_t i = 0; i < intent.information.size(); ++i)
        if (intent.information[i].key.empty())
            violations.push_back("information " + std::to_string(i) + ": empty key");

    return violations;
}

std::string_view to_string(Objective objective)
{
    switch (objective) {
    case Objective::Maintain: return "maintain";
    case Objective::Avoid: return "avoid";
    case Objective::Achieve: return "achieve";
    }
    return "maintain";
}

std::string_view to_string(Comparator comparator)
{
    switch (comparator) {
    case Comparator::LT: return "lt";
    case Comparator::LE: return "le";
    case Comparator::GT: return "gt";
    case Comparator::GE: return "ge";
    case Comparator::EQ: return "eq";
    }
    return "eq";
}

std::string_view to_string(Priority priority)
{
    switch (priority) {
    case Priority::Low: return "low";
    case Priority::Normal: return "normal";
    case Priority::High: return "high";
    }
    return "normal";
}

std::optional<Objective> parse_objective(std::string_view text)
{
    for (auto value : {Objective::Maintain, Objective::Avoid, Objective::Achieve})
        if (to_string(value) == text)
            return value;
    return std::nullopt;
}

std::optional<Comparator> parse_comparator(std::string_view text)
{
    for (auto value : {Comparator::LT, Comparator::LE, Comparator::GT, Comparator::GE, Comparator::EQ})
        if (to_string(value) == text)
            return value;
    return std::nullopt;
}

std::optional<Priority> parse_priority(std::string_view text)
{
    for (auto value : {Priority::Low, Priority::Normal, Priority::High})
        if (to_string(value) == text)
            return value;
    return std::nullopt;
}

} // namespace intentops::intent
