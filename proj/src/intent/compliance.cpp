// SPDX-License-Identifier: Apache-2.0
#include "intentops/intent/compliance.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace intentops::intent {

bool evaluate_condition(const Condition& condition, double measured)
{
    if (!std::isfinite(measured))
        throw std::invalid_argument("measured value must be finite");
    switch (condition.comparator) {
    case Comparator::LT: return measured < condition.threshold;
    case Comparator::LE: return measured <= condition.threshold;
    case Comparator::GT: return measured > condition.threshold;
    case Comparator::GE: return measured >= condition.threshold;
    case Comparator::EQ: return measured == condition.threshold;
    }
    return false;
}

TargetResolution resolve_targets(const TargetSelector& selector,
                                 std::span<const EngineId> fleet_ids,
                                 const std::map<EngineId, double>& metric_lookup)
{
    TargetResolution resolution;

    if (const auto* fixed = std::get_if<StaticTargets>(&selector)) {
        const std::set<EngineId> wanted(fixed->engine_ids.begin(), fixed->engine_ids.end());
        const std::set<EngineId> fleet(fleet_ids.begin(), fleet_ids.end());
        for (auto id : fleet_ids)
            if (wanted.contains(id))
                resolution.engine_ids.push_back(id);
        std::set<EngineId> reported;
        for (auto id : fixed->engine_ids)
            if (!fleet.contains(id) && reported.insert(id).second)
                resolution.warnings.push_back("engine " + to_string(id) + " is not in the fleet");
        return resolution;
    }

    const auto& filter = std::get<DynamicTargets>(selector).filter;
    if (std::holds_alternative<AllEngines>(filter)) {
        resolution.engine_ids.assign(fleet_ids.begin(), fleet_ids.end());
        return resolution;
    }

    const bool below = std::holds_alternative<MetricBelow>(filter);
    const std::string& metric =
        below ? std::get<MetricBelow>(filter).metric : std::get<MetricAtLeast>(filter).metric;
    const double bound = below ? std::get<MetricBelow>(filter).value : std::get<MetricAtLeast>(filter).value;

    for (auto id : fleet_ids) {
        const auto it = metric_lookup.find(id);
        if (it == metric_lookup.end()) {
            resolution.warnings.push_back("engine " + to_string(id) + " has no value for " + metric);
            continue;
        }
        if (below ? it->second < bound : it->second >= bound)
            resolution.engine_ids.push_back(id);
    }
    return resolution;
}

namespace {

std::string filter_metric(const TargetSelector& selector)
{
    const auto* dynamic = std::get_if<DynamicTargets>(&selector);
    if (!dynamic)
        return {};
    if (const auto* below = std::get_if<MetricBelow>(&dynamic->filter))
        return below->metric;
    if (const auto* at_least = std::get_if<MetricAtLeast>(&dynamic->filter))
        return at_least->metric;
    return {};
}

std::vector<EngineId> compliance_targets(const Intent& intent, const Measurements& measurements)
{
    if (const auto* fixed = std::get_if<StaticTargets>(&intent.targets))
        return fixed->engine_ids;

    std::vector<EngineId> fleet;
    fleet.reserve(measurements.size());
    for (const auto& [id, metrics] : measurements)
        fleet.push_back(id);

    std::map<EngineId, double> lookup;
    if (const auto metric = filter_metric(intent.targets); !metric.empty())
        for (const auto& [id, metrics] : measurements)
            if (const auto it = metrics.find(metric); it != metrics.end())
                lookup.emplace(id, it->second);

    return resolve_targets(intent.targets, fleet, lookup).engine_ids;
}

} // namespace

std::vector<ExpectationCompliance> evaluate_compliance(const Intent& intent,
                                                       const Measurements& measurements)
{
    const auto targets = compliance_targets(intent, measurements);

    // Conditions are shared by every expectation, so one pass decides them all.
    bool missing = false;
    bool failed = false;
    std::vector<Evidence> evidence;
    std::set<std::pair<EngineId, std::string>> recorded;
    for (auto target : targets) {
        const auto engine = measurements.find(target);
        for (const auto& condition : intent.conditions) {
            if (engine == measurements.end()) {
                missing = true;
                continue;
            }
            const auto value = engine->second.find(condition.subject);
            if (value == engine->second.end() || !std::isfinite(value->second)) {
                missing = true;
                continue;
            }
            if (!evaluate_condition(condition, value->second))
                failed = true;
            if (recorded.emplace(target, condition.subject).second)
                evidence.push_back({target, condition.subject, value->second});
        }
    }

    const ComplianceState state = missing  ? ComplianceState::Unknown
                                  : failed ? ComplianceState::NonCompliant
                                           : ComplianceState::Compliant;

    std::vector<ExpectationCompliance> result;
    result.reserve(intent.expectations.size());
    for (std::size_t i = 0; i < intent.expectations.size(); ++i)
        result.push_back({i, state, evidence});
    return result;
}

std::string_view to_string(ComplianceState state)
{
    switch (state) {
    case ComplianceState::Compliant: return "compliant";
    case ComplianceState::NonCompliant: return "non_compliant";
    case ComplianceState::Unknown: return "unknown";
    }
    return "unknown";
}

} // namespace intentops::intent
