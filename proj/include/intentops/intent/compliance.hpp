// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "intentops/intent/intent.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace intentops::intent {

/// `measured <comparator> threshold`. Throws std::invalid_argument if
/// `measured` is not finite.
bool evaluate_condition(const Condition& condition, double measured);

struct TargetResolution
{
    std::vector<EngineId> engine_ids;
    /// Partial-resolution warnings (ids absent from the fleet, engines
    /// without a value for the filter metric).
    std::vector<std::string> warnings;
};

/// Resolves a selector against the fleet. `metric_lookup` holds the filter
/// metric's value per engine and is only consulted for metric filters.
TargetResolution resolve_targets(const TargetSelector& selector,
                                 std::span<const EngineId> fleet_ids,
                                 const std::map<EngineId, double>& metric_lookup);

enum class ComplianceState { Compliant, NonCompliant, Unknown };

struct Evidence
{
    EngineId target{};
    std::string metric;
    double measured = 0.0;

    bool operator==(const Evidence&) const = default;
};

struct ExpectationCompliance
{
    std::size_t expectation_index = 0;
    ComplianceState state = ComplianceState::Unknown;
    std::vector<Evidence> evidence;
};

using Measurements = std::map<EngineId, std::map<std::string, double>>;

/// Strict conjunction of every condition over every resolved target. Missing
/// data yields Unknown, which takes precedence over a failed condition.
/// The fleet is the key set of `measurements`; static targets missing from it
/// count as missing data.
std::vector<ExpectationCompliance> evaluate_compliance(const Intent& intent,
                                                       const Measurements& measurements);

std::string_view to_string(ComplianceState state);

} // namespace intentops::intent
