// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "intentops/common/engine_id.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace intentops::intent {

enum class Objective { Maintain, Avoid, Achieve };
enum class Comparator { LT, LE, GT, GE, EQ };
enum class Priority { Low, Normal, High };

struct Expectation
{
    std::string description;
    std::optional<std::string> metric;
    Objective objective = Objective::Maintain;

    bool operator==(const Expectation&) const = default;
};

/// A measurable test `measured <comparator> threshold`.
///
/// `threshold_ref` names a configured threshold (for instance the planner's
/// critical RUL). Decomposition resolves it into `threshold`; the reference is
/// kept so the intent still says where the number came from.
struct Condition
{
    std::string subject;
    Comparator comparator = Comparator::GE;
    double threshold = 0.0;
    std::string unit;
    std::optional<std::string> threshold_ref;

    bool operator==(const Condition&) const = default;
};

struct StaticTargets
{
    std::vector<EngineId> engine_ids;

    bool operator==(const StaticTargets&) const = default;
};

struct AllEngines
{
    bool operator==(const AllEngines&) const = default;
};

struct MetricBelow
{
    std::string metric;
    double value = 0.0;

    bool operator==(const MetricBelow&) const = default;
};

struct MetricAtLeast
{
    std::string metric;
    double value = 0.0;

    bool operator==(const MetricAtLeast&) const = default;
};

using TargetFilter = std::variant<AllEngines, MetricBelow, MetricAtLeast>;

struct DynamicTargets
{
    TargetFilter filter;

    bool operator==(const DynamicTargets&) const = default;
};

using TargetSelector = std::variant<StaticTargets, DynamicTargets>;

struct IntentContext
{
    Priority priority = Priority::Normal;
    /// Days; 0 means immediately.
    std::optional<int> timeframe_days;
    std::string scope;

    bool operator==(const IntentContext&) const = default;
};

struct InfoItem
{
    std::string key;
    std::string value;

    bool operator==(const InfoItem&) const = default;
};

struct Intent
{
    std::string id;
    std::string raw_text;
    std::vector<Expectation> expectations;
    std::vector<Condition> conditions;
    TargetSelector targets = DynamicTargets{AllEngines{}};
    IntentContext context;
    std::vector<InfoItem> information;

    bool operator==(const Intent&) const = default;

    /// Value of the first information item with this key, if any.
    std::optional<std::string> info(std::string_view key) const;
};

/// Returns every invariant violation; an empty list means the intent is valid.
std::vector<std::string> validate_intent(const Intent& intent);

std::string_view to_string(Objective objective);
std::string_view to_string(Comparator comparator);
std::string_view to_string(Priority priority);

std::optional<Objective> parse_objective(std::string_view text);
std::optional<Comparator> parse_comparator(std::string_view text);
std::optional<Priority> parse_priority(std::string_view text);

} // namespace intentops::intent
