// SPDX-License-Identifier: Apache-2.0
#include "intentops/decomposer/decomposer.hpp"

#include "intentops/intent/intent_json.hpp"
#include "intentops/intent/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <limits>
#include <regex>

namespace intentops::decomposer {

namespace {

using namespace intentops::intent;

const std::regex kEngineList(R"(\bengines?\s+(?:#\s*)?(\d+(?:\s*(?:,|and|&|or)\s*(?:#\s*)?\d+)*))");
const std::regex kDigits(R"(\d+)");
const std::regex kAllEngines(R"(\ball\s+(?:the\s+)?engines\b|\bfleet\b|\bevery\s+engine\b)");
const std::regex kRulBelow(R"(\brul\s+(?:is\s+)?(?:below|under|less\s+than|lower\s+than|<)\s*(\d+(?:\.\d+)?))");
const std::regex kRulAtLeast(
    R"(\brul\s+(?:is\s+)?(?:above|over|at\s+least|greater\s+than|>=?)\s*(\d+(?:\.\d+)?))");
const std::regex kRul(R"(\brul\b)");
const std::regex kAvoid(R"(\bavoid\w*\b.*\b(?:stops?|failures?|downtime|breakdowns?|shutdowns?)\b)");
const std::regex kMaintain(R"(\bmaintain\w*\b.*\b(?:working|running|operat\w*|healthy)\b)");
const std::regex kStopCommand(R"(\b(?:stop|shut\s*down|halt)\s+(?:all\s+)?(?:the\s+)?engines?\b)");
const std::regex kQuery(R"(\b(?:check|show|status|report|inspect|query|what|how)\b)");
const std::regex kPlan(R"(\b(?:plan|schedul\w*)\b)");
const std::regex kProactive(R"(\b(?:predictive|proactive|plan)\b)");
const std::regex kImmediate(R"(\b(?:immediate|immediately|now|asap|urgent\w*)\b)");
const std::regex kWithinDays(R"(\bwithin\s+(\d+)\s+days?\b)");
const std::regex kTable(R"(\btable\b)");
const std::regex kCsv(R"(\bcsv\b)");

bool contains(const std::string& text, const std::regex& pattern)
{
    return std::regex_search(text, pattern);
}

std::string lowercase(std::string_view text)
{
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string stable_id(std::string_view text)
{
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    char buffer[17];
    std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
    return std::string("intent-") + buffer;
}

TargetSelector select_targets(const std::string& text)
{
    StaticTargets named;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), kEngineList); it != std::sregex_iterator(); ++it) {
        const std::string list = (*it)[1];
        for (auto d = std::sregex_iterator(list.begin(), list.end(), kDigits); d != std::sregex_iterator(); ++d) {
            const auto id = make_engine_id(std::stoi(d->str()));
            if (std::find(named.engine_ids.begin(), named.engine_ids.end(), id) == named.engine_ids.end())
                named.engine_ids.push_back(id);
        }
    }
    if (!named.engine_ids.empty())
        return named;

    std::smatch match;
    if (std::regex_search(text, match, kRulBelow))
        return DynamicTargets{MetricBelow{std::string(kRulMetric), std::stod(match[1])}};
    if (std::regex_search(text, match, kRulAtLeast))
        return DynamicTargets{MetricAtLeast{std::string(kRulMetric), std::stod(match[1])}};
    return DynamicTargets{AllEngines{}};
}

} // namespace

nlohmann::json RuleBackend::propose(const ProposalRequest& request) const
{
    const std::string text = lowercase(request.raw_text);

    Intent candidate;
    candidate.id = stable_id(request.raw_text);
    candidate.raw_text = std::string(request.raw_text);
    candidate.targets = select_targets(text);

    const bool mentions_rul = contains(text, kRul);
    const std::optional<std::string> rul_metric =
        mentions_rul ? std::optional<std::string>(kRulMetric) : std::nullopt;
    const bool stop_command = contains(text, kStopCommand);
    const bool plan_request = contains(text, kPlan);

    if (contains(text, kMaintain))
        candidate.expectations.push_back(
            {"Keep the targeted engines in working condition", rul_metric, Objective::Maintain});
    if (contains(text, kAvoid))
        candidate.expectations.push_back(
            {"Avoid unexpected engine stops and failures", rul_metric, Objective::Avoid});
    if (stop_command)
        candidate.expectations.push_back({"Stop the targeted engines", std::nullopt, Objective::Achieve});
    if (plan_request && candidate.expectations.empty())
        candidate.expectations.push_back(
            {"Produce a maintenance plan for the targeted engines", rul_metric, Objective::Achieve});

    const bool query = !stop_command && !plan_request && contains(text, kQuery);
    if (query && candidate.expectations.empty())
        candidate.expectations.push_back(
            {"Report current telemetry and RUL for the targeted engines", std::nullopt, Objective::Achieve});

    if (mentions_rul)
        candidate.conditions.push_back({std::string(kRulMetric), Comparator::GE,
                                        std::numeric_limits<double>::quiet_NaN(), "cycles", "critical_rul"});

    if (contains(text, kProactive)) {
        candidate.context.priority = Priority::High;
        candidate.context.scope = "proactive maintenance";
    }
    std::smatch within;
    if (contains(text, kImmediate)) {
        candidate.context.priority = Priority::High;
        candidate.context.timeframe_days = 0;
        if (candidate.context.scope.empty())
            candidate.context.scope = "immediate action";
    } else if (std::regex_search(text, within, kWithinDays)) {
        candidate.context.timeframe_days = std::stoi(within[1]);
    }

    if (stop_command)
        candidate.information.push_back({"request_type", "stop"});
    else if (plan_request)
        candidate.information.push_back({"request_type", "maintenance_plan"});
    else if (query)
        candidate.information.push_back({"request_type", "query"});
    if (mentions_rul)
        candidate.information.push_back({"rul_source", "data_agent"});
    if (contains(text, kTable))
        candidate.information.push_back({"output_format", "table"});
    else if (contains(text, kCsv))
        candidate.information.push_back({"output_format", "csv"});

    return encode(candidate);
}

} // namespace intentops::decomposer
