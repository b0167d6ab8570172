// SPDX-License-Identifier: Apache-2.0
#include "intentops/decomposer/decomposer.hpp"

#include "intentops/intent/intent_json.hpp"
#include "intentops/intent/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

namespace intentops::decomposer {

using nlohmann::json;

std::string FleetSummary::describe() const
{
    std::string ids;
    for (std::size_t i = 0; i < engine_ids.size(); ++i) {
        if (i)
            ids += ", ";
        ids += to_string(engine_ids[i]);
    }
    return std::to_string(engine_count()) + " engines (ids: " + ids + ")";
}

namespace {

std::string join_violations(const std::vector<std::string>& violations)
{
    std::string out = "decomposition failed";
    for (std::size_t i = 0; i < violations.size(); ++i)
        out += (i ? "; " : ": ") + violations[i];
    return out;
}

bool blank(std::string_view text)
{
    return std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); });
}

std::vector<std::string> resolve_threshold_refs(intent::Intent& candidate,
                                                const std::map<std::string, double>& thresholds)
{
    std::vector<std::string> violations;
    for (std::size_t i = 0; i < candidate.conditions.size(); ++i) {
        auto& condition = candidate.conditions[i];
        if (!condition.threshold_ref)
            continue;
        const auto it = thresholds.find(*condition.threshold_ref);
        if (it == thresholds.end()) {
            violations.push_back("condition " + std::to_string(i) + ": unresolved threshold reference '" +
                                 *condition.threshold_ref + "'");
            continue;
        }
        condition.threshold = it->second;
    }
    return violations;
}

} // namespace

DecompositionFailed::DecompositionFailed(std::vector<std::string> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations))
{
}

DecompositionReport decompose(std::string_view raw_text,
                              const DecomposerBackend& backend,
                              const FleetSummary& fleet,
                              const DecomposeOptions& options)
{
    if (raw_text.empty() || blank(raw_text))
        throw InvalidInput("empty input");

    const int max_attempts = std::max(1, options.max_attempts);
    DecompositionReport report;
    report.backend_name = backend.name();

    std::vector<std::string> violations;
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        const std::vector<std::string> previous = std::exchange(violations, {});
        const ProposalRequest request{raw_text, intent::metric_vocabulary(), fleet, options.thresholds,
                                      previous, attempt};
        report.attempts = attempt;

        std::optional<intent::Intent> candidate;
        try {
            candidate = intent::decode_intent(backend.propose(request));
        } catch (const llm::MalformedResponse& error) {
            violations.push_back(std::string("malformed response: ") + error.what());
        } catch (const intent::IntentDecodeError& error) {
            violations.push_back(std::string("malformed intent document: ") + error.what());
        }

        if (candidate) {
            candidate->raw_text = std::string(raw_text);
            if (!options.intent_id.empty())
                candidate->id = options.intent_id;
            violations = resolve_threshold_refs(*candidate, options.thresholds);
            for (auto& violation : intent::validate_intent(*candidate))
                violations.push_back(std::move(violation));
            if (violations.empty()) {
                report.intent = std::move(*candidate);
                return report;
            }
        }
        report.repairs.push_back(violations);
    }
    throw DecompositionFailed(std::move(violations));
}

json encode(const DecompositionReport& report)
{
    return {
        {"intent", intent::encode(report.intent)},
        {"backend_name", report.backend_name},
        {"attempts", report.attempts},
        {"repairs", report.repairs},
    };
}

} // namespace intentops::decomposer
