// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "intentops/common/engine_id.hpp"
#include "intentops/intent/intent.hpp"
#include "intentops/llm/chat_client.hpp"

#include <json.hpp>

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace intentops::decomposer {

struct FleetSummary
{
    std::vector<EngineId> engine_ids;

    std::size_t engine_count() const { return engine_ids.size(); }
    std::string describe() const;
};

struct ProposalRequest
{
    std::string_view raw_text;
    std::span<const std::string> vocabulary;
    const FleetSummary& fleet;
    /// Named thresholds a condition may reference.
    const std::map<std::string, double>& thresholds;
    /// Violations found in the previous attempt; empty on the first attempt.
    std::span<const std::string> previous_violations;
    int attempt = 1;
};

/// Proposes a candidate intent document. Implementations keep no state
/// between calls.
class DecomposerBackend
{
public:
    virtual ~DecomposerBackend() = default;

    virtual std::string name() const = 0;
    virtual nlohmann::json propose(const ProposalRequest& request) const = 0;
};

/// Deterministic keyword backend. The rules are listed in
/// docs/decomposition_rules.md.
class RuleBackend final : public DecomposerBackend
{
public:
    std::string name() const override { return "rule"; }
    nlohmann::json propose(const ProposalRequest& request) const override;
};

/// Chat-completion backend. The client is borrowed and must outlive the
/// backend.
class LlmBackend final : public DecomposerBackend
{
public:
    explicit LlmBackend(llm::ChatClient& client, std::string prompt_template = std::string(default_prompt_template()));

    std::string name() const override { return "llm"; }
    /// Throws llm::BackendUnavailable or llm::MalformedResponse.
    nlohmann::json propose(const ProposalRequest& request) const override;

    /// System prompt for a request, with every placeholder filled in.
    std::string render_prompt(const ProposalRequest& request) const;

    static std::string_view default_prompt_template();

private:
    llm::ChatClient& client_;
    std::string prompt_template_;
};

struct DecomposeOptions
{
    int max_attempts = 3;
    std::map<std::string, double> thresholds;
    /// Assigned to the decomposed intent when non-empty.
    std::string intent_id;
};

struct DecompositionReport
{
    intent::Intent intent;
    std::string backend_name;
    int attempts = 1;
    /// Violations of each rejected attempt, in attempt order.
    std::vector<std::vector<std::string>> repairs;
};

class InvalidInput : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

class DecompositionFailed : public std::runtime_error
{
public:
    explicit DecompositionFailed(std::vector<std::string> violations);

    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

/// Decomposes `raw_text`, re-prompting with the violation list until the
/// candidate validates or `max_attempts` is reached.
///
/// Throws InvalidInput for empty text, DecompositionFailed after the last
/// attempt and llm::BackendUnavailable from transport failures.
DecompositionReport decompose(std::string_view raw_text,
                              const DecomposerBackend& backend,
                              const FleetSummary& fleet,
                              const DecomposeOptions& options = {});

nlohmann::json encode(const DecompositionReport& report);

} // namespace intentops::decomposer
