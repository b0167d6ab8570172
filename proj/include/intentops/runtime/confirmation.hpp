// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "intentops/runtime/tool.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace intentops::runtime {

/// Critical calls deferred during one turn, approved together by one token.
struct PendingConfirmation
{
    std::string token;
    std::vector<ToolCall> calls;
};

/// 128 random bits, hex encoded.
std::string random_token();

/// Effect gate for Critical tools.
///
/// A gate lives for one turn. Critical calls are allowed when auto-confirm is
/// on or when the call was approved beforehand; otherwise they are deferred
/// into a single pending batch whose token the operator can confirm later.
class ConfirmationGate
{
public:
    enum class Verdict { Allowed, Deferred };

    explicit ConfirmationGate(bool auto_confirm = false,
                              std::function<std::string()> token_source = random_token);

    Verdict admit(const ToolCall& call);

    /// Pre-approves every call of a confirmed batch. Each approval is
    /// consumed by the first matching call.
    void approve(const PendingConfirmation& confirmed);

    bool auto_confirm() const { return auto_confirm_; }
    const std::optional<PendingConfirmation>& pending() const { return pending_; }

private:
    bool auto_confirm_;
    std::function<std::string()> token_source_;
    std::vector<ToolCall> approved_;
    std::optional<PendingConfirmation> pending_;
};

} // namespace intentops::runtime
