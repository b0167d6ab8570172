// SPDX-License-Identifier: Apache-2.0
#include "intentops/runtime/confirmation.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <random>

namespace intentops::runtime {

std::string random_token()
{
    thread_local std::random_device device;
    std::array<std::uint32_t, 4> words{};
    for (auto& word : words)
        word = device();
    char buffer[33];
    std::snprintf(buffer, sizeof buffer, "%08x%08x%08x%08x", words[0], words[1], words[2], words[3]);
    return buffer;
}

ConfirmationGate::ConfirmationGate(bool auto_confirm, std::function<std::string()> token_source)
    : auto_confirm_(auto_confirm), token_source_(std::move(token_source))
{
}

ConfirmationGate::Verdict ConfirmationGate::admit(const ToolCall& call)
{
    if (auto_confirm_)
        return Verdict::Allowed;
    if (const auto it = std::find(approved_.begin(), approved_.end(), call); it != approved_.end()) {
        approved_.erase(it);
        return Verdict::Allowed;
    }
    if (!pending_)
        pending_ = PendingConfirmation{token_source_(), {}};
    pending_->calls.push_back(call);
    return Verdict::Deferred;
}

void ConfirmationGate::approve(const PendingConfirmation& confirmed)
{
    approved_.insert(approved_.end(), confirmed.calls.begin(), confirmed.calls.end());
}

} // namespace intentops::runtime
