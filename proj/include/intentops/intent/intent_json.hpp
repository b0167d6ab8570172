// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "intentops/intent/compliance.hpp"
#include "intentops/intent/intent.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

// Canonical interchange encoding. Field names follow the type definitions;
// enums are lowercase strings.

namespace intentops::intent {

/// A document that does not have the intent shape.
class IntentDecodeError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

nlohmann::json encode(const Intent& intent);
/// Throws IntentDecodeError with a path-qualified message.
Intent decode_intent(const nlohmann::json& document);

nlohmann::json encode(const TargetSelector& selector);
TargetSelector decode_target_selector(const nlohmann::json& document);

nlohmann::json encode(const std::vector<ExpectationCompliance>& compliance);

} // namespace intentops::intent
