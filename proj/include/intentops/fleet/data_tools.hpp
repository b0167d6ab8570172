// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "intentops/fleet/fleet_store.hpp"
#include "intentops/runtime/tool.hpp"

#include <memory>

namespace intentops::fleet {

/// Registers the data agent's tools: get_engine_data, predict_engine_rul and
/// the batched get_fleet_data.
void register_data_tools(runtime::ToolRegistry& registry, std::shared_ptr<FleetStore> store);

} // namespace intentops::fleet
