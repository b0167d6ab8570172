// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "intentops/fleet/fleet_store.hpp"
#include "intentops/maintenance/maintenance_tools.hpp"
#include "intentops/runtime/agent.hpp"
#include "intentops/runtime/planner.hpp"
#include "intentops/runtime/tool.hpp"

#include <memory>
#include <string_view>

// The default three-agent hierarchy and its deterministic planner. The
// decision rules are written up in docs/planner_rules.md.

namespace intentops::topology {

inline constexpr std::string_view kRootAgent = "root_agent";
inline constexpr std::string_view kDataAgent = "data_agent";
inline constexpr std::string_view kMaintenanceAgent = "maintenance_agent";

/// root_agent (12 steps, stop_engine) delegating to data_agent and
/// maintenance_agent (8 steps each).
runtime::AgentDirectory default_agents();

/// Data tools plus the toolkit's maintenance tools. The toolkit is borrowed.
void register_default_tools(runtime::ToolRegistry& registry,
                            std::shared_ptr<fleet::FleetStore> store,
                            maintenance::MaintenanceToolkit& toolkit);

/// Stateless: every decision is derived from the intent, the task input and
/// the observations so far.
class RulePlanner final : public runtime::PlannerBackend
{
public:
    runtime::PlannerStep next(const runtime::PlannerContext& context) override;
};

std::unique_ptr<runtime::PlannerBackend> rule_planner();

/// "maintenance_plan", "stop" or "query". Taken from the intent's
/// request_type item; without one, Maintain and Avoid expectations mean a
/// plan and anything else a query.
std::string request_type(const intent::Intent& intent);

} // namespace intentops::topology
