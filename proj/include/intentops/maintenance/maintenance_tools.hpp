// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "intentops/fleet/fleet_store.hpp"
#include "intentops/maintenance/planner.hpp"
#include "intentops/runtime/tool.hpp"

#include <memory>
#include <mutex>

namespace intentops::maintenance {

/// Running engines among `requested` (all engines when empty). Stopped and
/// unknown ids are reported separately.
struct PlanSelection
{
    std::vector<fleet::EngineSnapshot> snapshots;
    std::vector<EngineId> stopped;
    std::vector<EngineId> unknown;
};

PlanSelection select_plannable(const fleet::FleetStore& store, std::span<const EngineId> requested);

/// Stops one engine and returns the Critical task for it. Idempotent.
/// Throws fleet::UnknownEngine. Confirmation is the caller's concern.
MaintenanceTask stop_engine(fleet::FleetStore& store, EngineId id, const PlannerConfig& config);

/// Shop state shared by the maintenance agent's tools: the fleet, the
/// planning configuration and the calendar that ad-hoc scheduling books into.
class MaintenanceToolkit
{
public:
    MaintenanceToolkit(std::shared_ptr<fleet::FleetStore> store, PlannerConfig config);

    const PlannerConfig& config() const { return config_; }
    Calendar calendar() const;

    /// suggest_maintenance_action, estimate_maintenance_cost,
    /// assign_maintenance_staff, schedule_maintenance_task,
    /// consolidate_maintenance_plan and the Critical stop_engine.
    void register_tools(runtime::ToolRegistry& registry);

private:
    std::shared_ptr<fleet::FleetStore> store_;
    PlannerConfig config_;
    mutable std::mutex calendar_mutex_;
    Calendar calendar_;
};

} // namespace intentops::maintenance
