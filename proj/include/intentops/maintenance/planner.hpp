// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "intentops/common/engine_id.hpp"
#include "intentops/fleet/fleet_store.hpp"

#include <json.hpp>

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace intentops::maintenance {

enum class Action { Monitor, Repair, Stop };
enum class TaskPriority { Low, High, Critical };

/// Scheduling window: now, or any day in 0..days.
struct Window
{
    enum class Kind { Immediate, WithinDays };

    Kind kind = Kind::WithinDays;
    int days = 0;

    static Window immediate() { return {Kind::Immediate, 0}; }
    static Window within(int days) { return {Kind::WithinDays, days}; }

    int last_day() const { return kind == Kind::Immediate ? 0 : days; }

    auto operator<=>(const Window&) const = default;
};

/// RUL band edges in cycles; 0 < stop_below < repair_below < monitor_soon_below.
struct PolicyBands
{
    int stop_below = 25;
    int repair_below = 60;
    int monitor_soon_below = 80;

    /// Throws std::invalid_argument.
    void validate() const;

    bool operator==(const PolicyBands&) const = default;
};

struct ActionRecommendation
{
    Action action = Action::Monitor;
    TaskPriority priority = TaskPriority::Low;
    Window window = Window::within(7);

    bool operator==(const ActionRecommendation&) const = default;
};

/// Throws std::invalid_argument for negative RUL.
ActionRecommendation suggest_maintenance_action(int rul, const PolicyBands& bands = {});

/// 2 for Stop, 1 for Repair, 0 for Monitor.
int severity(Action action);

struct CostEstimate
{
    double cost_usd = 0.0;
    double labor_hours = 0.0;

    bool operator==(const CostEstimate&) const = default;
};

/// Flat cost per action class.
struct CostModel
{
    CostEstimate monitor{0.0, 0.0};
    CostEstimate repair{6000.0, 4.0};
    CostEstimate stop{15000.0, 8.0};
};

CostEstimate estimate_maintenance_cost(Action action, const CostModel& model = {});

enum class Role { JrMechanic, Mechanic, SrMechanic, TechLead };

struct RoleCapacity
{
    int headcount = 1;
    double daily_hours = 8.0;
};

struct StaffRoster
{
    std::map<Role, RoleCapacity> roles;

    /// One of each role at 8 h per day.
    static StaffRoster standard();

    bool has(Role role) const;
    /// headcount x daily hours; 0 for absent roles.
    double daily_capacity(Role role) const;
};

using Assignment = std::vector<Role>;

class RoleUnavailable : public std::runtime_error
{
public:
    explicit RoleUnavailable(Role role);

    Role role() const { return role_; }

private:
    Role role_;
};

/// Throws RoleUnavailable when the roster lacks a required role.
Assignment assign_maintenance_staff(Action action, const StaffRoster& roster);

/// Booked hours per (role, day offset).
class Calendar
{
public:
    double booked(Role role, int day) const;
    void book(Role role, int day, double hours);

    const std::map<std::pair<Role, int>, double>& bookings() const { return bookings_; }

private:
    std::map<std::pair<Role, int>, double> bookings_;
};

struct TaskDraft
{
    EngineId engine_id{};
    int rul = 0;
    ActionRecommendation recommendation;
    CostEstimate cost;
    Assignment staff;
};

struct MaintenanceTask
{
    EngineId engine_id{};
    int rul = 0;
    ActionRecommendation recommendation;
    CostEstimate cost;
    Assignment staff;
    int scheduled_day = 0;
    /// Set when an Immediate task was booked past capacity.
    bool capacity_overrun = false;

    bool operator==(const MaintenanceTask&) const = default;
};

class WindowUnschedulable : public std::runtime_error
{
public:
    explicit WindowUnschedulable(std::vector<EngineId> engine_ids);

    const std::vector<EngineId>& engine_ids() const { return engine_ids_; }

private:
    std::vector<EngineId> engine_ids_;
};

/// Earliest day in the window where every assigned role has the task's labor
/// hours free; books those hours. Immediate tasks always take day 0.
MaintenanceTask schedule_maintenance_task(const TaskDraft& draft, Calendar& calendar, const StaffRoster& roster);

struct PlanGroup
{
    Action action = Action::Monitor;
    TaskPriority priority = TaskPriority::Low;
    Window window;
    std::vector<EngineId> engine_ids;
    int rul_min = 0;
    int rul_max = 0;
    /// Per-engine cost and staff; constant within a group.
    CostEstimate unit_cost;
    Assignment staff;
    double total_cost_usd = 0.0;
    double total_labor_hours = 0.0;

    std::size_t engine_count() const { return engine_ids.size(); }
};

struct MaintenancePlan
{
    /// Ordered by engine id.
    std::vector<MaintenanceTask> tasks;
    /// Ordered by ascending minimum RUL.
    std::vector<PlanGroup> groups;
    double total_cost_usd = 0.0;
    double total_labor_hours = 0.0;
};

struct PlannerConfig
{
    PolicyBands bands;
    CostModel costs;
    StaffRoster roster = StaffRoster::standard();
};

/// suggest, estimate, assign and schedule for every snapshot, most urgent
/// first, on a private calendar; then group by (action, priority, window).
/// Throws std::invalid_argument for an empty input and WindowUnschedulable
/// listing every engine that did not fit.
MaintenancePlan consolidate_plan(std::span<const fleet::EngineSnapshot> snapshots, const PlannerConfig& config = {});

std::string_view to_string(Action action);
std::string_view to_string(TaskPriority priority);
std::string_view to_string(Role role);
std::optional<Action> parse_action(std::string_view text);
std::optional<TaskPriority> parse_priority(std::string_view text);
std::optional<Role> parse_role(std::string_view text);

/// "IMMEDIATE" or "Within N days".
std::string scheduled_time_label(const Window& window);
/// "16" or "28-50".
std::string rul_range_label(const PlanGroup& group);
/// "[tech_lead, sr_mechanic]".
std::string staff_label(const Assignment& staff);

nlohmann::json encode(const ActionRecommendation& recommendation);
nlohmann::json encode(const MaintenanceTask& task);
nlohmann::json encode(const MaintenancePlan& plan);
/// Inverse of encode(MaintenancePlan). Throws std::invalid_argument.
MaintenancePlan decode_plan(const nlohmann::json& document);

/// Table columns: # Engines, RUL Range, Recommended Action, Priority,
/// Cost (USD), Labor Hours, Assigned Staff, Scheduled Time.
std::string render_table(const MaintenancePlan& plan);
std::string render_csv(const MaintenancePlan& plan);

} // namespace intentops::maintenance
