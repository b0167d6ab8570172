// SPDX-License-Identifier: Apache-2.0
#include "intentops/maintenance/maintenance_tools.hpp"
#include "intentops/maintenance/planner.hpp"
#include "intentops/runtime/confirmation.hpp"

#include "support/oracles.hpp"
#include "support/test_support.hpp"

#include <doctest.h>

using namespace intentops;
using namespace intentops::maintenance;

namespace {

fleet::EngineSnapshot engine(int id, int rul)
{
    fleet::EngineSnapshot snapshot;
    snapshot.engine_id = make_engine_id(id);
    snapshot.rul = rul;
    return snapshot;
}

TaskDraft draft(int id, int rul, const StaffRoster& roster = StaffRoster::standard())
{
    const auto recommendation = suggest_maintenance_action(rul);
    return {make_engine_id(id), rul, recommendation, estimate_maintenance_cost(recommendation.action),
            assign_maintenance_staff(recommendation.action, roster)};
}

MaintenancePlan fixture_plan()
{
    const auto store = test::fixture_fleet();
    const auto selection = select_plannable(*store, {});
    return consolidate_plan(selection.snapshots);
}

} // namespace

TEST_CASE("band table")
{
    CHECK(suggest_maintenance_action(0) == ActionRecommendation{Action::Stop, TaskPriority::Critical, Window::immediate()});
    CHECK(suggest_maintenance_action(16).action == Action::Stop);
    CHECK(suggest_maintenance_action(24).action == Action::Stop);
    CHECK(suggest_maintenance_action(25) == ActionRecommendation{Action::Repair, TaskPriority::High, Window::within(3)});
    CHECK(suggest_maintenance_action(59).action == Action::Repair);
    CHECK(suggest_maintenance_action(60) == ActionRecommendation{Action::Monitor, TaskPriority::Low, Window::within(3)});
    CHECK(suggest_maintenance_action(79).window == Window::within(3));
    CHECK(suggest_maintenance_action(80) == ActionRecommendation{Action::Monitor, TaskPriority::Low, Window::within(7)});
    CHECK(suggest_maintenance_action(100000).window == Window::within(7));
    CHECK_THROWS_AS(suggest_maintenance_action(-1), std::invalid_argument);
    CHECK_THROWS_AS(suggest_maintenance_action(10, PolicyBands{30, 30, 80}), std::invalid_argument);
    CHECK_THROWS_AS(suggest_maintenance_action(10, PolicyBands{0, 30, 80}), std::invalid_argument);
}

TEST_CASE("severity never rises with RUL")
{
    int previous = severity(suggest_maintenance_action(0).action);
    for (int rul = 0; rul <= 400; ++rul) {
        const auto recommendation = suggest_maintenance_action(rul);
        const int current = severity(recommendation.action);
        REQUIRE(current == test::band_severity(rul));
        REQUIRE(current <= previous);
        REQUIRE(recommendation.window.last_day() <= 7);
        previous = current;
    }

    // Same shape for arbitrary valid bands.
    auto rng = test::seeded(2);
    std::uniform_int_distribution<int> edge(1, 200);
    for (int round = 0; round < 200; ++round) {
        std::array<int, 3> edges{edge(rng), edge(rng), edge(rng)};
        std::sort(edges.begin(), edges.end());
        if (edges[0] == edges[1] || edges[1] == edges[2])
            continue;
        const PolicyBands bands{edges[0], edges[1], edges[2]};
        int last = 2;
        for (int rul = 0; rul <= 250; ++rul) {
            const int current = severity(suggest_maintenance_action(rul, bands).action);
            REQUIRE(current <= last);
            last = current;
        }
    }
}

TEST_CASE("costs and staff per action")
{
    CHECK(estimate_maintenance_cost(Action::Monitor) == CostEstimate{0, 0});
    CHECK(estimate_maintenance_cost(Action::Repair) == CostEstimate{6000, 4});
    CHECK(estimate_maintenance_cost(Action::Stop) == CostEstimate{15000, 8});

    const auto roster = StaffRoster::standard();
    CHECK(assign_maintenance_staff(Action::Monitor, roster) == Assignment{Role::JrMechanic});
    CHECK(assign_maintenance_staff(Action::Repair, roster) == Assignment{Role::Mechanic, Role::JrMechanic});
    CHECK(assign_maintenance_staff(Action::Stop, roster) == Assignment{Role::TechLead, Role::SrMechanic});

    StaffRoster thin = roster;
    thin.roles.erase(Role::TechLead);
    try {
        assign_maintenance_staff(Action::Stop, thin);
        FAIL("expected RoleUnavailable");
    } catch (const RoleUnavailable& error) {
        CHECK(error.role() == Role::TechLead);
    }
    CHECK(thin.daily_capacity(Role::TechLead) == 0.0);
    CHECK(roster.daily_capacity(Role::Mechanic) == 8.0);
}

TEST_CASE("scheduling fills the earliest day with room")
{
    const auto roster = StaffRoster::standard();
    Calendar calendar;
    CHECK(schedule_maintenance_task(draft(1, 30), calendar, roster).scheduled_day == 0);
    CHECK(schedule_maintenance_task(draft(2, 31), calendar, roster).scheduled_day == 0);
    CHECK(schedule_maintenance_task(draft(3, 32), calendar, roster).scheduled_day == 1);
    CHECK(calendar.booked(Role::Mechanic, 0) == 8.0);
    CHECK(calendar.booked(Role::JrMechanic, 1) == 4.0);

    // Monitor tasks take no hours and always land on day 0.
    CHECK(schedule_maintenance_task(draft(4, 90), calendar, roster).scheduled_day == 0);

    SUBCASE("a full window is unschedulable")
    {
        for (int id = 10; id < 15; ++id)
            schedule_maintenance_task(draft(id, 40), calendar, roster);
        try {
            schedule_maintenance_task(draft(99, 40), calendar, roster);
            FAIL("expected WindowUnschedulable");
        } catch (const WindowUnschedulable& error) {
            CHECK(error.engine_ids() == std::vector{make_engine_id(99)});
        }
    }
    SUBCASE("immediate work overruns instead of moving")
    {
        const auto first = schedule_maintenance_task(draft(5, 3), calendar, roster);
        const auto second = schedule_maintenance_task(draft(6, 4), calendar, roster);
        CHECK(first.scheduled_day == 0);
        CHECK_FALSE(first.capacity_overrun);
        CHECK(second.scheduled_day == 0);
        CHECK(second.capacity_overrun);
        CHECK(calendar.booked(Role::TechLead, 0) == 16.0);
    }
}

TEST_CASE("randomized schedules never overbook")
{
    auto rng = test::seeded(3);
    std::uniform_int_distribution<int> fleet_size(1, 40);
    std::uniform_int_distribution<int> rul(0, 150);
    int planned = 0;
    int rejected = 0;
    for (int round = 0; round < 400; ++round) {
        PlannerConfig config;
        config.roster = test::random_roster(rng, false);
        std::vector<fleet::EngineSnapshot> snapshots;
        const int count = fleet_size(rng);
        for (int id = 1; id <= count; ++id)
            snapshots.push_back(engine(id, rul(rng)));
        try {
            const auto plan = consolidate_plan(snapshots, config);
            REQUIRE(plan.tasks.size() == snapshots.size());
            const auto problem = test::replay_schedule(plan.tasks, config.roster);
            INFO(problem);
            REQUIRE(problem.empty());
            ++planned;
        } catch (const WindowUnschedulable& error) {
            REQUIRE_FALSE(error.engine_ids().empty());
            ++rejected;
        }
    }
    CHECK(planned > 100);
    CHECK(rejected > 0);
}

TEST_CASE("fixture plan matches the reference table")
{
    const auto plan = fixture_plan();
    const auto diffs = test::compare_with_golden(plan);
    for (const auto& diff : diffs)
        MESSAGE(diff);
    CHECK(diffs.empty());
    CHECK(plan.tasks.size() == 19);
    CHECK(plan.total_cost_usd == 27000.0);
    CHECK(plan.total_labor_hours == 16.0);
    CHECK(plan.groups[0].engine_ids == std::vector{make_engine_id(8)});
    CHECK(render_table(plan) == test::read_file(test::kFixtureDir / "golden" / "plan_table.txt"));
}

TEST_CASE("consolidation partitions the input")
{
    auto rng = test::seeded(4);
    std::uniform_int_distribution<int> rul(0, 300);
    for (int round = 0; round < 100; ++round) {
        std::vector<fleet::EngineSnapshot> snapshots;
        for (int id = 1; id <= 15; ++id)
            snapshots.push_back(engine(id, rul(rng)));
        PlannerConfig config;
        config.roster.roles[Role::Mechanic].headcount = 10;
        config.roster.roles[Role::JrMechanic].headcount = 10;
        const auto plan = consolidate_plan(snapshots, config);

        std::vector<EngineId> seen;
        double cost = 0;
        for (const auto& group : plan.groups) {
            for (auto id : group.engine_ids) {
                seen.push_back(id);
                const auto& task = *std::find_if(plan.tasks.begin(), plan.tasks.end(),
                                                 [&](const auto& t) { return t.engine_id == id; });
                REQUIRE(task.recommendation.action == group.action);
                REQUIRE(task.rul >= group.rul_min);
                REQUIRE(task.rul <= group.rul_max);
            }
            cost += group.total_cost_usd;
            REQUIRE(group.total_cost_usd == group.unit_cost.cost_usd * static_cast<double>(group.engine_count()));
        }
        std::sort(seen.begin(), seen.end());
        REQUIRE(seen.size() == snapshots.size());
        REQUIRE(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
        REQUIRE(cost == plan.total_cost_usd);
        for (std::size_t i = 1; i < plan.groups.size(); ++i)
            REQUIRE(plan.groups[i - 1].rul_min <= plan.groups[i].rul_min);

        // Input order does not matter.
        std::shuffle(snapshots.begin(), snapshots.end(), rng);
        REQUIRE(encode(consolidate_plan(snapshots, config)) == encode(plan));
    }
}

TEST_CASE("consolidation edge cases")
{
    CHECK_THROWS_AS(consolidate_plan({}), std::invalid_argument);

    const std::vector single{engine(5, 0)};
    const auto plan = consolidate_plan(single);
    REQUIRE(plan.groups.size() == 1);
    CHECK(plan.groups[0].action == Action::Stop);
    CHECK(rul_range_label(plan.groups[0]) == "0");

    std::vector<fleet::EngineSnapshot> crowded;
    for (int id = 1; id <= 12; ++id)
        crowded.push_back(engine(id, 30 + id));
    try {
        consolidate_plan(crowded);
        FAIL("expected WindowUnschedulable");
    } catch (const WindowUnschedulable& error) {
        // Eight repairs fit in four days; the four least urgent do not.
        CHECK(error.engine_ids() ==
              std::vector{make_engine_id(9), make_engine_id(10), make_engine_id(11), make_engine_id(12)});
    }
}

TEST_CASE("labels and rendering")
{
    const auto plan = fixture_plan();
    CHECK(scheduled_time_label(Window::immediate()) == "IMMEDIATE");
    CHECK(scheduled_time_label(Window::within(1)) == "Within 1 day");
    CHECK(rul_range_label(plan.groups[1]) == "28-50");
    CHECK(staff_label({Role::TechLead, Role::SrMechanic}) == "[tech_lead, sr_mechanic]");

    const auto table = render_table(plan);
    CHECK(table.find("| # Engines | RUL Range | Recommended Action | Priority |") == 0);
    CHECK(table.find("Total: 19 engines, 27000 USD, 16 labor hours\n") != std::string::npos);

    const auto csv = render_csv(plan);
    CHECK(csv.find("1,16,STOP,critical,15000,8,\"[tech_lead, sr_mechanic]\",IMMEDIATE\n") != std::string::npos);
    CHECK(csv.find("Total") == std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);

    for (auto action : {Action::Monitor, Action::Repair, Action::Stop})
        CHECK(parse_action(to_string(action)) == action);
    for (auto role : {Role::JrMechanic, Role::Mechanic, Role::SrMechanic, Role::TechLead})
        CHECK(parse_role(to_string(role)) == role);
    CHECK_FALSE(parse_priority("urgent").has_value());
}

TEST_CASE("plan document round trip")
{
    const auto plan = fixture_plan();
    const auto document = encode(plan);
    CHECK(document["totals"]["engine_count"] == 19);
    CHECK(document["groups"][0]["window"]["kind"] == "immediate");
    const auto decoded = decode_plan(document);
    CHECK(decoded.tasks == plan.tasks);
    CHECK(encode(decoded) == document);
    CHECK(render_table(decoded) == render_table(plan));

    auto broken = document;
    broken["groups"][0]["action"] = "explode";
    CHECK_THROWS_AS(decode_plan(broken), std::invalid_argument);
    CHECK_THROWS_AS(decode_plan(nlohmann::json::object()), std::invalid_argument);
}

TEST_CASE("plannable selection")
{
    const auto store = test::fixture_fleet();
    const auto all = select_plannable(*store, {});
    CHECK(all.snapshots.size() == 19);
    CHECK(all.stopped == std::vector{make_engine_id(20)});

    const std::vector requested{make_engine_id(3), make_engine_id(20), make_engine_id(42)};
    const auto some = select_plannable(*store, requested);
    REQUIRE(some.snapshots.size() == 1);
    CHECK(some.snapshots[0].engine_id == make_engine_id(3));
    CHECK(some.stopped == std::vector{make_engine_id(20)});
    CHECK(some.unknown == std::vector{make_engine_id(42)});
}

TEST_CASE("maintenance tools")
{
    const auto store = test::fixture_fleet();
    MaintenanceToolkit toolkit(store, {});
    runtime::ToolRegistry registry;
    toolkit.register_tools(registry);
    runtime::ConfirmationGate gate;
    auto call = [&](std::string tool, nlohmann::json arguments) {
        return runtime::invoke_tool(registry, {std::move(tool), std::move(arguments)}, gate);
    };

    CHECK(call("suggest_maintenance_action", {{"rul", 16}}).payload["action"] == "stop");
    CHECK(call("suggest_maintenance_action", {{"rul", -3}}).payload["error"] == "negative_rul");
    CHECK(call("estimate_maintenance_cost", {{"action", "repair"}}).payload["cost_usd"] == 6000.0);
    CHECK(call("estimate_maintenance_cost", {{"action", "overhaul"}}).error_kind ==
          runtime::ToolErrorKind::SchemaViolation);
    CHECK(call("assign_maintenance_staff", {{"action", "stop"}}).payload["staff"] ==
          nlohmann::json::array({"tech_lead", "sr_mechanic"}));

    SUBCASE("ad-hoc scheduling books the shared calendar")
    {
        CHECK(call("schedule_maintenance_task", {{"engine_id", 4}}).payload["scheduled_day"] == 0);
        CHECK(call("schedule_maintenance_task", {{"engine_id", 4}, {"action", "repair"}}).payload["scheduled_day"] ==
              0);
        CHECK(call("schedule_maintenance_task", {{"engine_id", 4}}).payload["scheduled_day"] == 1);
        CHECK(toolkit.calendar().booked(Role::Mechanic, 0) == 8.0);
        CHECK(call("schedule_maintenance_task", {{"engine_id", 404}}).payload["error"] == "unknown_engine");
    }
    SUBCASE("consolidation reports exclusions")
    {
        const auto result = call("consolidate_maintenance_plan", nlohmann::json::object());
        REQUIRE(result.ok());
        CHECK(result.payload["excluded"]["stopped"] == nlohmann::json::array({20}));
        CHECK(test::compare_with_golden(decode_plan(result.payload["plan"])).empty());

        const auto none = call("consolidate_maintenance_plan", {{"engine_ids", {20, 77}}});
        CHECK(none.payload["error"] == "no_plannable_engines");
        CHECK(none.payload["excluded"]["unknown"] == nlohmann::json::array({77}));
    }
    SUBCASE("stop_engine waits for confirmation")
    {
        const auto hash = store->state_hash();
        const auto deferred = call("stop_engine", {{"engine_id", 8}});
        CHECK(deferred.error_kind == runtime::ToolErrorKind::ConfirmationRequired);
        CHECK(store->state_hash() == hash);
        REQUIRE(gate.pending().has_value());

        runtime::ConfirmationGate approved;
        approved.approve(*gate.pending());
        const auto stopped = runtime::invoke_tool(registry, {"stop_engine", {{"engine_id", 8}}}, approved);
        REQUIRE(stopped.ok());
        CHECK(stopped.payload["status"] == "stopped");
        CHECK(stopped.payload["task"]["priority"] == "critical");
        CHECK(store->snapshot(make_engine_id(8)).status == fleet::EngineStatus::Stopped);

        // The approval is spent; a repeat call is deferred again.
        CHECK(runtime::invoke_tool(registry, {"stop_engine", {{"engine_id", 8}}}, approved).error_kind ==
              runtime::ToolErrorKind::ConfirmationRequired);
    }
    SUBCASE("stopping twice is harmless")
    {
        const PlannerConfig config;
        const auto first = stop_engine(*store, make_engine_id(8), config);
        const auto hash = store->state_hash();
        CHECK(stop_engine(*store, make_engine_id(8), config) == first);
        CHECK(store->state_hash() == hash);
        CHECK_THROWS_AS(stop_engine(*store, make_engine_id(99), config), fleet::UnknownEngine);
    }
}
