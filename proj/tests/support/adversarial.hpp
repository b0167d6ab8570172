// SPDX-License-Identifier: Apache-2.0
#pragma once

// Randomized planner and topology for runtime property checks. The planner
// emits any decision at all: unregistered tools, mistyped arguments,
// delegation to strangers and agents that never answer.

#include "intentops/fleet/fleet_store.hpp"
#include "intentops/runtime/runtime.hpp"

#include "support/test_support.hpp"

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace intentops::test {

/// Fleet plus a registry with one tool per effect class.
struct AdversarialWorld
{
    std::shared_ptr<fleet::FleetStore> store;
    runtime::ToolRegistry tools;
    runtime::AgentDirectory agents;
    std::vector<std::string> agent_names;
    int depth_limit = 3;
};

inline const std::vector<std::string> kAdversarialTools{"read_engine", "advance_fleet", "halt_engine"};

inline void register_adversarial_tools(runtime::ToolRegistry& registry, std::shared_ptr<fleet::FleetStore> store)
{
    using runtime::ParamSpec;
    using runtime::ToolResult;
    using runtime::TypeTag;
    registry.register_tool({.name = "read_engine",
                            .description = "read",
                            .params = {ParamSpec{"engine_id", TypeTag::integer(), true, ""}},
                            .returns = TypeTag::document(),
                            .returns_description = "",
                            .effect = runtime::Effect::ReadOnly},
                           [store](const nlohmann::json& a) {
                               return ToolResult::success(
                                   fleet::encode(store->snapshot(make_engine_id(a.at("engine_id").get<int>()))));
                           });
    registry.register_tool({.name = "advance_fleet",
                            .description = "advance",
                            .params = {ParamSpec{"cycles", TypeTag::integer(), true, ""},
                                       ParamSpec{"note", TypeTag::string(), false, ""}},
                            .returns = TypeTag::document(),
                            .returns_description = "",
                            .effect = runtime::Effect::Mutating},
                           [store](const nlohmann::json& a) {
                               store->advance(a.at("cycles").get<int>());
                               return ToolResult::success({{"hash", store->state_hash()}});
                           });
    registry.register_tool({.name = "halt_engine",
                            .description = "halt",
                            .params = {ParamSpec{"engine_id", TypeTag::integer(), true, ""}},
                            .returns = TypeTag::document(),
                            .returns_description = "",
                            .effect = runtime::Effect::Critical},
                           [store](const nlohmann::json& a) {
                               store->set_status(make_engine_id(a.at("engine_id").get<int>()),
                                                 fleet::EngineStatus::Stopped);
                               return ToolResult::success({{"stopped", a.at("engine_id")}});
                           });
}

/// Random acyclic topology: agent i may delegate only to agents with a
/// higher index, so chains can be deeper than the depth limit.
inline void build_adversarial_world(AdversarialWorld& world, std::mt19937& rng)
{
    std::uniform_int_distribution<int> agent_count(1, 6);
    std::uniform_int_distribution<int> budget(1, 6);
    std::bernoulli_distribution coin(0.5);
    world.store = fleet::load_fleet(make_records({30, 30, 30}), 10, fleet::FractionPolicy{0.3});
    register_adversarial_tools(world.tools, world.store);
    const int count = agent_count(rng);
    for (int i = 0; i < count; ++i)
        world.agent_names.push_back("agent_" + std::to_string(i));
    // Add leaves first so every reference resolves.
    for (int i = count - 1; i >= 0; --i) {
        runtime::AgentSpec spec;
        spec.name = world.agent_names[static_cast<std::size_t>(i)];
        spec.max_steps = budget(rng);
        for (const auto& tool : kAdversarialTools)
            if (coin(rng))
                spec.tool_names.push_back(tool);
        for (int j = i + 1; j < count; ++j)
            if (j == i + 1 || coin(rng))
                spec.sub_agent_names.push_back(world.agent_names[static_cast<std::size_t>(j)]);
        world.agents.add(spec);
    }
}

/// Emits random decisions and checks, on every call, that a schema-rejected
/// tool call did not change the fleet.
class AdversarialPlanner final : public runtime::PlannerBackend
{
public:
    AdversarialPlanner(std::mt19937& rng, const AdversarialWorld& world) : rng_(rng), world_(world) {}

    runtime::PlannerStep next(const runtime::PlannerContext& context) override
    {
        const auto key = context.agent.name + "@" + std::to_string(context.depth);
        const auto hash = world_.store->state_hash();
        if (context.step > 0 && !context.observations.empty()) {
            const auto& last = context.observations.back();
            if (last.source == runtime::Observation::Source::Tool && last.error == "schema_violation") {
                ++schema_violations;
                if (hashes_[key] != hash)
                    ++hash_changes_on_violation;
            }
        }
        hashes_[key] = hash;
        max_step_seen[context.agent.name] = std::max(max_step_seen[context.agent.name], context.step);

        runtime::PlannerStep step;
        step.thought = "step " + std::to_string(context.step);
        std::uniform_int_distribution<int> pick(0, 99);
        const int roll = pick(rng_);
        if (roll < 8)
            step.decision = runtime::Respond{"done", nullptr};
        else if (roll < 35)
            step.decision = runtime::Delegate{random_agent(context.agent), "task", {{"n", roll}}};
        else
            step.decision = runtime::CallTool{random_call()};
        return step;
    }

    int schema_violations = 0;
    int hash_changes_on_violation = 0;
    std::map<std::string, int> max_step_seen;

private:
    // Mostly a legal sub-agent, so deep chains actually happen.
    std::string random_agent(const runtime::AgentSpec& agent)
    {
        std::bernoulli_distribution legal(0.7);
        if (!agent.sub_agent_names.empty() && legal(rng_))
            return agent.sub_agent_names.front();
        std::uniform_int_distribution<std::size_t> pick(0, world_.agent_names.size());
        const auto i = pick(rng_);
        return i == world_.agent_names.size() ? "stranger" : world_.agent_names[i];
    }

    runtime::ToolCall random_call()
    {
        static const std::vector<std::string> names{"read_engine", "advance_fleet", "halt_engine",
                                                    "format_disk", "", "read_engine "};
        std::uniform_int_distribution<std::size_t> name(0, names.size() - 1);
        std::uniform_int_distribution<int> shape(0, 7);
        std::uniform_int_distribution<int> number(1, 3);
        runtime::ToolCall call;
        call.tool = names[name(rng_)];
        switch (shape(rng_)) {
        case 0: call.arguments = nlohmann::json::object(); break;
        case 1: call.arguments = {{"engine_id", "two"}}; break;
        case 2: call.arguments = {{"cycles", 1.5}}; break;
        case 3: call.arguments = {{"cycles", number(rng_)}, {"extra", true}}; break;
        case 4: call.arguments = nlohmann::json::array({1, 2}); break;
        case 5: call.arguments = {{"cycles", number(rng_)}, {"note", 7}}; break;
        default: call.arguments = {{"engine_id", number(rng_)}, {"cycles", number(rng_)}}; break;
        }
        if (shape(rng_) == 0) {
            // Occasionally a well-formed call.
            if (call.tool == "advance_fleet")
                call.arguments = {{"cycles", number(rng_)}};
            else
                call.arguments = {{"engine_id", number(rng_)}};
        }
        return call;
    }

    std::mt19937& rng_;
    const AdversarialWorld& world_;
    std::map<std::string, std::uint64_t> hashes_;
};

struct PropertyTally
{
    int cases = 0;
    int decisions = 0;
    int schema_violations = 0;
    int unknown_tool_calls = 0;
    int depth_rejections = 0;
    std::vector<std::string> failures;
};

inline intent::Intent adversarial_intent()
{
    intent::Intent intent;
    intent.id = "adversarial";
    intent.raw_text = "anything";
    intent.expectations.push_back({"keep going", std::nullopt, intent::Objective::Maintain});
    return intent;
}

/// Runs `cases` random turns and checks every runtime property on each.
inline PropertyTally run_runtime_properties(int cases, std::uint32_t salt)
{
    PropertyTally tally;
    auto rng = seeded(salt);
    const auto intent = adversarial_intent();
    std::bernoulli_distribution auto_confirm(0.3);
    for (int c = 0; c < cases; ++c) {
        AdversarialWorld world;
        build_adversarial_world(world, rng);
        AdversarialPlanner planner(rng, world);
        runtime::Session session("prop");
        runtime::ConfirmationGate gate(auto_confirm(rng));
        const runtime::RuntimeOptions options{world.depth_limit};
        const auto fail = [&](const std::string& what) {
            tally.failures.push_back("case " + std::to_string(c) + ": " + what);
        };

        const auto result =
            runtime::run_turn(session, intent, world.agents, world.agent_names.front(), planner, world.tools, gate,
                              options);
        ++tally.cases;
        tally.decisions += result.decisions;
        tally.schema_violations += planner.schema_violations;
        if (planner.hash_changes_on_violation != 0)
            fail("schema violation changed the fleet");

        // Step budgets: a planner is never consulted past its agent's budget.
        for (const auto& [name, step] : planner.max_step_seen)
            if (step >= world.agents.find(name)->max_steps)
                fail(name + " was asked for step " + std::to_string(step));

        const auto events = session.trace.events();
        if (const auto problems = runtime::verify_trace_structure(events); !problems.empty())
            fail("trace: " + problems.front());

        // Single root, and every event reaches it.
        std::map<runtime::EventId, std::optional<runtime::EventId>> parent;
        std::map<runtime::EventId, const runtime::TraceEvent*> by_id;
        int roots = 0;
        for (const auto& event : events) {
            parent[event.id] = event.parent;
            by_id[event.id] = &event;
            if (!event.parent)
                ++roots;
        }
        if (roots != 1)
            fail("expected one root, found " + std::to_string(roots));

        // Accepted delegations nest at most depth_limit deep; rejected ones
        // are marked as such.
        int thoughts_per_frame_violation = 0;
        std::map<runtime::EventId, int> thoughts;
        for (const auto& event : events) {
            int depth = 0;
            for (auto p = event.parent; p; p = parent[*p]) {
                const auto* ancestor = by_id[*p];
                if (ancestor->kind == runtime::EventKind::Delegation && !ancestor->payload.contains("rejected"))
                    ++depth;
                if (depth > 64)
                    break;
            }
            if (event.kind == runtime::EventKind::Delegation && !event.payload.contains("rejected")) {
                if (depth + 1 > world.depth_limit)
                    fail("delegation nested " + std::to_string(depth + 1) + " deep");
            }
            if (event.kind == runtime::EventKind::Delegation && event.payload.value("rejected", "") ==
                                                                     "delegation_depth_exceeded")
                ++tally.depth_rejections;
            if (event.kind == runtime::EventKind::Thought)
                ++thoughts[*event.parent];
            if (event.kind == runtime::EventKind::ToolCallEvent) {
                const auto tool = event.payload.at("tool").get<std::string>();
                if (!world.tools.contains(tool)) {
                    ++tally.unknown_tool_calls;
                    // The result is the next event under this call.
                    const auto it = std::find_if(events.begin(), events.end(), [&](const auto& e) {
                        return e.parent == event.id && e.kind == runtime::EventKind::ToolResultEvent;
                    });
                    if (it == events.end() || it->payload.value("error_kind", "") != "unknown_tool")
                        fail("unregistered tool '" + tool + "' was not reported as unknown_tool");
                }
            }
        }
        for (const auto& [frame, count] : thoughts) {
            const auto& frame_event = *by_id[frame];
            const auto agent = frame_event.kind == runtime::EventKind::UserTurn
                                   ? world.agent_names.front()
                                   : frame_event.payload.at("to").get<std::string>();
            if (count > world.agents.find(agent)->max_steps)
                ++thoughts_per_frame_violation;
        }
        if (thoughts_per_frame_violation)
            fail("an agent frame took more decisions than its budget");
        if (result.max_depth > world.depth_limit)
            fail("max depth " + std::to_string(result.max_depth));
    }
    return tally;
}

} // namespace intentops::test
