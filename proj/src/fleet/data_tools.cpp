// SPDX-License-Identifier: Apache-2.0
#include "intentops/fleet/data_tools.hpp"

namespace intentops::fleet {

using nlohmann::json;
using runtime::ParamSpec;
using runtime::ToolResult;
using runtime::TypeTag;

namespace {

ToolResult unknown_engine(EngineId id)
{
    return ToolResult::failure(runtime::ToolErrorKind::ExecutionFailed,
                               {{"error", "unknown_engine"}, {"engine_id", to_int(id)}});
}

EngineId engine_argument(const json& arguments)
{
    return make_engine_id(arguments.at("engine_id").get<std::int32_t>());
}

} // namespace

void register_data_tools(runtime::ToolRegistry& registry, std::shared_ptr<FleetStore> store)
{
    registry.register_tool(
        {
            .name = "get_engine_data",
            .description = "Current telemetry of one engine: observed cycle, three operational settings, "
                           "21 sensor readings and operational status.",
            .params = {ParamSpec{"engine_id", TypeTag::integer(), true, "Engine (unit) number"}},
            .returns = TypeTag::document(),
            .returns_description = "Engine snapshot document",
            .effect = runtime::Effect::ReadOnly,
        },
        [store](const json& arguments) {
            const auto id = engine_argument(arguments);
            if (!store->contains(id))
                return unknown_engine(id);
            return ToolResult::success(encode(store->snapshot(id)));
        });

    registry.register_tool(
        {
            .name = "predict_engine_rul",
            .description = "Remaining useful life of one engine in cycles. Values are dataset ground truth.",
            .params = {ParamSpec{"engine_id", TypeTag::integer(), true, "Engine (unit) number"}},
            .returns = TypeTag::document(),
            .returns_description = "{engine_id, rul, method}",
            .effect = runtime::Effect::ReadOnly,
        },
        [store](const json& arguments) {
            const auto id = engine_argument(arguments);
            if (!store->contains(id))
                return unknown_engine(id);
            return ToolResult::success(encode(store->predict_rul(id)));
        });

    registry.register_tool(
        {
            .name = "get_fleet_data",
            .description = "Snapshots with RUL for several engines in one call. Omit engine_ids for the "
                           "whole fleet.",
            .params = {ParamSpec{"engine_ids", TypeTag::int_list(), false, "Engines to include"}},
            .returns = TypeTag::document(),
            .returns_description = "{snapshots: [...], unknown_engine_ids: [...]}",
            .effect = runtime::Effect::ReadOnly,
        },
        [store](const json& arguments) {
            json snapshots = json::array();
            json unknown = json::array();
            const auto ids = arguments.find("engine_ids");
            if (ids == arguments.end() || ids->is_null()) {
                for (const auto& snapshot : store->snapshots())
                    snapshots.push_back(encode(snapshot));
            } else {
                for (const auto& value : *ids) {
                    const auto id = make_engine_id(value.get<std::int32_t>());
                    if (store->contains(id))
                        snapshots.push_back(encode(store->snapshot(id)));
                    else
                        unknown.push_back(to_int(id));
                }
            }
            return ToolResult::success({{"snapshots", snapshots}, {"unknown_engine_ids", unknown}});
        });
}

} // namespace intentops::fleet
