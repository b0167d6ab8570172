// SPDX-License-Identifier: Apache-2.0
#include "intentops/service/config.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>

namespace intentops::service {

using nlohmann::json;

namespace {

// Keys that suggest someone pasted a secret into the file.
constexpr std::array<std::string_view, 5> kSecretKeys{"api_key", "apikey", "token", "secret", "password"};

std::string lower(std::string_view text)
{
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

void reject_secrets(const json& document, const std::string& path)
{
    if (!document.is_object())
        return;
    for (const auto& [key, value] : document.items()) {
        const auto k = lower(key);
        if (k != "api_key_env" && std::any_of(kSecretKeys.begin(), kSecretKeys.end(), [&](std::string_view s) {
                return k.find(s) != std::string::npos;
            }))
            throw ConfigError(path + key + ": credentials come from the environment, not the config file");
        reject_secrets(value, path + key + ".");
    }
}

void only_keys(const json& object, std::initializer_list<std::string_view> allowed, const std::string& where)
{
    if (!object.is_object())
        throw ConfigError(where + ": expected an object");
    for (const auto& [key, value] : object.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError(where + ": unknown key '" + key + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value)
{
    std::filesystem::path path(value);
    if (path.empty() || path.is_absolute() || base.empty())
        return path;
    return base / path;
}

maintenance::CostEstimate cost_entry(const json& document, const std::string& where)
{
    only_keys(document, {"cost_usd", "labor_hours"}, where);
    maintenance::CostEstimate cost{document.at("cost_usd").get<double>(), document.at("labor_hours").get<double>()};
    if (cost.cost_usd < 0 || cost.labor_hours < 0)
        throw ConfigError(where + ": cost and labor hours must be non-negative");
    return cost;
}

} // namespace

void ServiceConfig::validate() const
{
    try {
        planner.bands.validate();
    } catch (const std::invalid_argument& error) {
        throw ConfigError(error.what());
    }
    if (planner.costs.monitor != maintenance::CostEstimate{0.0, 0.0})
        throw ConfigError("costs.monitor must be zero cost and zero hours");
    if (engine_limit == 0)
        throw ConfigError("engine_limit must be positive");
    if (!(observation_fraction > 0.0 && observation_fraction <= 1.0))
        throw ConfigError("observation_fraction must be in (0, 1]");
    if (backend == BackendKind::Llm && (!llm || llm->base_url.empty() || llm->model.empty()))
        throw ConfigError("the llm backend needs llm.base_url and llm.model");
    if (decompose_attempts < 1)
        throw ConfigError("decompose_attempts must be at least 1");
    if (delegation_depth_limit < 1)
        throw ConfigError("delegation_depth_limit must be at least 1");
    if (listen_port < 0 || listen_port > 65535)
        throw ConfigError("listen port out of range");
}

ServiceConfig parse_config(const json& document, const std::filesystem::path& base_dir)
{
    reject_secrets(document, "");
    only_keys(document,
              {"data", "fixture", "observation_fraction", "engine_limit", "bands", "costs", "roster", "backend",
               "llm", "decompose_attempts", "delegation_depth_limit", "listen", "console_dir",
               "auto_confirm_critical", "busy_policy"},
              "config");

    ServiceConfig config;
    try {
        if (document.contains("data"))
            config.data_path = resolve(base_dir, document.at("data").get<std::string>());
        if (document.contains("fixture"))
            config.fixture_path = resolve(base_dir, document.at("fixture").get<std::string>());
        config.observation_fraction = document.value("observation_fraction", config.observation_fraction);
        if (document.contains("engine_limit")) {
            const auto limit = document.at("engine_limit").get<long long>();
            if (limit <= 0)
                throw ConfigError("engine_limit must be positive");
            config.engine_limit = static_cast<std::size_t>(limit);
        }

        if (const auto it = document.find("bands"); it != document.end()) {
            only_keys(*it, {"stop_below", "repair_below", "monitor_soon_below"}, "bands");
            auto& bands = config.planner.bands;
            bands.stop_below = it->value("stop_below", bands.stop_below);
            bands.repair_below = it->value("repair_below", bands.repair_below);
            bands.monitor_soon_below = it->value("monitor_soon_below", bands.monitor_soon_below);
        }
        if (const auto it = document.find("costs"); it != document.end()) {
            only_keys(*it, {"monitor", "repair", "stop"}, "costs");
            auto& costs = config.planner.costs;
            if (it->contains("monitor"))
                costs.monitor = cost_entry(it->at("monitor"), "costs.monitor");
            if (it->contains("repair"))
                costs.repair = cost_entry(it->at("repair"), "costs.repair");
            if (it->contains("stop"))
                costs.stop = cost_entry(it->at("stop"), "costs.stop");
        }
        if (const auto it = document.find("roster"); it != document.end()) {
            if (!it->is_object())
                throw ConfigError("roster: expected an object");
            config.planner.roster.roles.clear();
            for (const auto& [name, entry] : it->items()) {
                const auto role = maintenance::parse_role(name);
                if (!role)
                    throw ConfigError("roster: unknown role '" + name + "'");
                only_keys(entry, {"headcount", "daily_hours"}, "roster." + name);
                maintenance::RoleCapacity capacity;
                capacity.headcount = entry.value("headcount", capacity.headcount);
                capacity.daily_hours = entry.value("daily_hours", capacity.daily_hours);
                if (capacity.headcount < 0 || capacity.daily_hours < 0)
                    throw ConfigError("roster." + name + ": negative capacity");
                config.planner.roster.roles[*role] = capacity;
            }
        }

        if (document.contains("backend")) {
            const auto name = document.at("backend").get<std::string>();
            const auto kind = parse_backend(name);
            if (!kind)
                throw ConfigError("backend must be 'rule' or 'llm', not '" + name + "'");
            config.backend = *kind;
        }
        if (const auto it = document.find("llm"); it != document.end()) {
            only_keys(*it, {"base_url", "model", "api_key_env", "max_in_flight", "timeout_seconds"}, "llm");
            llm::EndpointConfig endpoint;
            endpoint.base_url = it->value("base_url", "");
            endpoint.model = it->value("model", "");
            endpoint.api_key_env = it->value("api_key_env", endpoint.api_key_env);
            endpoint.max_in_flight = it->value("max_in_flight", endpoint.max_in_flight);
            endpoint.timeout = std::chrono::seconds(it->value("timeout_seconds", 60));
            if (endpoint.max_in_flight < 1)
                throw ConfigError("llm.max_in_flight must be at least 1");
            config.llm = endpoint;
        }
        config.decompose_attempts = document.value("decompose_attempts", config.decompose_attempts);
        config.delegation_depth_limit = document.value("delegation_depth_limit", config.delegation_depth_limit);

        if (const auto it = document.find("listen"); it != document.end()) {
            only_keys(*it, {"host", "port"}, "listen");
            config.listen_host = it->value("host", config.listen_host);
            config.listen_port = it->value("port", config.listen_port);
        }
        if (document.contains("console_dir"))
            config.console_dir = resolve(base_dir, document.at("console_dir").get<std::string>());
        config.auto_confirm_critical = document.value("auto_confirm_critical", config.auto_confirm_critical);
        if (document.contains("busy_policy")) {
            const auto policy = document.at("busy_policy").get<std::string>();
            if (policy == "queue")
                config.busy_policy = BusyPolicy::Queue;
            else if (policy == "reject")
                config.busy_policy = BusyPolicy::Reject;
            else
                throw ConfigError("busy_policy must be 'queue' or 'reject'");
        }
    } catch (const json::exception& error) {
        throw ConfigError(std::string("config: ") + error.what());
    }
    config.validate();
    return config;
}

ServiceConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config " + path.string());
    json document;
    try {
        document = json::parse(in);
    } catch (const json::parse_error& error) {
        throw ConfigError(path.string() + ": " + error.what());
    }
    return parse_config(document, path.parent_path());
}

json encode(const ServiceConfig& config)
{
    const auto& bands = config.planner.bands;
    json roster = json::object();
    for (const auto& [role, capacity] : config.planner.roster.roles)
        roster[std::string(maintenance::to_string(role))] = {{"headcount", capacity.headcount},
                                                             {"daily_hours", capacity.daily_hours}};
    const auto cost = [](const maintenance::CostEstimate& c) {
        return json{{"cost_usd", c.cost_usd}, {"labor_hours", c.labor_hours}};
    };
    json out{
        {"bands",
         {{"stop_below", bands.stop_below},
          {"repair_below", bands.repair_below},
          {"monitor_soon_below", bands.monitor_soon_below}}},
        {"costs",
         {{"monitor", cost(config.planner.costs.monitor)},
          {"repair", cost(config.planner.costs.repair)},
          {"stop", cost(config.planner.costs.stop)}}},
        {"roster", roster},
        {"engine_limit", config.engine_limit},
        {"backend", to_string(config.backend)},
        {"auto_confirm_critical", config.auto_confirm_critical},
        {"busy_policy", config.busy_policy == BusyPolicy::Queue ? "queue" : "reject"},
    };
    if (config.llm)
        out["llm"] = {{"base_url", config.llm->base_url},
                      {"model", config.llm->model},
                      {"api_key_env", config.llm->api_key_env}};
    return out;
}

std::string_view to_string(BackendKind kind)
{
    return kind == BackendKind::Rule ? "rule" : "llm";
}

std::optional<BackendKind> parse_backend(std::string_view text)
{
    if (text == "rule")
        return BackendKind::Rule;
    if (text == "llm")
        return BackendKind::Llm;
    return std::nullopt;
}

} // namespace intentops::service
