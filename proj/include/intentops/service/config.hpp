// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "intentops/llm/chat_client.hpp"
#include "intentops/maintenance/planner.hpp"

#include <json.hpp>

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

namespace intentops::service {

enum class BackendKind { Rule, Llm };

/// What a message to a session that is already running a turn does.
enum class BusyPolicy { Queue, Reject };

class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Everything the service wires together. Credentials are never part of it;
/// only the name of the environment variable that holds one.
struct ServiceConfig
{
    std::filesystem::path data_path = "data/synthetic_FD001.txt";
    /// Empty: observation points come from `observation_fraction`.
    std::filesystem::path fixture_path;
    double observation_fraction = 0.6;
    std::size_t engine_limit = 20;

    maintenance::PlannerConfig planner;

    BackendKind backend = BackendKind::Rule;
    std::optional<llm::EndpointConfig> llm;
    int decompose_attempts = 3;
    int delegation_depth_limit = 3;

    std::string listen_host = "127.0.0.1";
    int listen_port = 8080;
    /// Static console assets served under /, if set.
    std::filesystem::path console_dir;

    bool auto_confirm_critical = false;
    BusyPolicy busy_policy = BusyPolicy::Queue;

    /// Throws ConfigError.
    void validate() const;
};

/// Relative paths are resolved against `base_dir`. Unknown keys and any
/// credential-looking key are rejected. Throws ConfigError.
ServiceConfig parse_config(const nlohmann::json& document, const std::filesystem::path& base_dir = {});
ServiceConfig load_config(const std::filesystem::path& path);

/// Non-secret view of the configuration (served at GET /config).
nlohmann::json encode(const ServiceConfig& config);

std::string_view to_string(BackendKind kind);
std::optional<BackendKind> parse_backend(std::string_view text);

} // namespace intentops::service
