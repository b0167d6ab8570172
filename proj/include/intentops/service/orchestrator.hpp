// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "intentops/decomposer/decomposer.hpp"
#include "intentops/fleet/fleet_store.hpp"
#include "intentops/llm/chat_client.hpp"
#include "intentops/maintenance/maintenance_tools.hpp"
#include "intentops/runtime/runtime.hpp"
#include "intentops/service/config.hpp"

#include <json.hpp>

#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace intentops::service {

/// A request the service refuses, with the HTTP status it maps to.
class ServiceError : public std::runtime_error
{
public:
    ServiceError(int status, std::string code, std::string message, nlohmann::json detail = nullptr);

    int status() const { return status_; }
    const std::string& code() const { return code_; }
    /// {"error": code, "message": ..., "detail"?: ...}
    nlohmann::json body() const;

private:
    int status_;
    std::string code_;
    nlohmann::json detail_;
};

/// Loads the data file and places observation points per the config's
/// fixture or observation fraction.
std::shared_ptr<fleet::FleetStore> load_configured_fleet(const ServiceConfig& config);

/// Sessions, intent submission and the read-side views, independent of any
/// transport. Thread-safe; turns within one session are serialized.
class Orchestrator
{
public:
    /// `chat` is required for the llm backend and ignored otherwise.
    Orchestrator(ServiceConfig config,
                 std::shared_ptr<fleet::FleetStore> store,
                 std::unique_ptr<llm::ChatClient> chat = nullptr);
    ~Orchestrator();

    Orchestrator(const Orchestrator&) = delete;
    Orchestrator& operator=(const Orchestrator&) = delete;

    /// Loads the fleet and, for the llm backend, connects the HTTP client.
    static std::unique_ptr<Orchestrator> from_config(const ServiceConfig& config);

    std::string create_session();
    std::vector<std::string> session_ids() const;

    /// decompose, then run a turn. Returns {session_id, decomposition,
    /// response, payload, plan?, pending_confirmation?, pending_calls?,
    /// budget_exceeded}.
    nlohmann::json post_message(const std::string& session_id, const std::string& text);

    /// Runs the session's deferred critical calls. 409 unless `token` is the
    /// session's current pending token; tokens work once.
    nlohmann::json confirm(const std::string& session_id, const std::string& token);

    nlohmann::json fleet() const;
    nlohmann::json engine(int engine_id) const;
    nlohmann::json latest_plan() const;
    /// Events with id > since and the cursor for the next poll (the last
    /// returned id, or `since` when nothing is new).
    nlohmann::json trace(const std::string& session_id, runtime::EventId since) const;
    nlohmann::json config_document() const;

    const ServiceConfig& config() const { return config_; }
    fleet::FleetStore& store() { return *store_; }
    const runtime::ToolRegistry& tools() const { return tools_; }

private:
    struct SessionSlot;

    std::shared_ptr<SessionSlot> slot(const std::string& session_id) const;
    std::unique_lock<std::mutex> lock_turn(SessionSlot& slot) const;
    std::map<std::string, double> thresholds() const;

    ServiceConfig config_;
    std::shared_ptr<fleet::FleetStore> store_;
    std::unique_ptr<llm::ChatClient> chat_;
    std::unique_ptr<decomposer::DecomposerBackend> decomposer_;
    maintenance::MaintenanceToolkit toolkit_;
    runtime::ToolRegistry tools_;
    runtime::AgentDirectory agents_;

    mutable std::shared_mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<SessionSlot>> sessions_;
    std::uint64_t next_session_ = 1;

    mutable std::mutex plan_mutex_;
    nlohmann::json latest_plan_;
};

} // namespace intentops::service
