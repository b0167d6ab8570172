// SPDX-License-Identifier: Apache-2.0
#include "intentops/service/orchestrator.hpp"

#include "intentops/fleet/cmapss.hpp"
#include "intentops/topology/topology.hpp"

namespace intentops::service {

using nlohmann::json;

struct Orchestrator::SessionSlot
{
    explicit SessionSlot(std::string id) : session(std::move(id)) {}

    std::mutex turn_mutex;
    runtime::Session session;
};

ServiceError::ServiceError(int status, std::string code, std::string message, json detail)
    : std::runtime_error(std::move(message)), status_(status), code_(std::move(code)), detail_(std::move(detail))
{
}

json ServiceError::body() const
{
    json out{{"error", code_}, {"message", what()}};
    if (!detail_.is_null())
        out["detail"] = detail_;
    return out;
}

std::shared_ptr<fleet::FleetStore> load_configured_fleet(const ServiceConfig& config)
{
    const auto records = fleet::parse_cmapss_file(config.data_path);
    if (config.fixture_path.empty())
        return fleet::load_fleet(records, config.engine_limit, fleet::FractionPolicy{config.observation_fraction});
    const auto fixture = fleet::load_fixture(config.fixture_path);
    return fleet::load_fleet(records, config.engine_limit, fixture.policy);
}

Orchestrator::Orchestrator(ServiceConfig config,
                           std::shared_ptr<fleet::FleetStore> store,
                           std::unique_ptr<llm::ChatClient> chat)
    : config_(std::move(config)), store_(std::move(store)), chat_(std::move(chat)),
      toolkit_(store_, config_.planner), agents_(topology::default_agents())
{
    config_.validate();
    if (config_.backend == BackendKind::Llm) {
        if (!chat_)
            throw ConfigError("the llm backend needs a chat client");
        decomposer_ = std::make_unique<decomposer::LlmBackend>(*chat_);
    } else {
        decomposer_ = std::make_unique<decomposer::RuleBackend>();
    }
    topology::register_default_tools(tools_, store_, toolkit_);
    if (const auto problems = agents_.validate(tools_); !problems.empty())
        throw runtime::InvalidAgentGraph(problems.front());
}

Orchestrator::~Orchestrator() = default;

std::unique_ptr<Orchestrator> Orchestrator::from_config(const ServiceConfig& config)
{
    config.validate();
    std::unique_ptr<llm::ChatClient> chat;
    if (config.backend == BackendKind::Llm)
        chat = llm::make_http_chat_client(*config.llm);
    return std::make_unique<Orchestrator>(config, load_configured_fleet(config), std::move(chat));
}

std::string Orchestrator::create_session()
{
    std::unique_lock lock(sessions_mutex_);
    auto id = "s" + std::to_string(next_session_++) + "-" + runtime::random_token().substr(0, 12);
    sessions_.emplace(id, std::make_shared<SessionSlot>(id));
    return id;
}

std::vector<std::string> Orchestrator::session_ids() const
{
    std::shared_lock lock(sessions_mutex_);
    std::vector<std::string> ids;
    for (const auto& [id, slot] : sessions_)
        ids.push_back(id);
    return ids;
}

std::shared_ptr<Orchestrator::SessionSlot> Orchestrator::slot(const std::string& session_id) const
{
    std::shared_lock lock(sessions_mutex_);
    const auto it = sessions_.find(session_id);
    if (it == sessions_.end())
        throw ServiceError(404, "unknown_session", "no session '" + session_id + "'");
    return it->second;
}

std::unique_lock<std::mutex> Orchestrator::lock_turn(SessionSlot& s) const
{
    if (config_.busy_policy == BusyPolicy::Queue)
        return std::unique_lock(s.turn_mutex);
    std::unique_lock lock(s.turn_mutex, std::try_to_lock);
    if (!lock.owns_lock())
        throw ServiceError(409, "busy", "session is running another turn");
    return lock;
}

std::map<std::string, double> Orchestrator::thresholds() const
{
    const auto& bands = config_.planner.bands;
    return {
        {"critical_rul", bands.stop_below},
        {"repair_rul", bands.repair_below},
        {"monitor_rul", bands.monitor_soon_below},
    };
}

json Orchestrator::post_message(const std::string& session_id, const std::string& text)
{
    const auto s = slot(session_id);
    const auto lock = lock_turn(*s);

    decomposer::DecompositionReport report;
    try {
        const decomposer::FleetSummary fleet{store_->engine_ids()};
        decomposer::DecomposeOptions options;
        options.max_attempts = config_.decompose_attempts;
        options.thresholds = thresholds();
        report = decomposer::decompose(text, *decomposer_, fleet, options);
    } catch (const decomposer::InvalidInput& error) {
        throw ServiceError(422, "invalid_input", error.what(), {{"violations", {error.what()}}});
    } catch (const decomposer::DecompositionFailed& error) {
        throw ServiceError(422, "decomposition_failed", error.what(), {{"violations", error.violations()}});
    } catch (const llm::BackendUnavailable& error) {
        throw ServiceError(502, "backend_unavailable", error.what());
    }

    std::unique_ptr<runtime::PlannerBackend> planner;
    if (config_.backend == BackendKind::Llm)
        planner = std::make_unique<runtime::LlmPlanner>(*chat_);
    else
        planner = topology::rule_planner();

    runtime::ConfirmationGate gate(config_.auto_confirm_critical);
    runtime::RuntimeOptions options;
    options.delegation_depth_limit = config_.delegation_depth_limit;
    runtime::TurnResult turn;
    try {
        turn = runtime::run_turn(s->session, report.intent, agents_, topology::kRootAgent, *planner, tools_, gate,
                                 options);
    } catch (const llm::BackendUnavailable& error) {
        throw ServiceError(502, "backend_unavailable", error.what());
    } catch (const llm::MalformedResponse& error) {
        throw ServiceError(502, "malformed_backend_response", error.what());
    }

    json out{
        {"session_id", session_id},
        {"decomposition", decomposer::encode(report)},
        {"response", turn.response},
        {"payload", turn.payload},
        {"budget_exceeded", turn.budget_exceeded},
        {"root_event", turn.root_event},
    };
    if (turn.payload.is_object() && turn.payload.contains("plan")) {
        out["plan"] = turn.payload.at("plan");
        std::lock_guard plan_lock(plan_mutex_);
        latest_plan_ = {{"session_id", session_id}, {"intent_id", report.intent.id}, {"plan", out["plan"]}};
    }
    if (turn.pending_confirmation) {
        out["pending_confirmation"] = turn.pending_confirmation->token;
        auto calls = json::array();
        for (const auto& call : turn.pending_confirmation->calls)
            calls.push_back(runtime::encode(call));
        out["pending_calls"] = calls;
    }
    return out;
}

json Orchestrator::confirm(const std::string& session_id, const std::string& token)
{
    const auto s = slot(session_id);
    const auto lock = lock_turn(*s);
    const auto& pending = s->session.pending_confirmation;
    if (!pending || token.empty() || pending->token != token)
        throw ServiceError(409, "stale_token", "token does not match a pending confirmation of this session");
    const auto confirmed = *pending;
    const auto turn = runtime::run_confirmation(s->session, confirmed, topology::kRootAgent, tools_);
    return {
        {"session_id", session_id},
        {"response", turn.response},
        {"payload", turn.payload},
        {"root_event", turn.root_event},
    };
}

json Orchestrator::fleet() const
{
    auto engines = json::array();
    for (const auto& snapshot : store_->snapshots())
        engines.push_back(fleet::encode(snapshot));
    return {{"engines", engines}};
}

json Orchestrator::engine(int engine_id) const
{
    const auto id = make_engine_id(engine_id);
    if (!store_->contains(id))
        throw ServiceError(404, "unknown_engine", "no engine " + std::to_string(engine_id));
    return fleet::encode(store_->snapshot(id));
}

json Orchestrator::latest_plan() const
{
    std::lock_guard lock(plan_mutex_);
    if (latest_plan_.is_null())
        throw ServiceError(404, "no_plan", "no plan has been produced yet");
    return latest_plan_;
}

json Orchestrator::trace(const std::string& session_id, runtime::EventId since) const
{
    const auto s = slot(session_id);
    auto events = json::array();
    runtime::EventId cursor = since;
    for (const auto& event : s->session.trace.since(since)) {
        events.push_back(runtime::encode(event));
        cursor = event.id;
    }
    return {{"session_id", session_id}, {"events", events}, {"cursor", cursor}};
}

json Orchestrator::config_document() const
{
    return encode(config_);
}

} // namespace intentops::service
