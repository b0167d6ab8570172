// SPDX-License-Identifier: Apache-2.0
#include "intentops/maintenance/planner.hpp"
#include "intentops/service/config.hpp"
#include "intentops/service/http_server.hpp"
#include "intentops/service/orchestrator.hpp"

#include "support/oracles.hpp"
#include "support/test_support.hpp"

#include <doctest.h>
#include <httplib.h>

#include <chrono>
#include <condition_variable>
#include <future>
#include <thread>

using namespace intentops;
using namespace intentops::service;
using nlohmann::json;

namespace {

const std::filesystem::path kConfigDir = std::filesystem::path(INTENTOPS_DATA_DIR).parent_path() / "config";

ServiceConfig default_config(bool auto_confirm = false)
{
    auto config = load_config(kConfigDir / "default.json");
    config.auto_confirm_critical = auto_confirm;
    return config;
}

std::unique_ptr<Orchestrator> make_service(bool auto_confirm = false)
{
    return Orchestrator::from_config(default_config(auto_confirm));
}

int error_status(const std::function<void()>& action, std::string* code = nullptr)
{
    try {
        action();
    } catch (const ServiceError& error) {
        if (code)
            *code = error.code();
        return error.status();
    }
    return 0;
}

int stop_calls(const Orchestrator& service, const std::string& session)
{
    int count = 0;
    const auto trace = service.trace(session, 0);
    for (const auto& event : trace["events"])
        if (event["kind"] == "tool_call" && event["payload"]["tool"] == "stop_engine")
            ++count;
    return count;
}

// Blocks inside complete() until released, to hold a session's turn open.
class GateChatClient final : public llm::ChatClient
{
public:
    llm::ChatReply complete(const llm::ChatRequest&) override
    {
        std::unique_lock lock(mutex_);
        entered_ = true;
        changed_.notify_all();
        changed_.wait(lock, [&] { return released_; });
        throw llm::BackendUnavailable("released");
    }

    void wait_entered()
    {
        std::unique_lock lock(mutex_);
        changed_.wait(lock, [&] { return entered_; });
    }

    void release()
    {
        std::lock_guard lock(mutex_);
        released_ = true;
        changed_.notify_all();
    }

private:
    std::mutex mutex_;
    std::condition_variable changed_;
    bool entered_ = false;
    bool released_ = false;
};

ServiceConfig llm_config()
{
    auto config = default_config();
    config.backend = BackendKind::Llm;
    config.llm = llm::EndpointConfig{"http://127.0.0.1:9/v1", "m", "INTENTOPS_TEST_KEY", 1, std::chrono::seconds(1)};
    return config;
}

} // namespace

TEST_CASE("shipped configuration")
{
    const auto config = default_config();
    CHECK(config.data_path.is_absolute());
    CHECK(std::filesystem::exists(config.data_path));
    CHECK(std::filesystem::exists(config.fixture_path));
    CHECK(config.planner.bands == maintenance::PolicyBands{25, 60, 80});
    CHECK(config.planner.costs.stop.cost_usd == 15000.0);
    CHECK(config.backend == BackendKind::Rule);
    REQUIRE(config.llm.has_value());
    CHECK(config.llm->api_key_env == "OPENAI_API_KEY");
    CHECK(config.busy_policy == BusyPolicy::Queue);

    const auto document = encode(config);
    CHECK(document["bands"]["stop_below"] == 25);
    CHECK(document["llm"]["api_key_env"] == "OPENAI_API_KEY");
    CHECK(document.dump().find("data_path") == std::string::npos);
}

TEST_CASE("configuration errors")
{
    const auto rejects = [](const char* text) {
        CHECK_THROWS_AS(parse_config(json::parse(text), "/base"), ConfigError);
    };
    rejects(R"({"llm": {"base_url": "x", "model": "m", "api_key": "sk-123"}})");
    rejects(R"({"token": "abc"})");
    rejects(R"({"roster": {"mechanic": {"headcount": 1, "password": "x"}}})");
    rejects(R"({"colour": "blue"})");
    rejects(R"({"bands": {"stop_below": 60, "repair_below": 25, "monitor_soon_below": 80}})");
    rejects(R"({"bands": {"stop_below": 0}})");
    rejects(R"({"backend": "llm"})");
    rejects(R"({"backend": "oracle"})");
    rejects(R"({"roster": {"intern": {"headcount": 1}}})");
    rejects(R"({"costs": {"repair": {"cost_usd": -1, "labor_hours": 1}}})");
    rejects(R"({"engine_limit": 0})");
    rejects(R"({"observation_fraction": 0})");
    rejects(R"({"listen": {"port": 70000}})");
    rejects(R"({"busy_policy": "panic"})");
    rejects(R"([1, 2])");

    const auto config =
        parse_config(json::parse(R"({"data": "d/train.txt", "fixture": "/abs/f.json", "backend": "llm",
                                     "llm": {"base_url": "http://h/v1", "model": "m"}})"),
                     "/base");
    CHECK(config.data_path == std::filesystem::path("/base/d/train.txt"));
    CHECK(config.fixture_path == std::filesystem::path("/abs/f.json"));
    CHECK(config.backend == BackendKind::Llm);
    CHECK(config.llm->api_key_env == "OPENAI_API_KEY");

    CHECK_THROWS_AS(load_config(kConfigDir / "missing.json"), ConfigError);
}

TEST_CASE("fleet loading from configuration")
{
    auto config = default_config();
    CHECK(load_configured_fleet(config)->snapshot(make_engine_id(8)).rul == 16);

    config.fixture_path.clear();
    const auto fractional = load_configured_fleet(config);
    CHECK(fractional->engine_ids().size() == 20);
    const auto snapshot = fractional->snapshot(make_engine_id(1));
    CHECK(snapshot.observed_cycle == static_cast<int>(std::ceil(0.6 * snapshot.last_cycle)));
}

TEST_CASE("sessions")
{
    const auto service = make_service();
    const auto a = service->create_session();
    const auto b = service->create_session();
    CHECK(a != b);
    const auto ids = service->session_ids();
    CHECK(std::find(ids.begin(), ids.end(), a) != ids.end());
    CHECK(std::find(ids.begin(), ids.end(), b) != ids.end());
    std::string code;
    CHECK(error_status([&] { service->post_message("nope", "hi"); }, &code) == 404);
    CHECK(code == "unknown_session");
}

TEST_CASE("fleet maintenance request end to end")
{
    const auto service = make_service(true);
    const auto session = service->create_session();
    CHECK(error_status([&] { service->latest_plan(); }) == 404);

    const auto result = service->post_message(session, test::kUseCasePrompt);
    const auto& decomposition = result["decomposition"]["intent"];
    CHECK(decomposition["targets"]["variant"] == "dynamic");
    CHECK(result["decomposition"]["backend_name"] == "rule");
    REQUIRE(result.contains("plan"));
    CHECK(test::compare_with_golden(maintenance::decode_plan(result["plan"])).empty());
    CHECK(result["plan"]["totals"]["cost_usd"] == 27000.0);
    CHECK(result["plan"]["totals"]["labor_hours"] == 16.0);
    CHECK_FALSE(result.contains("pending_confirmation"));
    CHECK(stop_calls(*service, session) == 1);
    CHECK(service->engine(8)["status"] == "stopped");

    const auto latest = service->latest_plan();
    CHECK(latest["session_id"] == session);
    CHECK(latest["plan"] == result["plan"]);
}

TEST_CASE("critical actions need a session-scoped single-use token")
{
    const auto service = make_service();
    const auto session = service->create_session();
    const auto other = service->create_session();

    const auto result = service->post_message(session, "stop engine 7");
    REQUIRE(result.contains("pending_confirmation"));
    const auto token = result["pending_confirmation"].get<std::string>();
    CHECK(result["pending_calls"][0]["arguments"]["engine_id"] == 7);
    CHECK(service->engine(7)["status"] == "running");

    std::string code;
    CHECK(error_status([&] { service->confirm(session, "deadbeef"); }, &code) == 409);
    CHECK(code == "stale_token");
    CHECK(error_status([&] { service->confirm(other, token); }) == 409);
    CHECK(error_status([&] { service->confirm(session, ""); }) == 409);
    CHECK(service->engine(7)["status"] == "running");

    const auto confirmed = service->confirm(session, token);
    CHECK(confirmed["response"] == "Confirmed: executed 1 critical action(s)");
    CHECK(service->engine(7)["status"] == "stopped");
    CHECK(error_status([&] { service->confirm(session, token); }) == 409);
}

TEST_CASE("a new message replaces an unconfirmed request")
{
    const auto service = make_service();
    const auto session = service->create_session();
    const auto first = service->post_message(session, "stop engine 7")["pending_confirmation"].get<std::string>();
    service->post_message(session, "check engine 3");
    CHECK(error_status([&] { service->confirm(session, first); }) == 409);
}

TEST_CASE("request errors")
{
    const auto service = make_service();
    const auto session = service->create_session();
    std::string code;
    CHECK(error_status([&] { service->post_message(session, ""); }, &code) == 422);
    CHECK(code == "invalid_input");
    try {
        service->post_message(session, "hello there");
        FAIL("expected ServiceError");
    } catch (const ServiceError& error) {
        CHECK(error.status() == 422);
        CHECK(error.body()["error"] == "decomposition_failed");
        CHECK(error.body()["detail"]["violations"] == json::array({"no expectations"}));
    }
    CHECK(error_status([&] { service->engine(99); }, &code) == 404);
    CHECK(code == "unknown_engine");
    CHECK(error_status([&] { service->trace("nope", 0); }) == 404);
}

TEST_CASE("model backend failures are 502")
{
    const auto config = llm_config();

    Orchestrator offline(config, load_configured_fleet(config), std::make_unique<llm::ReplayChatClient>(
                                                                    std::vector<std::string>{}));
    std::string code;
    CHECK(error_status([&] { offline.post_message(offline.create_session(), test::kUseCasePrompt); }, &code) == 502);
    CHECK(code == "backend_unavailable");

    auto replies = test::load_transcript("decompose_use_case.json");
    replies.push_back(test::completion_body("I would rather not decide."));
    Orchestrator confused(config, load_configured_fleet(config),
                          std::make_unique<llm::ReplayChatClient>(std::move(replies)));
    CHECK(error_status([&] { confused.post_message(confused.create_session(), test::kUseCasePrompt); }, &code) ==
          502);
    CHECK(code == "malformed_backend_response");
}

TEST_CASE("model backend end to end with replayed replies")
{
    auto config = llm_config();
    config.auto_confirm_critical = true;
    auto replies = test::load_transcript("decompose_use_case.json");
    for (auto& body : test::load_transcript("plan_use_case.json"))
        replies.push_back(std::move(body));
    Orchestrator service(config, load_configured_fleet(config),
                         std::make_unique<llm::ReplayChatClient>(std::move(replies)));
    const auto session = service.create_session();
    const auto result = service.post_message(session, test::kUseCasePrompt);
    CHECK(result["decomposition"]["backend_name"] == "llm");
    CHECK(result["response"] == "Plan consolidated; engine 8 stopped.");
    CHECK(stop_calls(service, session) == 1);
}

TEST_CASE("busy sessions")
{
    auto config = llm_config();
    config.busy_policy = BusyPolicy::Reject;
    auto chat = std::make_unique<GateChatClient>();
    auto* gate = chat.get();
    Orchestrator service(config, load_configured_fleet(config), std::move(chat));
    const auto session = service.create_session();
    const auto free_session = service.create_session();

    auto running = std::async(std::launch::async, [&] {
        return error_status([&] { service.post_message(session, "check engine 3"); });
    });
    gate->wait_entered();
    std::string code;
    CHECK(error_status([&] { service.post_message(session, "check engine 4"); }, &code) == 409);
    CHECK(code == "busy");
    // Other sessions and read views are unaffected.
    CHECK(service.fleet()["engines"].size() == 20);
    CHECK(service.trace(free_session, 0)["events"].empty());
    gate->release();
    CHECK(running.get() == 502);
}

TEST_CASE("trace cursor pages reproduce the whole trace")
{
    const auto service = make_service(true);
    const auto session = service->create_session();
    service->post_message(session, "check engine 3");
    service->post_message(session, test::kUseCasePrompt);
    const auto full = service->trace(session, 0);
    const auto head = full["cursor"].get<runtime::EventId>();
    CHECK(head == full["events"].size());
    CHECK(full["events"][0]["kind"] == "user_turn");

    auto rng = test::seeded(5);
    for (int round = 0; round < 50; ++round) {
        std::uniform_int_distribution<int> step(1, 8);
        json pages = json::array();
        runtime::EventId cursor = 0;
        while (true) {
            auto page = service->trace(session, cursor);
            const auto events = page["events"];
            if (events.empty()) {
                CHECK(page["cursor"] == cursor);
                break;
            }
            // Take a prefix only, as a slow poller might.
            const auto take = std::min<std::size_t>(static_cast<std::size_t>(step(rng)), events.size());
            for (std::size_t i = 0; i < take; ++i)
                pages.push_back(events[i]);
            cursor = events[take - 1]["id"].get<runtime::EventId>();
        }
        REQUIRE(pages == full["events"]);
    }
    CHECK(service->trace(session, head)["events"].empty());
    CHECK(service->trace(session, head + 100)["cursor"] == head + 100);
}

TEST_CASE("read views")
{
    const auto service = make_service();
    const auto fleet = service->fleet();
    CHECK(fleet["engines"].size() == 20);
    CHECK(service->engine(8)["rul"] == 16);
    const auto config = service->config_document();
    CHECK(config["bands"] == json{{"stop_below", 25}, {"repair_below", 60}, {"monitor_soon_below", 80}});
}

TEST_CASE("HTTP interface")
{
    const auto service = make_service();
    const auto console = std::filesystem::temp_directory_path() / ("intentops_console_" + std::to_string(::getpid()));
    std::filesystem::create_directories(console);
    {
        std::ofstream(console / "index.html") << "<html>console</html>";
    }

    HttpServer server(*service, console);
    const int port = server.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    std::thread serving([&] { server.serve(); });
    while (!server.running())
        std::this_thread::sleep_for(std::chrono::milliseconds(5));

    httplib::Client client("127.0.0.1", port);
    const auto post = [&](const std::string& path, const json& body) {
        return client.Post(path, body.dump(), "application/json");
    };

    auto created = client.Post("/sessions");
    REQUIRE(created);
    CHECK(created->status == 201);
    CHECK(created->get_header_value("Access-Control-Allow-Origin") == "*");
    const auto session = json::parse(created->body)["session_id"].get<std::string>();
    CHECK(json::parse(client.Get("/sessions")->body)["sessions"] == json::array({session}));

    const auto base = "/sessions/" + session;
    CHECK(client.Get("/plans/latest")->status == 404);

    auto reply = post(base + "/messages", {{"text", test::kUseCasePrompt}});
    REQUIRE(reply);
    CHECK(reply->status == 200);
    const auto body = json::parse(reply->body);
    CHECK(test::compare_with_golden(maintenance::decode_plan(body["plan"])).empty());
    const auto token = body["pending_confirmation"].get<std::string>();

    CHECK(post(base + "/confirm", {{"token", "nope"}})->status == 409);
    auto confirmed = post(base + "/confirm", {{"token", token}});
    CHECK(confirmed->status == 200);
    CHECK(json::parse(client.Get("/fleet/8")->body)["status"] == "stopped");
    CHECK(post(base + "/confirm", {{"token", token}})->status == 409);

    CHECK(client.Post(base + "/messages", "not json", "application/json")->status == 400);
    CHECK(post(base + "/messages", {{"text", 5}})->status == 400);
    CHECK(post(base + "/messages", {{"text", ""}})->status == 422);
    CHECK(post("/sessions/ghost/messages", {{"text", "hi"}})->status == 404);

    const auto trace = json::parse(client.Get(base + "/trace?since=0")->body);
    const auto cursor = trace["cursor"].get<runtime::EventId>();
    CHECK(trace["events"].size() == cursor);
    const auto tail = json::parse(client.Get(base + "/trace?since=" + std::to_string(cursor))->body);
    CHECK(tail["events"].empty());
    CHECK(tail["cursor"] == cursor);
    CHECK(client.Get(base + "/trace?since=x")->status == 400);

    CHECK(json::parse(client.Get("/fleet")->body)["engines"].size() == 20);
    CHECK(client.Get("/fleet/99")->status == 404);
    CHECK(client.Get("/fleet/eight")->status == 400);
    CHECK(json::parse(client.Get("/plans/latest")->body)["session_id"] == session);
    CHECK(json::parse(client.Get("/config")->body)["bands"]["repair_below"] == 60);

    auto preflight = client.Options("/sessions");
    CHECK(preflight->status == 204);
    CHECK(preflight->get_header_value("Access-Control-Allow-Methods") == "GET, POST, OPTIONS");

    auto page = client.Get("/index.html");
    CHECK(page->status == 200);
    CHECK(page->body == "<html>console</html>");

    server.stop();
    serving.join();
    std::filesystem::remove_all(console);
    CHECK_THROWS_AS(HttpServer(*service, console), std::runtime_error);
}
