// SPDX-License-Identifier: Apache-2.0
#include "intentops/service/http_server.hpp"

#include <httplib.h>

#include <charconv>
#include <stdexcept>

namespace intentops::service {

using nlohmann::json;

namespace {

void send(httplib::Response& res, int status, const json& body)
{
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

json parse_body(const httplib::Request& req)
{
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object())
        throw ServiceError(400, "bad_request", "body must be a JSON object");
    return body;
}

std::string string_field(const json& body, const char* key)
{
    const auto it = body.find(key);
    if (it == body.end() || !it->is_string())
        throw ServiceError(400, "bad_request", std::string("'") + key + "' must be a string");
    return it->get<std::string>();
}

template <typename T>
T number_param(const std::string& text, const char* what)
{
    T value{};
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size())
        throw ServiceError(400, "bad_request", std::string(what) + " must be an integer");
    return value;
}

// Maps ServiceError and anything unexpected onto the response.
template <typename Handler>
httplib::Server::Handler guarded(Handler handler)
{
    return [handler](const httplib::Request& req, httplib::Response& res) {
        try {
            handler(req, res);
        } catch (const ServiceError& error) {
            send(res, error.status(), error.body());
        } catch (const std::exception& error) {
            send(res, 500, {{"error", "internal"}, {"message", error.what()}});
        }
    };
}

} // namespace

struct HttpServer::Impl
{
    Orchestrator& orchestrator;
    httplib::Server server;
    bool bound = false;

    explicit Impl(Orchestrator& o) : orchestrator(o) {}
};

HttpServer::HttpServer(Orchestrator& orchestrator, const std::filesystem::path& console_dir)
    : impl_(std::make_unique<Impl>(orchestrator))
{
    auto& svr = impl_->server;
    auto& app = impl_->orchestrator;

    // The console may be hosted elsewhere during development.
    svr.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                             {"Access-Control-Allow-Headers", "Content-Type"},
                             {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    svr.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    svr.Post("/sessions", guarded([&app](const httplib::Request&, httplib::Response& res) {
                 send(res, 201, {{"session_id", app.create_session()}});
             }));
    svr.Get("/sessions", guarded([&app](const httplib::Request&, httplib::Response& res) {
                send(res, 200, {{"sessions", app.session_ids()}});
            }));
    svr.Post(R"(/sessions/([^/]+)/messages)", guarded([&app](const httplib::Request& req, httplib::Response& res) {
                 const auto body = parse_body(req);
                 send(res, 200, app.post_message(req.matches[1], string_field(body, "text")));
             }));
    svr.Post(R"(/sessions/([^/]+)/confirm)", guarded([&app](const httplib::Request& req, httplib::Response& res) {
                 const auto body = parse_body(req);
                 send(res, 200, app.confirm(req.matches[1], string_field(body, "token")));
             }));
    svr.Get(R"(/sessions/([^/]+)/trace)", guarded([&app](const httplib::Request& req, httplib::Response& res) {
                runtime::EventId since = 0;
                if (req.has_param("since"))
                    since = number_param<runtime::EventId>(req.get_param_value("since"), "since");
                send(res, 200, app.trace(req.matches[1], since));
            }));
    svr.Get("/fleet", guarded([&app](const httplib::Request&, httplib::Response& res) { send(res, 200, app.fleet()); }));
    svr.Get(R"(/fleet/([^/]+))", guarded([&app](const httplib::Request& req, httplib::Response& res) {
                send(res, 200, app.engine(number_param<int>(req.matches[1], "engine_id")));
            }));
    svr.Get("/plans/latest", guarded([&app](const httplib::Request&, httplib::Response& res) {
                send(res, 200, app.latest_plan());
            }));
    svr.Get("/config", guarded([&app](const httplib::Request&, httplib::Response& res) {
                send(res, 200, app.config_document());
            }));

    if (!console_dir.empty() && !svr.set_mount_point("/", console_dir.string()))
        throw std::runtime_error("console directory not found: " + console_dir.string());
}

HttpServer::~HttpServer()
{
    stop();
}

int HttpServer::bind(const std::string& host, int port)
{
    auto& svr = impl_->server;
    int bound = port;
    if (port == 0)
        bound = svr.bind_to_any_port(host);
    else if (!svr.bind_to_port(host, port))
        bound = -1;
    if (bound < 0)
        throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    impl_->bound = true;
    return bound;
}

void HttpServer::serve()
{
    if (!impl_->bound)
        throw std::logic_error("serve() before bind()");
    impl_->server.listen_after_bind();
}

void HttpServer::stop()
{
    if (impl_)
        impl_->server.stop();
}

bool HttpServer::running() const
{
    return impl_->server.is_running();
}

} // namespace intentops::service
