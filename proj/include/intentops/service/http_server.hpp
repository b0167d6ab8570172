// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "intentops/service/orchestrator.hpp"

#include <filesystem>
#include <memory>
#include <string>

namespace intentops::service {

/// HTTP/1.1 front end over an Orchestrator. Bodies are JSON.
///
///   POST /sessions                       -> 201 {session_id}
///   GET  /sessions                       -> {sessions}
///   POST /sessions/{id}/messages {text}  -> turn result
///   POST /sessions/{id}/confirm {token}  -> resumed turn result
///   GET  /sessions/{id}/trace?since=N    -> {events, cursor}
///   GET  /fleet, /fleet/{engine_id}, /plans/latest, /config
class HttpServer
{
public:
    /// `console_dir`, when non-empty, is served as static files under /.
    explicit HttpServer(Orchestrator& orchestrator, const std::filesystem::path& console_dir = {});
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds without serving yet. Port 0 picks a free port; returns the
    /// bound port. Throws std::runtime_error when binding fails.
    int bind(const std::string& host, int port);
    /// Serves until stop(). Requires bind().
    void serve();
    void stop();
    bool running() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace intentops::service
