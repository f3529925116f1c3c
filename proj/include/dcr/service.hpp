#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dcr/graph.hpp"
#include "dcr/semantics.hpp"

namespace httplib {
class Server;
}

namespace dcr::service {

using clock = std::chrono::steady_clock;

struct response {
    int status = 200;
    nlohmann::json body;
};

struct store_options {
    /// When set, every session is mirrored to <dir>/<id>.log: the graph
    /// document on the first line, then one line per execute or undo.
    std::optional<std::filesystem::path> persist_dir;
    std::chrono::seconds ttl{std::chrono::hours(24)};
    std::function<clock::time_point()> now = [] { return clock::now(); };
};

/// In-memory simulation sessions over distributed graphs. Calls on the same
/// session are serialized; distinct sessions proceed independently.
class session_store {
public:
    explicit session_store(store_options options = {});
    ~session_store();

    session_store(const session_store&) = delete;
    session_store& operator=(const session_store&) = delete;

    response create(std::string_view body);
    response create(const graph_document& doc);
    response get(const std::string& id);
    response execute(const std::string& id, std::string_view body);
    response execute(const std::string& id, const std::string& principal, const std::string& event);
    response undo(const std::string& id);
    response lts(const std::string& id, std::size_t max_states);

    /// Drops sessions idle for longer than the TTL, with their logs.
    std::size_t evict_idle();
    /// Rebuilds sessions from the persist directory by replay.
    std::size_t restore();
    [[nodiscard]] std::size_t size() const;

private:
    struct session;

    std::shared_ptr<session> find(const std::string& id);
    std::string fresh_id();
    void append_log(const session& s, const nlohmann::json& line) const;
    nlohmann::json view(const session& s) const;

    store_options options_;
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<session>> sessions_;
    std::mt19937_64 rng_;
};

/// Registers the HTTP routes on the server:
///   POST /sessions, GET /sessions/{id}, POST /sessions/{id}/events,
///   POST /sessions/{id}/undo, GET /sessions/{id}/lts, GET /healthz
void install_routes(httplib::Server& server, session_store& store);

/// Blocks serving on host:port until the server is stopped.
bool serve(session_store& store, const std::string& host, int port);

}  // namespace dcr::service
