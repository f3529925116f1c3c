#include "dcr/service.hpp"

#include <fstream>
#include <sstream>

#include <httplib.h>

#include "dcr/json_io.hpp"
#include "dcr/lts.hpp"

namespace dcr::service {

using nlohmann::json;

struct session_store::session {
    std::string id;
    json document;
    distributed_graph model;
    std::vector<transition_label> history;
    marking current;
    clock::time_point last_access;
    bool evicted = false;
    std::mutex mutex;
};

namespace {

response fail(int status, std::string code, std::string message, json extra = json::object()) {
    extra["error"] = std::move(code);
    extra["message"] = std::move(message);
    return {status, std::move(extra)};
}

distributed_graph compile(const graph_document& doc) {
    if (doc.is_distributed()) return distributed_graph::from_document(doc);
    return distributed_graph::open(graph::from_document(doc));
}

json names(const graph& g, const event_set& s) { return g.names_of(s); }

}  // namespace

session_store::session_store(store_options options) : options_{std::move(options)}, rng_{std::random_device{}()} {
    if (options_.persist_dir) std::filesystem::create_directories(*options_.persist_dir);
}

session_store::~session_store() = default;

std::size_t session_store::size() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

std::string session_store::fresh_id() {
    static constexpr char hex[] = "0123456789abcdef";
    for (;;) {
        std::string id;
        auto bits = rng_();
        for (int i = 0; i < 16; ++i, bits >>= 4) id += hex[bits & 0xf];
        if (!sessions_.count(id)) return id;
    }
}

void session_store::append_log(const session& s, const json& line) const {
    if (!options_.persist_dir) return;
    std::ofstream out(*options_.persist_dir / (s.id + ".log"), std::ios::app);
    out << line.dump() << '\n';
}

std::shared_ptr<session_store::session> session_store::find(const std::string& id) {
    evict_idle();
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

std::size_t session_store::evict_idle() {
    std::lock_guard lock(mutex_);
    const auto now = options_.now();
    std::size_t evicted = 0;
    for (auto it = sessions_.begin(); it != sessions_.end();) {
        auto& s = *it->second;
        std::unique_lock session_lock(s.mutex, std::try_to_lock);
        if (session_lock.owns_lock() && now - s.last_access > options_.ttl) {
            s.evicted = true;
            if (options_.persist_dir) std::filesystem::remove(*options_.persist_dir / (s.id + ".log"));
            it = sessions_.erase(it);
            ++evicted;
        } else {
            ++it;
        }
    }
    return evicted;
}

response session_store::create(std::string_view body) {
    graph_document doc;
    try {
        doc = parse_document(body);
    } catch (const parse_error& e) {
        return fail(400, "parse-error", e.what());
    }
    return create(doc);
}

response session_store::create(const graph_document& doc) {
    auto report = validate_document(doc);
    if (!report.ok()) return fail(400, "invalid-graph", "graph document has errors", {{"report", to_json(report)}});

    auto s = std::make_shared<session>();
    s->document = to_json(doc);
    s->model = compile(doc);
    s->current = s->model.base().initial_marking();
    s->last_access = options_.now();

    evict_idle();
    {
        std::lock_guard lock(mutex_);
        s->id = fresh_id();
        sessions_.emplace(s->id, s);
    }
    append_log(*s, {{"graph", s->document}});
    std::lock_guard session_lock(s->mutex);
    return {201, view(*s)};
}

response session_store::get(const std::string& id) {
    auto s = find(id);
    if (!s) return fail(404, "unknown-session", "no session '" + id + "'");
    std::lock_guard lock(s->mutex);
    if (s->evicted) return fail(404, "unknown-session", "no session '" + id + "'");
    s->last_access = options_.now();
    return {200, view(*s)};
}

response session_store::execute(const std::string& id, std::string_view body) {
    json j;
    try {
        j = parse_json(body);
    } catch (const parse_error& e) {
        return fail(400, "parse-error", e.what());
    }
    if (!j.is_object() || !j.contains("principal") || !j.contains("event") || !j["principal"].is_string() ||
        !j["event"].is_string())
        return fail(400, "bad-request", "body must be {\"principal\": string, \"event\": string}");
    return execute(id, j["principal"].get<std::string>(), j["event"].get<std::string>());
}

response session_store::execute(const std::string& id, const std::string& principal, const std::string& event) {
    auto s = find(id);
    if (!s) return fail(404, "unknown-session", "no session '" + id + "'");
    std::lock_guard lock(s->mutex);
    if (s->evicted) return fail(404, "unknown-session", "no session '" + id + "'");
    s->last_access = options_.now();

    const auto& g = s->model.base();
    const auto e = g.find(event);
    if (!e) return fail(404, "unknown-event", "no event '" + event + "'");
    if (!s->model.has_principal(principal)) return fail(404, "unknown-principal", "no principal '" + principal + "'");

    try {
        auto step = execute_as(s->model, s->current, principal, *e);
        s->history.push_back(std::move(step.label));
        s->current = std::move(step.target);
    } catch (const execution_error& err) {
        switch (err.code()) {
            case errc::unauthorized:
                return fail(403, "unauthorized", err.what(), {{"rolesForAction", s->model.roles_for(*e)}});
            case errc::not_included:
            case errc::conditions_unmet:
                return fail(409, "not-enabled", err.what(), {{"reason", to_string(err.code())}, {"blocking", err.blocking()}});
            default:
                return fail(400, to_string(err.code()), err.what());
        }
    }
    append_log(*s, {{"op", "exec"}, {"principal", principal}, {"event", event}});
    return {200, view(*s)};
}

response session_store::undo(const std::string& id) {
    auto s = find(id);
    if (!s) return fail(404, "unknown-session", "no session '" + id + "'");
    std::lock_guard lock(s->mutex);
    if (s->evicted) return fail(404, "unknown-session", "no session '" + id + "'");
    s->last_access = options_.now();
    if (s->history.empty()) return fail(409, "empty-history", "nothing to undo");

    // Exclusion forgets information, so the previous marking is recovered by
    // replaying the shortened history.
    s->history.pop_back();
    s->current = replay(s->model, s->history).markings.back();
    append_log(*s, {{"op", "undo"}});
    return {200, view(*s)};
}

response session_store::lts(const std::string& id, std::size_t max_states) {
    auto s = find(id);
    if (!s) return fail(404, "unknown-session", "no session '" + id + "'");
    std::lock_guard lock(s->mutex);
    if (s->evicted) return fail(404, "unknown-session", "no session '" + id + "'");
    s->last_access = options_.now();
    if (max_states == 0) return fail(400, "bad-request", "maxStates must be at least 1");

    const auto& g = s->model.base();
    const auto system = explore_lts(g, s->current, max_states);
    json states = json::array();
    for (std::size_t i = 0; i < system.states.size(); ++i) {
        const auto& m = system.states[i];
        states.push_back({{"id", i},
                          {"executed", names(g, m.executed)},
                          {"pending", names(g, m.pending)},
                          {"included", names(g, m.included)},
                          {"accepting", static_cast<bool>(system.accepting[i])}});
    }
    json transitions = json::array();
    for (const auto& t : system.transitions)
        transitions.push_back(
            {{"source", t.source}, {"event", g.name(t.event)}, {"action", g.action(t.event)}, {"target", t.target}});
    return {200, {{"states", states}, {"transitions", transitions}, {"truncated", system.truncated}}};
}

json session_store::view(const session& s) const {
    const auto& d = s.model;
    const auto& g = d.base();
    const auto& m = s.current;
    const auto enabled = enabled_events(g, m);

    json events = json::array();
    for (event_index e = 0; e < g.size(); ++e) {
        events.push_back({{"id", g.name(e)},
                          {"action", g.action(e)},
                          {"executed", m.executed.contains(e)},
                          {"pending", m.pending.contains(e)},
                          {"included", m.included.contains(e)},
                          {"enabled", enabled.contains(e)},
                          {"blockingConditions", names(g, blocking_conditions(g, m, e))},
                          {"rolesForAction", d.roles_for(e)}});
    }
    json enabled_for_principal = json::object();
    for (const auto& p : d.principals()) {
        json triples = json::array();
        for (const auto& t : enabled_for(d, m, p))
            triples.push_back({{"event", g.name(t.event)}, {"action", t.action}, {"role", t.role}});
        enabled_for_principal[p] = std::move(triples);
    }
    json history = json::array();
    for (const auto& l : s.history) {
        json entry = {{"event", g.name(l.event)}, {"action", l.action}};
        if (l.as) {
            entry["principal"] = l.as->principal;
            entry["role"] = l.as->role;
        }
        history.push_back(std::move(entry));
    }
    return {{"sessionId", s.id},
            {"accepting", is_accepting_marking(m)},
            {"marking", {{"executed", names(g, m.executed)}, {"pending", names(g, m.pending)}, {"included", names(g, m.included)}}},
            {"events", events},
            {"enabledFor", enabled_for_principal},
            {"principals", d.principals()},
            {"roles", d.roles()},
            {"history", history},
            {"graph", s.document}};
}

std::size_t session_store::restore() {
    if (!options_.persist_dir) return 0;
    std::size_t restored = 0;
    for (const auto& entry : std::filesystem::directory_iterator(*options_.persist_dir)) {
        if (entry.path().extension() != ".log") continue;
        try {
            std::ifstream in(entry.path());
            std::string line;
            if (!std::getline(in, line)) continue;
            auto header = parse_json(line);
            auto doc = document_from_json(header.at("graph"));

            auto s = std::make_shared<session>();
            s->id = entry.path().stem().string();
            s->document = to_json(doc);
            s->model = compile(doc);
            std::vector<marking> trail{s->model.base().initial_marking()};
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                auto op = parse_json(line);
                if (op.at("op") == "exec") {
                    const auto e = s->model.base().index_of(op.at("event").get<std::string>());
                    auto step = execute_as(s->model, trail.back(), op.at("principal").get<std::string>(), e);
                    s->history.push_back(std::move(step.label));
                    trail.push_back(std::move(step.target));
                } else if (op.at("op") == "undo" && !s->history.empty()) {
                    s->history.pop_back();
                    trail.pop_back();
                }
            }
            s->current = trail.back();
            s->last_access = options_.now();
            std::lock_guard lock(mutex_);
            sessions_[s->id] = s;
            ++restored;
        } catch (const std::exception&) {
            // A log that no longer replays is left on disk untouched.
        }
    }
    return restored;
}

// ---------------------------------------------------------------------------

namespace {

void reply(httplib::Response& res, const response& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
}

}  // namespace

void install_routes(httplib::Server& server, session_store& store) {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Content-Type"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(R"({"status":"ok"})", "application/json");
    });
    server.Post("/sessions", [&](const httplib::Request& req, httplib::Response& res) { reply(res, store.create(req.body)); });
    server.Get(R"(/sessions/([0-9a-zA-Z_-]+))", [&](const httplib::Request& req, httplib::Response& res) {
        reply(res, store.get(req.matches[1]));
    });
    server.Post(R"(/sessions/([0-9a-zA-Z_-]+)/events)", [&](const httplib::Request& req, httplib::Response& res) {
        reply(res, store.execute(req.matches[1], req.body));
    });
    server.Post(R"(/sessions/([0-9a-zA-Z_-]+)/undo)", [&](const httplib::Request& req, httplib::Response& res) {
        reply(res, store.undo(req.matches[1]));
    });
    server.Get(R"(/sessions/([0-9a-zA-Z_-]+)/lts)", [&](const httplib::Request& req, httplib::Response& res) {
        std::size_t max_states = 200;
        if (req.has_param("maxStates")) {
            try {
                max_states = std::stoul(req.get_param_value("maxStates"));
            } catch (const std::exception&) {
                reply(res, {400, {{"error", "bad-request"}, {"message", "maxStates must be a positive integer"}}});
                return;
            }
        }
        reply(res, store.lts(req.matches[1], max_states));
    });
}

bool serve(session_store& store, const std::string& host, int port) {
    httplib::Server server;
    install_routes(server, store);
    return server.listen(host, port);
}

}  // namespace dcr::service
