#include "dcr/graph.hpp"

#include <algorithm>

namespace dcr {

namespace {

void add(validation_report& r, severity level, std::string code, std::string message, std::string element) {
    r.findings.push_back({level, std::move(code), std::move(message), std::move(element)});
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

std::string action_of(const graph_document& doc, const std::string& event) {
    auto it = doc.labels.find(event);
    return it == doc.labels.end() ? event : it->second;
}

}  // namespace

std::size_t validation_report::errors() const {
    return static_cast<std::size_t>(
        std::count_if(findings.begin(), findings.end(), [](const finding& f) { return f.level == severity::error; }));
}

std::size_t validation_report::warnings() const { return findings.size() - errors(); }

std::size_t validation_report::count(std::string_view code) const {
    return static_cast<std::size_t>(
        std::count_if(findings.begin(), findings.end(), [&](const finding& f) { return f.code == code; }));
}

bool is_identifier(std::string_view token) {
    if (token.empty()) return false;
    return std::all_of(token.begin(), token.end(), [](char c) {
        return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
    });
}

validation_report validate_graph(const graph_document& doc) {
    validation_report r;
    std::set<std::string> declared;
    for (const auto& e : doc.events) {
        if (!is_identifier(e)) add(r, severity::error, "invalid-identifier", "event id " + quote(e) + " is not a valid identifier", e);
        if (!declared.insert(e).second) add(r, severity::error, "duplicate-event", "event " + quote(e) + " declared more than once", e);
    }

    auto check_known = [&](const std::string& e, const std::string& where) {
        if (!declared.count(e)) add(r, severity::error, "unknown-event", "undeclared event " + quote(e) + " in " + where, e);
    };

    for (const auto& [e, label] : doc.labels) check_known(e, "labels");

    std::set<std::string> related;
    const std::pair<const char*, const relation_pairs*> relations[] = {
        {"conditions", &doc.conditions},
        {"responses", &doc.responses},
        {"includes", &doc.includes},
        {"excludes", &doc.excludes},
    };
    for (const auto& [where, pairs] : relations) {
        for (const auto& [a, b] : *pairs) {
            check_known(a, where);
            check_known(b, where);
            related.insert(a);
            related.insert(b);
        }
    }

    const std::set<std::pair<std::string, std::string>> excluded(doc.excludes.begin(), doc.excludes.end());
    std::set<std::pair<std::string, std::string>> reported;
    for (const auto& p : doc.includes) {
        if (excluded.count(p) && reported.insert(p).second)
            add(r, severity::error, "±-conflict",
                "event " + quote(p.first) + " both includes and excludes " + quote(p.second), p.first + "," + p.second);
    }

    if (doc.marking) {
        for (const auto& e : doc.marking->executed) check_known(e, "marking.executed");
        for (const auto& e : doc.marking->pending) check_known(e, "marking.pending");
        for (const auto& e : doc.marking->included) check_known(e, "marking.included");
    }

    std::set<std::string> seen;
    for (const auto& e : doc.events) {
        if (!seen.insert(e).second) continue;
        if (!related.count(e)) add(r, severity::warning, "isolated-event", "event " + quote(e) + " takes part in no relation", e);
    }

    if (doc.is_distributed()) {
        std::set<std::string> actions;
        for (const auto& e : doc.events) actions.insert(action_of(doc, e));
        for (const auto& a : actions) {
            bool assigned = false;
            if (doc.assignments) {
                auto it = doc.assignments->actions.find(a);
                assigned = it != doc.assignments->actions.end() && !it->second.empty();
            }
            if (!assigned) add(r, severity::warning, "unassigned-action", "no role may perform action " + quote(a), a);
        }
    }
    return r;
}

validation_report validate_distributed(const graph_document& doc) {
    validation_report r;
    std::set<std::string> roles;
    std::set<std::string> principals;
    if (doc.roles) {
        for (const auto& role : *doc.roles) {
            if (!is_identifier(role)) add(r, severity::error, "invalid-identifier", "role " + quote(role) + " is not a valid identifier", role);
            if (!roles.insert(role).second) add(r, severity::error, "duplicate-role", "role " + quote(role) + " declared more than once", role);
        }
    }
    if (doc.principals) {
        for (const auto& p : *doc.principals) {
            if (!is_identifier(p)) add(r, severity::error, "invalid-identifier", "principal " + quote(p) + " is not a valid identifier", p);
            if (!principals.insert(p).second) add(r, severity::error, "duplicate-principal", "principal " + quote(p) + " declared more than once", p);
        }
    }
    if (!doc.assignments) return r;

    std::set<std::string> actions;
    for (const auto& e : doc.events) actions.insert(action_of(doc, e));

    for (const auto& [p, assigned] : doc.assignments->principals) {
        if (!principals.count(p)) add(r, severity::error, "unknown-principal", "assignment names undeclared principal " + quote(p), p);
        for (const auto& role : assigned)
            if (!roles.count(role)) add(r, severity::error, "unknown-role", "principal " + quote(p) + " assigned undeclared role " + quote(role), role);
    }
    bool any_action_assignment = false;
    for (const auto& [a, assigned] : doc.assignments->actions) {
        if (!actions.count(a)) add(r, severity::warning, "unknown-action", "assignment names action " + quote(a) + " that labels no event", a);
        for (const auto& role : assigned) {
            any_action_assignment = true;
            if (!roles.count(role)) add(r, severity::error, "unknown-role", "action " + quote(a) + " assigned undeclared role " + quote(role), role);
        }
    }
    if (principals.empty() && any_action_assignment)
        add(r, severity::warning, "no-executors", "actions are assigned roles but no principal is declared", "");
    return r;
}

validation_report validate_document(const graph_document& doc) {
    auto r = validate_graph(doc);
    if (doc.is_distributed()) {
        auto d = validate_distributed(doc);
        r.findings.insert(r.findings.end(), d.findings.begin(), d.findings.end());
    }
    return r;
}

invalid_graph::invalid_graph(validation_report report)
    : error(errc::invalid_graph, [&] {
          for (const auto& f : report.findings)
              if (f.level == severity::error) return "invalid graph: " + f.message;
          return std::string("invalid graph");
      }()),
      report_{std::move(report)} {}

// ---------------------------------------------------------------------------

graph graph::from_document(const graph_document& doc) {
    auto report = validate_graph(doc);
    if (!report.ok()) throw invalid_graph(std::move(report));

    graph g;
    const auto n = doc.events.size();
    g.names_ = doc.events;
    for (event_index e = 0; e < n; ++e) {
        g.index_.emplace(doc.events[e], e);
        g.actions_.push_back(action_of(doc, doc.events[e]));
    }
    g.conditions_to_.assign(n, event_set(n));
    g.responses_from_.assign(n, event_set(n));
    g.includes_from_.assign(n, event_set(n));
    g.excludes_from_.assign(n, event_set(n));
    for (const auto& [c, t] : doc.conditions) g.conditions_to_[g.index_.at(t)].insert(g.index_.at(c));
    for (const auto& [a, b] : doc.responses) g.responses_from_[g.index_.at(a)].insert(g.index_.at(b));
    for (const auto& [a, b] : doc.includes) g.includes_from_[g.index_.at(a)].insert(g.index_.at(b));
    for (const auto& [a, b] : doc.excludes) g.excludes_from_[g.index_.at(a)].insert(g.index_.at(b));

    if (doc.marking) {
        g.initial_ = {g.make_set(doc.marking->executed), g.make_set(doc.marking->pending), g.make_set(doc.marking->included)};
    } else {
        g.initial_ = {g.empty_set(), g.empty_set(), g.all_events()};
    }
    return g;
}

std::optional<event_index> graph::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

event_index graph::index_of(std::string_view name) const {
    if (auto e = find(name)) return *e;
    throw execution_error(errc::unknown_event, "unknown event '" + std::string(name) + "'");
}

event_set graph::make_set(std::span<const std::string> names) const {
    event_set s(size());
    for (const auto& n : names) s.insert(index_of(n));
    return s;
}

event_set graph::make_set(std::initializer_list<std::string_view> names) const {
    event_set s(size());
    for (auto n : names) s.insert(index_of(n));
    return s;
}

marking graph::make_marking(std::initializer_list<std::string_view> executed,
                            std::initializer_list<std::string_view> pending,
                            std::initializer_list<std::string_view> included) const {
    return {make_set(executed), make_set(pending), make_set(included)};
}

std::vector<std::string> graph::names_of(const event_set& s) const {
    std::vector<std::string> out;
    s.for_each([&](event_index e) { out.push_back(names_[e]); });
    std::sort(out.begin(), out.end());
    return out;
}

std::string graph::format(const event_set& s) const {
    std::string out;
    for (const auto& n : names_of(s)) {
        if (!out.empty()) out += ',';
        out += n;
    }
    return out;
}

std::string graph::format(const marking& m) const {
    return "Ex={" + format(m.executed) + "} Re={" + format(m.pending) + "} In={" + format(m.included) + "}";
}

graph_document graph::to_document() const {
    graph_document doc;
    doc.events = names_;
    for (event_index e = 0; e < size(); ++e) {
        if (actions_[e] != names_[e]) doc.labels[names_[e]] = actions_[e];
        conditions_to_[e].for_each([&](event_index c) { doc.conditions.emplace_back(names_[c], names_[e]); });
    }
    for (event_index e = 0; e < size(); ++e) {
        responses_from_[e].for_each([&](event_index b) { doc.responses.emplace_back(names_[e], names_[b]); });
        includes_from_[e].for_each([&](event_index b) { doc.includes.emplace_back(names_[e], names_[b]); });
        excludes_from_[e].for_each([&](event_index b) { doc.excludes.emplace_back(names_[e], names_[b]); });
    }
    auto listed = [&](const event_set& s) {
        std::vector<std::string> out;
        s.for_each([&](event_index e) { out.push_back(names_[e]); });
        return out;
    };
    doc.marking = marking_document{listed(initial_.executed), listed(initial_.pending), listed(initial_.included)};
    return doc;
}

// ---------------------------------------------------------------------------

distributed_graph distributed_graph::from_document(const graph_document& doc) {
    auto report = validate_document(doc);
    if (!report.ok()) throw invalid_graph(std::move(report));

    distributed_graph d;
    d.graph_ = graph::from_document(doc);
    if (doc.roles) d.roles_ = *doc.roles;
    if (doc.principals) d.principals_ = *doc.principals;
    if (doc.assignments) {
        for (const auto& [p, roles] : doc.assignments->principals) d.principal_roles_[p].insert(roles.begin(), roles.end());
        for (const auto& [a, roles] : doc.assignments->actions) d.action_roles_[a].insert(roles.begin(), roles.end());
    }
    return d;
}

distributed_graph distributed_graph::open(graph g) {
    distributed_graph d;
    const std::string role(implicit_role);
    const std::string principal(implicit_principal);
    d.roles_ = {role};
    d.principals_ = {principal};
    d.principal_roles_[principal].insert(role);
    for (event_index e = 0; e < g.size(); ++e) d.action_roles_[g.action(e)].insert(role);
    d.graph_ = std::move(g);
    return d;
}

bool distributed_graph::has_principal(std::string_view p) const {
    return std::find(principals_.begin(), principals_.end(), p) != principals_.end();
}

bool distributed_graph::principal_has(std::string_view principal, std::string_view role) const {
    auto it = principal_roles_.find(principal);
    return it != principal_roles_.end() && it->second.count(std::string(role)) > 0;
}

bool distributed_graph::action_has(std::string_view action, std::string_view role) const {
    auto it = action_roles_.find(action);
    return it != action_roles_.end() && it->second.count(std::string(role)) > 0;
}

std::vector<std::string> distributed_graph::witnesses(std::string_view principal, event_index e) const {
    std::vector<std::string> out;
    auto p = principal_roles_.find(principal);
    auto a = action_roles_.find(graph_.action(e));
    if (p == principal_roles_.end() || a == action_roles_.end()) return out;
    std::set_intersection(p->second.begin(), p->second.end(), a->second.begin(), a->second.end(), std::back_inserter(out));
    return out;
}

std::vector<std::string> distributed_graph::roles_for(event_index e) const {
    auto a = action_roles_.find(graph_.action(e));
    if (a == action_roles_.end()) return {};
    return {a->second.begin(), a->second.end()};
}

graph_document distributed_graph::to_document() const {
    auto doc = graph_.to_document();
    doc.roles = roles_;
    doc.principals = principals_;
    assignment_document as;
    for (const auto& [p, roles] : principal_roles_) as.principals[p] = {roles.begin(), roles.end()};
    for (const auto& [a, roles] : action_roles_) as.actions[a] = {roles.begin(), roles.end()};
    doc.assignments = std::move(as);
    return doc;
}

}  // namespace dcr
