#include "dcr/event_structures.hpp"

#include <set>

#include "dcr/json_io.hpp"

namespace dcr {

using nlohmann::json;

namespace {

std::vector<std::string> strings(const json& j, const char* field) {
    std::vector<std::string> out;
    if (!j.contains(field)) return out;
    const auto& arr = j.at(field);
    if (!arr.is_array()) throw parse_error(std::string("field '") + field + "' must be an array of strings", 0, 0);
    for (const auto& v : arr) {
        if (!v.is_string()) throw parse_error(std::string("field '") + field + "' must be an array of strings", 0, 0);
        out.push_back(v.get<std::string>());
    }
    return out;
}

relation_pairs pairs(const json& j, const char* field) {
    relation_pairs out;
    if (!j.contains(field)) return out;
    const auto& arr = j.at(field);
    if (!arr.is_array()) throw parse_error(std::string("field '") + field + "' must be an array of pairs", 0, 0);
    for (const auto& p : arr) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
            throw parse_error(std::string("field '") + field + "' must contain [\"a\",\"b\"] pairs", 0, 0);
        out.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
    }
    return out;
}

void add(validation_report& r, severity level, std::string code, std::string message, std::string element) {
    r.findings.push_back({level, std::move(code), std::move(message), std::move(element)});
}

// Shared front half of both validators: declarations and referential
// integrity. Returns the index map.
std::unordered_map<std::string, event_index> check_declarations(const structure_document& doc, validation_report& r,
                                                                 bool with_responses) {
    std::unordered_map<std::string, event_index> index;
    for (const auto& e : doc.events) {
        if (!is_identifier(e)) add(r, severity::error, "invalid-identifier", "event id '" + e + "' is not a valid identifier", e);
        if (!index.emplace(e, index.size()).second)
            add(r, severity::error, "duplicate-event", "event '" + e + "' declared more than once", e);
    }
    auto known = [&](const std::string& e, const char* where) {
        if (!index.count(e)) add(r, severity::error, "unknown-event", "undeclared event '" + e + "' in " + where, e);
    };
    for (const auto& [e, l] : doc.labels) known(e, "labels");
    for (const auto& [a, b] : doc.causality) known(a, "causality"), known(b, "causality");
    for (const auto& [a, b] : doc.conflict) known(a, "conflict"), known(b, "conflict");
    if (with_responses) {
        for (const auto& [a, b] : doc.responses) known(a, "responses"), known(b, "responses");
        for (const auto& e : doc.initial_responses) known(e, "initialResponses");
    }
    return index;
}

// Strict transitive closure of the causality generators; reflexive pairs are
// implicit and dropped.
std::vector<event_set> close_causality(const structure_document& doc,
                                       const std::unordered_map<std::string, event_index>& index) {
    const auto n = index.size();
    std::vector<event_set> causes(n, event_set(n));
    for (const auto& [a, b] : doc.causality)
        if (a != b) causes[index.at(b)].insert(index.at(a));
    for (bool changed = true; changed;) {
        changed = false;
        for (event_index e = 0; e < n; ++e) {
            auto closed = causes[e];
            causes[e].for_each([&](event_index c) { closed |= causes[c]; });
            if (closed != causes[e]) {
                causes[e] = std::move(closed);
                changed = true;
            }
        }
    }
    return causes;
}

bool declarations_ok(const validation_report& r) { return r.ok(); }

void check_order_and_conflict(const structure_document& doc, const std::unordered_map<std::string, event_index>& index,
                              const std::vector<event_set>& causes, validation_report& r) {
    const auto n = index.size();
    std::vector<std::string> names(n);
    for (const auto& [name, e] : index) names[e] = name;

    for (event_index e = 0; e < n; ++e)
        if (causes[e].contains(e))
            add(r, severity::error, "causality-cycle", "causality is not antisymmetric: '" + names[e] + "' precedes itself", names[e]);

    std::vector<event_set> conflicts(n, event_set(n));
    for (const auto& [a, b] : doc.conflict) {
        if (a == b) {
            add(r, severity::error, "conflict-irreflexive", "event '" + a + "' is in conflict with itself", a);
            continue;
        }
        conflicts[index.at(a)].insert(index.at(b));
        conflicts[index.at(b)].insert(index.at(a));
    }

    // e # e' <= e''  implies  e # e''
    for (event_index e = 0; e < n; ++e) {
        for (event_index later = 0; later < n; ++later) {
            if (later == e || conflicts[e].contains(later)) continue;
            const auto inherited = conflicts[e] & causes[later];
            if (!inherited.empty())
                add(r, severity::error, "conflict-heredity",
                    "'" + names[e] + "' conflicts with a cause of '" + names[later] + "' but not with '" + names[later] + "'",
                    names[e] + "," + names[later]);
        }
    }
}

}  // namespace

structure_document structure_from_json(const json& j) {
    if (!j.is_object()) throw parse_error("event structure document must be a JSON object", 0, 0);
    if (!j.contains("events")) throw parse_error("missing required field 'events'", 0, 0);
    structure_document doc;
    doc.events = strings(j, "events");
    if (j.contains("labels")) {
        if (!j.at("labels").is_object()) throw parse_error("field 'labels' must be an object of strings", 0, 0);
        for (const auto& [k, v] : j.at("labels").items()) {
            if (!v.is_string()) throw parse_error("field 'labels' must be an object of strings", 0, 0);
            doc.labels[k] = v.get<std::string>();
        }
    }
    doc.causality = pairs(j, "causality");
    doc.conflict = pairs(j, "conflict");
    doc.responses = pairs(j, "responses");
    doc.initial_responses = strings(j, "initialResponses");
    return doc;
}

json to_json(const structure_document& doc) {
    auto list = [](const relation_pairs& ps) {
        json out = json::array();
        for (const auto& [a, b] : ps) out.push_back({a, b});
        return out;
    };
    return {{"events", doc.events},       {"labels", doc.labels},       {"causality", list(doc.causality)},
            {"conflict", list(doc.conflict)}, {"responses", list(doc.responses)}, {"initialResponses", doc.initial_responses}};
}

validation_report validate_pes(const structure_document& doc) {
    validation_report r;
    const auto index = check_declarations(doc, r, false);
    if (!declarations_ok(r)) return r;
    check_order_and_conflict(doc, index, close_causality(doc, index), r);
    return r;
}

validation_report validate_cres(const structure_document& doc) {
    validation_report r;
    const auto index = check_declarations(doc, r, true);
    if (!declarations_ok(r)) return r;
    const auto causes = close_causality(doc, index);
    check_order_and_conflict(doc, index, causes, r);

    // Kahn's algorithm over strict causality plus responses.
    const auto n = index.size();
    std::vector<std::set<event_index>> succ(n);
    for (event_index t = 0; t < n; ++t) causes[t].for_each([&](event_index c) { if (c != t) succ[c].insert(t); });
    for (const auto& [a, b] : doc.responses) succ[index.at(a)].insert(index.at(b));
    std::vector<std::size_t> indegree(n, 0);
    for (const auto& out : succ)
        for (auto t : out) ++indegree[t];
    std::vector<event_index> ready;
    for (event_index e = 0; e < n; ++e)
        if (indegree[e] == 0) ready.push_back(e);
    std::size_t sorted = 0;
    while (!ready.empty()) {
        const auto e = ready.back();
        ready.pop_back();
        ++sorted;
        for (auto t : succ[e])
            if (--indegree[t] == 0) ready.push_back(t);
    }
    if (sorted != n)
        add(r, severity::error, "cycle", "conditions and responses together contain a cycle", "");
    return r;
}

// ---------------------------------------------------------------------------

prime_event_structure prime_event_structure::from_document(const structure_document& doc) {
    auto report = validate_pes(doc);
    if (!report.ok()) throw invalid_graph(std::move(report));

    prime_event_structure p;
    p.names_ = doc.events;
    for (event_index e = 0; e < doc.events.size(); ++e) {
        p.index_.emplace(doc.events[e], e);
        auto it = doc.labels.find(doc.events[e]);
        p.actions_.push_back(it == doc.labels.end() ? doc.events[e] : it->second);
    }
    p.causes_ = close_causality(doc, p.index_);
    p.conflicts_.assign(p.size(), event_set(p.size()));
    for (const auto& [a, b] : doc.conflict) {
        p.conflicts_[p.index_.at(a)].insert(p.index_.at(b));
        p.conflicts_[p.index_.at(b)].insert(p.index_.at(a));
    }
    return p;
}

event_index prime_event_structure::index_of(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) throw error(errc::unknown_event, "unknown event '" + std::string(name) + "'");
    return it->second;
}

event_set prime_event_structure::make_set(std::initializer_list<std::string_view> names) const {
    event_set s(size());
    for (auto n : names) s.insert(index_of(n));
    return s;
}

structure_document prime_event_structure::to_document() const {
    structure_document doc;
    doc.events = names_;
    for (event_index e = 0; e < size(); ++e) {
        if (actions_[e] != names_[e]) doc.labels[names_[e]] = actions_[e];
        causes_[e].for_each([&](event_index c) { doc.causality.emplace_back(names_[c], names_[e]); });
        conflicts_[e].for_each([&](event_index o) {
            if (e < o) doc.conflict.emplace_back(names_[e], names_[o]);
        });
    }
    return doc;
}

condition_response_structure condition_response_structure::from_document(const structure_document& doc) {
    auto report = validate_cres(doc);
    if (!report.ok()) throw invalid_graph(std::move(report));
    structure_document plain = doc;
    plain.responses.clear();
    plain.initial_responses.clear();
    auto pes = prime_event_structure::from_document(plain);
    std::vector<event_set> responses(pes.size(), event_set(pes.size()));
    for (const auto& [a, b] : doc.responses) responses[pes.index_of(a)].insert(pes.index_of(b));
    event_set initial(pes.size());
    for (const auto& e : doc.initial_responses) initial.insert(pes.index_of(e));
    return from_parts(std::move(pes), std::move(responses), std::move(initial));
}

condition_response_structure condition_response_structure::from_parts(prime_event_structure pes,
                                                                      std::vector<event_set> responses,
                                                                      event_set initial_responses) {
    condition_response_structure c;
    c.pes_ = std::move(pes);
    c.responses_ = std::move(responses);
    c.initial_ = std::move(initial_responses);
    return c;
}

structure_document condition_response_structure::to_document() const {
    auto doc = pes_.to_document();
    for (event_index e = 0; e < size(); ++e)
        responses_[e].for_each([&](event_index t) { doc.responses.emplace_back(pes_.name(e), pes_.name(t)); });
    initial_.for_each([&](event_index e) { doc.initial_responses.push_back(pes_.name(e)); });
    return doc;
}

// ---------------------------------------------------------------------------

bool is_configuration(const prime_event_structure& p, const event_set& c) {
    bool ok = true;
    c.for_each([&](event_index e) {
        if (p.conflicts(e).intersects(c) || !p.causes(e).subset_of(c)) ok = false;
    });
    return ok;
}

namespace {

void require_distinct(const prime_event_structure& p, const std::vector<event_index>& run) {
    event_set seen(p.size());
    for (auto e : run) {
        if (e >= p.size()) throw error(errc::unknown_event, "unknown event index " + std::to_string(e));
        if (seen.contains(e)) throw error(errc::repeated_event, "event '" + p.name(e) + "' occurs twice in the run");
        seen.insert(e);
    }
}

}  // namespace

bool pes_run_valid(const prime_event_structure& p, const std::vector<event_index>& run) {
    require_distinct(p, run);
    event_set prefix(p.size());
    for (auto e : run) {
        prefix.insert(e);
        if (!is_configuration(p, prefix)) return false;
    }
    return true;
}

bool pes_run_maximal(const prime_event_structure& p, const std::vector<event_index>& run) {
    if (!pes_run_valid(p, run)) return false;
    event_set occurred(p.size());
    for (auto e : run) occurred.insert(e);
    for (event_index e = 0; e < p.size(); ++e) {
        if (occurred.contains(e)) continue;
        if (p.causes(e).subset_of(occurred) && !p.conflicts(e).intersects(occurred)) return false;
    }
    return true;
}

bool cres_run_accepting(const condition_response_structure& c, const std::vector<event_index>& run) {
    const auto& p = c.underlying();
    if (!pes_run_valid(p, run)) throw error(errc::invalid_run, "run is not a run of the underlying event structure");

    event_set occurred(p.size());
    event_set conflicted(p.size());
    for (auto e : run) {
        occurred.insert(e);
        conflicted |= p.conflicts(e);
    }
    if (!(c.initial_responses() - occurred - conflicted).empty()) return false;

    event_set later(p.size());
    for (std::size_t i = run.size(); i-- > 0;) {
        if (!(c.responses_of(run[i]) - later - conflicted).empty()) return false;
        later.insert(run[i]);
    }
    return true;
}

condition_response_structure pes_to_cres_plain(const prime_event_structure& p) {
    return condition_response_structure::from_parts(p, std::vector<event_set>(p.size(), event_set(p.size())),
                                                    event_set(p.size()));
}

condition_response_structure pes_to_cres_fair(const prime_event_structure& p) {
    std::vector<event_set> responses(p.size(), event_set(p.size()));
    event_set initial(p.size());
    for (event_index e = 0; e < p.size(); ++e) {
        p.causes(e).for_each([&](event_index c) { responses[c].insert(e); });
        if (p.causes(e).empty()) initial.insert(e);
    }
    return condition_response_structure::from_parts(p, std::move(responses), std::move(initial));
}

graph_document cres_to_dcrg(const condition_response_structure& c) {
    const auto& p = c.underlying();
    graph_document doc;
    doc.events.reserve(p.size());
    for (event_index e = 0; e < p.size(); ++e) {
        doc.events.push_back(p.name(e));
        if (p.action(e) != p.name(e)) doc.labels[p.name(e)] = p.action(e);
    }
    for (event_index t = 0; t < p.size(); ++t)
        p.causes(t).for_each([&](event_index s) { doc.conditions.emplace_back(p.name(s), p.name(t)); });
    for (event_index e = 0; e < p.size(); ++e) {
        c.responses_of(e).for_each([&](event_index t) { doc.responses.emplace_back(p.name(e), p.name(t)); });
        doc.excludes.emplace_back(p.name(e), p.name(e));
        p.conflicts(e).for_each([&](event_index o) { doc.excludes.emplace_back(p.name(e), p.name(o)); });
    }
    marking_document m;
    c.initial_responses().for_each([&](event_index e) { m.pending.push_back(p.name(e)); });
    m.included = doc.events;
    doc.marking = std::move(m);
    return doc;
}

}  // namespace dcr
