#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "dcr/graph.hpp"

namespace dcr {

/// A labelled prime event structure or condition response event structure as
/// written in a file. Causality pairs are generators; the order is their
/// reflexive-transitive closure. Conflict pairs are unordered and listed once.
/// A plain prime event structure leaves responses and initial_responses empty.
struct structure_document {
    std::vector<std::string> events;
    std::map<std::string, std::string> labels;
    relation_pairs causality;
    relation_pairs conflict;
    relation_pairs responses;
    std::vector<std::string> initial_responses;
};

structure_document structure_from_json(const nlohmann::json& j);
nlohmann::json to_json(const structure_document& doc);

/// Partial order, conflict irreflexivity and conflict heredity.
validation_report validate_pes(const structure_document& doc);
/// validate_pes plus acyclicity of strict causality joined with responses.
validation_report validate_cres(const structure_document& doc);

/// Finite labelled prime event structure.
class prime_event_structure {
public:
    prime_event_structure() = default;

    /// Throws invalid_graph carrying the validate_pes report.
    static prime_event_structure from_document(const structure_document& doc);

    [[nodiscard]] std::size_t size() const noexcept { return names_.size(); }
    [[nodiscard]] const std::string& name(event_index e) const { return names_.at(e); }
    [[nodiscard]] const std::string& action(event_index e) const { return actions_.at(e); }
    [[nodiscard]] event_index index_of(std::string_view name) const;
    [[nodiscard]] event_set make_set(std::initializer_list<std::string_view> names) const;

    /// {e' | e' < e}
    [[nodiscard]] const event_set& causes(event_index e) const { return causes_.at(e); }
    [[nodiscard]] const event_set& conflicts(event_index e) const { return conflicts_.at(e); }
    [[nodiscard]] bool in_conflict(event_index a, event_index b) const { return conflicts_.at(a).contains(b); }

    [[nodiscard]] structure_document to_document() const;

private:
    friend class condition_response_structure;

    std::vector<std::string> names_;
    std::vector<std::string> actions_;
    std::unordered_map<std::string, event_index> index_;
    std::vector<event_set> causes_;
    std::vector<event_set> conflicts_;
};

/// Prime event structure with a response relation and initial responses.
class condition_response_structure {
public:
    condition_response_structure() = default;

    /// Throws invalid_graph carrying the validate_cres report.
    static condition_response_structure from_document(const structure_document& doc);
    static condition_response_structure from_parts(prime_event_structure pes, std::vector<event_set> responses,
                                                   event_set initial_responses);

    [[nodiscard]] const prime_event_structure& underlying() const noexcept { return pes_; }
    [[nodiscard]] std::size_t size() const noexcept { return pes_.size(); }
    [[nodiscard]] const event_set& responses_of(event_index e) const { return responses_.at(e); }
    [[nodiscard]] const event_set& initial_responses() const noexcept { return initial_; }

    [[nodiscard]] structure_document to_document() const;

private:
    prime_event_structure pes_;
    std::vector<event_set> responses_;
    event_set initial_;
};

/// Conflict-free and downwards closed.
[[nodiscard]] bool is_configuration(const prime_event_structure& p, const event_set& c);

/// Every prefix forms a configuration. Throws error(repeated_event).
[[nodiscard]] bool pes_run_valid(const prime_event_structure& p, const std::vector<event_index>& run);

/// Valid, and no event outside the run has all its causes inside while being
/// conflict-free with it.
[[nodiscard]] bool pes_run_maximal(const prime_event_structure& p, const std::vector<event_index>& run);

/// Every initial response occurs or conflicts with a run event, and every
/// response of a run event occurs strictly later or conflicts with a run
/// event. Throws error(invalid_run) when the run is not valid.
[[nodiscard]] bool cres_run_accepting(const condition_response_structure& c, const std::vector<event_index>& run);

/// No responses and no initial responses: every run is accepting.
[[nodiscard]] condition_response_structure pes_to_cres_plain(const prime_event_structure& p);

/// Responses are the strict causal order and the initial responses are the
/// cause-free events: accepting runs are exactly the maximal runs.
[[nodiscard]] condition_response_structure pes_to_cres_fair(const prime_event_structure& p);

/// Encodes conflict as mutual exclusion and makes every event exclude itself.
/// Initial marking: nothing executed, the initial responses pending, all
/// events included.
[[nodiscard]] graph_document cres_to_dcrg(const condition_response_structure& c);

}  // namespace dcr
