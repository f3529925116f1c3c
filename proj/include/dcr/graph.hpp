#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dcr/error.hpp"
#include "dcr/event_set.hpp"

namespace dcr {

// ---------------------------------------------------------------------------
// Documents: the graph exactly as written in a file, names and all. A document
// may be malformed; validate_graph() says how.
// ---------------------------------------------------------------------------

using relation_pairs = std::vector<std::pair<std::string, std::string>>;

struct marking_document {
    std::vector<std::string> executed;
    std::vector<std::string> pending;
    std::vector<std::string> included;
};

struct assignment_document {
    std::map<std::string, std::vector<std::string>> principals;  // principal -> roles
    std::map<std::string, std::vector<std::string>> actions;     // action -> roles
};

struct graph_document {
    std::vector<std::string> events;
    std::map<std::string, std::string> labels;
    relation_pairs conditions;  // (c, t): c ->* t
    relation_pairs responses;   // (a, b): a *-> b
    relation_pairs includes;    // (a, b): a ->+ b
    relation_pairs excludes;    // (a, b): a ->% b
    std::optional<marking_document> marking;
    std::optional<std::vector<std::string>> roles;
    std::optional<std::vector<std::string>> principals;
    std::optional<assignment_document> assignments;

    [[nodiscard]] bool is_distributed() const {
        return roles.has_value() || principals.has_value() || assignments.has_value();
    }
};

enum class severity { error, warning };

struct finding {
    severity level;
    std::string code;
    std::string message;
    std::string element;
};

struct validation_report {
    std::vector<finding> findings;

    [[nodiscard]] std::size_t errors() const;
    [[nodiscard]] std::size_t warnings() const;
    [[nodiscard]] bool ok() const { return errors() == 0; }
    [[nodiscard]] std::size_t count(std::string_view code) const;
};

bool is_identifier(std::string_view token);

/// Referential integrity and the include/exclude partial-map check. In the
/// distributed case also warns about actions no role may perform.
validation_report validate_graph(const graph_document& doc);

/// Role assignment checks: roles and principals must be declared.
validation_report validate_distributed(const graph_document& doc);

/// Both of the above.
validation_report validate_document(const graph_document& doc);

/// Thrown when compiling a document that has error findings.
class invalid_graph : public error {
public:
    explicit invalid_graph(validation_report report);
    [[nodiscard]] const validation_report& report() const noexcept { return report_; }

private:
    validation_report report_;
};

// ---------------------------------------------------------------------------
// Compiled model.
// ---------------------------------------------------------------------------

/// Runtime state: executed, pending responses, included.
struct marking {
    event_set executed;
    event_set pending;
    event_set included;

    friend bool operator==(const marking&, const marking&) = default;
    friend auto operator<=>(const marking&, const marking&) = default;

    [[nodiscard]] std::size_t hash() const noexcept {
        auto h = executed.hash();
        h ^= pending.hash() * 31 + 0x9e3779b97f4a7c15ULL + (h << 6);
        h ^= included.hash() * 131 + (h >> 3);
        return h;
    }
};

/// Immutable DCR graph over events indexed in declaration order.
class graph {
public:
    graph() = default;

    /// Throws invalid_graph if validate_graph reports errors.
    static graph from_document(const graph_document& doc);

    [[nodiscard]] std::size_t size() const noexcept { return names_.size(); }
    [[nodiscard]] const std::string& name(event_index e) const { return names_.at(e); }
    [[nodiscard]] const std::string& action(event_index e) const { return actions_.at(e); }
    [[nodiscard]] std::optional<event_index> find(std::string_view name) const;
    /// Throws execution_error(unknown_event).
    [[nodiscard]] event_index index_of(std::string_view name) const;

    [[nodiscard]] const event_set& conditions_of(event_index target) const { return conditions_to_.at(target); }
    [[nodiscard]] const event_set& responses_of(event_index source) const { return responses_from_.at(source); }
    [[nodiscard]] const event_set& includes_of(event_index source) const { return includes_from_.at(source); }
    [[nodiscard]] const event_set& excludes_of(event_index source) const { return excludes_from_.at(source); }

    [[nodiscard]] const marking& initial_marking() const noexcept { return initial_; }

    [[nodiscard]] event_set empty_set() const { return event_set(size()); }
    [[nodiscard]] event_set all_events() const { return event_set::full(size()); }
    /// Throws execution_error(unknown_event) on an undeclared name.
    [[nodiscard]] event_set make_set(std::span<const std::string> names) const;
    [[nodiscard]] event_set make_set(std::initializer_list<std::string_view> names) const;
    [[nodiscard]] marking make_marking(std::initializer_list<std::string_view> executed,
                                       std::initializer_list<std::string_view> pending,
                                       std::initializer_list<std::string_view> included) const;

    /// Member names sorted lexicographically.
    [[nodiscard]] std::vector<std::string> names_of(const event_set& s) const;
    /// Sorted, comma-separated names.
    [[nodiscard]] std::string format(const event_set& s) const;
    /// "Ex={..} Re={..} In={..}"
    [[nodiscard]] std::string format(const marking& m) const;

    [[nodiscard]] graph_document to_document() const;

private:
    std::vector<std::string> names_;
    std::vector<std::string> actions_;
    std::unordered_map<std::string, event_index> index_;
    std::vector<event_set> conditions_to_;
    std::vector<event_set> responses_from_;
    std::vector<event_set> includes_from_;
    std::vector<event_set> excludes_from_;
    marking initial_;
};

/// A graph together with roles, principals, and the role assignment relation.
class distributed_graph {
public:
    distributed_graph() = default;

    /// Throws invalid_graph on any error finding of validate_document.
    static distributed_graph from_document(const graph_document& doc);

    /// Grants every action to a single implicit principal through a single
    /// implicit role, so plain graphs can be fed to role-aware machinery.
    static distributed_graph open(graph g);

    static constexpr std::string_view implicit_principal = "_";
    static constexpr std::string_view implicit_role = "_";

    [[nodiscard]] const graph& base() const noexcept { return graph_; }
    [[nodiscard]] const std::vector<std::string>& roles() const noexcept { return roles_; }
    [[nodiscard]] const std::vector<std::string>& principals() const noexcept { return principals_; }
    [[nodiscard]] bool has_principal(std::string_view p) const;

    [[nodiscard]] bool principal_has(std::string_view principal, std::string_view role) const;
    [[nodiscard]] bool action_has(std::string_view action, std::string_view role) const;

    /// Roles r with (principal, r) and (action(e), r) assigned, ascending.
    [[nodiscard]] std::vector<std::string> witnesses(std::string_view principal, event_index e) const;
    /// Roles that may perform the action of e, ascending.
    [[nodiscard]] std::vector<std::string> roles_for(event_index e) const;

    [[nodiscard]] graph_document to_document() const;

private:
    graph graph_;
    std::vector<std::string> roles_;
    std::vector<std::string> principals_;
    std::map<std::string, std::set<std::string>, std::less<>> principal_roles_;
    std::map<std::string, std::set<std::string>, std::less<>> action_roles_;
};

}  // namespace dcr

template <>
struct std::hash<dcr::marking> {
    std::size_t operator()(const dcr::marking& m) const noexcept { return m.hash(); }
};
