#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dcr/graph.hpp"
#include "dcr/semantics.hpp"

namespace dcr {

/// Fixed total order on events used to schedule pending responses.
class rank_order {
public:
    rank_order() = default;

    /// Declaration order.
    static rank_order declaration(std::size_t events);
    /// Throws error(order_not_permutation).
    static rank_order from_sequence(std::size_t events, std::vector<event_index> sequence);
    static rank_order from_names(const graph& g, const std::vector<std::string>& names);

    [[nodiscard]] const std::vector<event_index>& sequence() const noexcept { return sequence_; }
    /// 1-based.
    [[nodiscard]] std::size_t rank(event_index e) const { return rank_.at(e); }
    /// The member of s with the least rank, if any.
    [[nodiscard]] std::optional<event_index> min(const event_set& s) const;

private:
    std::vector<event_index> sequence_;
    std::vector<std::size_t> rank_;
};

/// (marking, index, flag); flag is 1 exactly on accepting states.
struct buchi_state {
    marking m;
    std::size_t index = 1;
    bool flag = false;

    friend bool operator==(const buchi_state&, const buchi_state&) = default;
};

/// A transition whose letter is empty is a tau step.
struct buchi_transition {
    std::size_t source;
    std::optional<transition_label> letter;
    std::size_t target;

    [[nodiscard]] bool is_tau() const noexcept { return !letter.has_value(); }
};

inline constexpr std::size_t default_buchi_state_bound = 1'000'000;

class buchi_automaton {
public:
    [[nodiscard]] const std::vector<buchi_state>& states() const noexcept { return states_; }
    [[nodiscard]] const std::vector<buchi_transition>& transitions() const noexcept { return transitions_; }
    [[nodiscard]] std::size_t initial() const noexcept { return 0; }
    [[nodiscard]] const rank_order& order() const noexcept { return order_; }
    [[nodiscard]] const distributed_graph& source() const noexcept { return graph_; }
    [[nodiscard]] bool accepting(std::size_t s) const { return states_.at(s).flag; }
    [[nodiscard]] std::size_t accepting_count() const;

    /// Target of the non-tau letter from s, if the automaton has that edge.
    [[nodiscard]] std::optional<std::size_t> successor(std::size_t s, const transition_label& letter) const;
    [[nodiscard]] std::size_t tau_successor(std::size_t s) const { return tau_.at(s); }
    /// Outgoing non-tau transitions of s (indices into transitions()).
    [[nodiscard]] const std::vector<std::size_t>& outgoing(std::size_t s) const { return outgoing_.at(s); }

private:
    friend buchi_automaton build_buchi(const distributed_graph&, const rank_order&, std::size_t);

    distributed_graph graph_;
    rank_order order_;
    std::vector<buchi_state> states_;
    std::vector<buchi_transition> transitions_;
    std::vector<std::size_t> tau_;
    std::vector<std::vector<std::size_t>> outgoing_;
    // Per state, (event, target) for every enabled event; sorted by event.
    std::vector<std::vector<std::pair<event_index, std::size_t>>> by_event_;
};

/// Reachable fragment of the Buchi automaton with tau-event. Throws
/// error(state_bound_exceeded) past max_states.
[[nodiscard]] buchi_automaton build_buchi(const distributed_graph& d, const rank_order& order,
                                          std::size_t max_states = default_buchi_state_bound);
[[nodiscard]] buchi_automaton build_buchi(const distributed_graph& d);

/// State reached after reading the letters, or nothing if some letter has no
/// transition.
[[nodiscard]] std::optional<std::size_t> buchi_walk(const buchi_automaton& b, const finite_run& run);

/// Whether run . tau^omega is accepted.
[[nodiscard]] bool buchi_accepts_finite(const buchi_automaton& b, const finite_run& run);

/// Whether some word with tau-erasure prefix . loop^omega is accepted.
/// Throws lasso_error when the letters cannot be read forever.
[[nodiscard]] bool buchi_accepts_lasso(const buchi_automaton& b, const lasso_run& lasso);

struct acceptance_report {
    std::size_t runs_checked = 0;
    std::size_t lassos_checked = 0;
    std::vector<std::string> disagreements;

    [[nodiscard]] bool pass() const noexcept { return disagreements.empty(); }
};

/// Enumerates every finite run up to run_bound letters and every lasso with
/// prefix and loop up to lasso_bound letters, and compares the semantics'
/// verdicts (runs and acceptance) with the automaton's.
[[nodiscard]] acceptance_report compare_acceptance(const distributed_graph& d, std::size_t run_bound,
                                                   std::size_t lasso_bound);
[[nodiscard]] acceptance_report compare_acceptance(const distributed_graph& d, const rank_order& order,
                                                   std::size_t run_bound, std::size_t lasso_bound);

/// Every distributed label available for firing e.
[[nodiscard]] std::vector<transition_label> labels_for(const distributed_graph& d, event_index e);

}  // namespace dcr
