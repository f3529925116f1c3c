#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dcr/graph.hpp"

namespace dcr {

/// The (principal, role) pair witnessing a distributed step.
struct authorization {
    std::string principal;
    std::string role;

    friend bool operator==(const authorization&, const authorization&) = default;
    friend auto operator<=>(const authorization&, const authorization&) = default;
};

/// (e, a) for plain steps, (e, (p, a, r)) when `as` is present.
struct transition_label {
    event_index event = 0;
    std::string action;
    std::optional<authorization> as;

    friend bool operator==(const transition_label&, const transition_label&) = default;
};

using finite_run = std::vector<transition_label>;

/// prefix . loop^omega; the loop must be nonempty.
struct lasso_run {
    std::vector<transition_label> prefix;
    std::vector<transition_label> loop;
};

/// Same shape as lasso_run but over bare events.
struct event_lasso {
    std::vector<event_index> prefix;
    std::vector<event_index> loop;
};

transition_label plain_label(const graph& g, event_index e);

// -- single steps -----------------------------------------------------------

/// Included condition sources of e that have not been executed.
[[nodiscard]] event_set blocking_conditions(const graph& g, const marking& m, event_index e);
[[nodiscard]] bool is_enabled(const graph& g, const marking& m, event_index e);
[[nodiscard]] event_set enabled_events(const graph& g, const marking& m);

/// Fires e. Throws execution_error with not_included or conditions_unmet
/// (the latter carrying the full blocking set).
[[nodiscard]] marking execute(const graph& g, const marking& m, event_index e);
/// As above, by name; unknown names raise unknown_event.
[[nodiscard]] marking execute(const graph& g, const marking& m, std::string_view event);

struct distributed_step {
    marking target;
    transition_label label;
};

/// Fires e on behalf of a principal. The label carries the least witnessing
/// role. Enabledness is checked before authorization, so a blocked event
/// reports its blocking set whoever asks.
[[nodiscard]] distributed_step execute_as(const distributed_graph& d, const marking& m, std::string_view principal,
                                          event_index e);

struct enabled_triple {
    event_index event;
    std::string action;
    std::string role;

    friend bool operator==(const enabled_triple&, const enabled_triple&) = default;
    friend auto operator<=>(const enabled_triple&, const enabled_triple&) = default;
};

/// Every (event, action, role) the principal may fire from m, in event
/// declaration order then role order. Throws unknown_principal.
[[nodiscard]] std::vector<enabled_triple> enabled_for(const distributed_graph& d, const marking& m,
                                                      std::string_view principal);

/// Re and In are disjoint.
[[nodiscard]] bool is_accepting_marking(const marking& m);

// -- runs -------------------------------------------------------------------

struct replay_result {
    std::vector<marking> markings;  // M0 .. Mk
    finite_run run;
};

/// Fires the events in order from the initial marking. Throws replay_error
/// carrying the index of the first step that is not enabled.
[[nodiscard]] replay_result replay(const graph& g, const std::vector<event_index>& events);
[[nodiscard]] replay_result replay(const graph& g, const std::vector<std::string>& events);

/// Replays distributed labels, checking each authorization against the
/// assignment relation as well as enabledness.
[[nodiscard]] replay_result replay(const distributed_graph& d, const finite_run& run);

/// Acceptance of a finite run: the final marking has no included pending
/// response. Throws replay_error on a run that does not replay.
[[nodiscard]] bool finite_run_accepting(const graph& g, const std::vector<event_index>& events);

/// Acceptance of prefix . loop^omega. Throws lasso_error if the loop cannot
/// be repeated forever.
///
/// The marking at each loop entry is recorded until one repeats; from then on
/// the marking sequence is periodic. Every included pending event at every
/// position up to the end of the first period must then be executed, or be
/// excluded, no later than one period further on.
[[nodiscard]] bool lasso_run_accepting(const graph& g, const event_lasso& lasso);
[[nodiscard]] bool lasso_run_accepting(const distributed_graph& d, const lasso_run& lasso);

}  // namespace dcr
