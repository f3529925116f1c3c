#pragma once

#include <cstddef>
#include <vector>

#include "dcr/graph.hpp"

namespace dcr {

struct lts_transition {
    std::size_t source;
    event_index event;
    std::size_t target;

    friend bool operator==(const lts_transition&, const lts_transition&) = default;
};

/// Reachable fragment of the transition system of a graph. State 0 is the
/// initial marking; states are numbered in breadth-first discovery order.
struct lts {
    std::vector<marking> states;
    std::vector<lts_transition> transitions;
    std::vector<bool> accepting;
    bool truncated = false;

    [[nodiscard]] std::size_t initial() const noexcept { return 0; }
    [[nodiscard]] std::size_t accepting_count() const;
};

inline constexpr std::size_t default_max_states = 100000;

/// Breadth-first closure of the initial marking under execute. Successors
/// are generated in event declaration order. At most max_states states are
/// admitted; transitions into states that did not fit are dropped and
/// truncated is set.
[[nodiscard]] lts explore_lts(const graph& g, std::size_t max_states = default_max_states);
/// Same, rooted at an arbitrary marking instead of the initial one.
[[nodiscard]] lts explore_lts(const graph& g, const marking& start, std::size_t max_states = default_max_states);

}  // namespace dcr
