#include "dcr/lts.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "dcr/semantics.hpp"

namespace dcr {

std::size_t lts::accepting_count() const {
    return static_cast<std::size_t>(std::count(accepting.begin(), accepting.end(), true));
}

lts explore_lts(const graph& g, std::size_t max_states) { return explore_lts(g, g.initial_marking(), max_states); }

lts explore_lts(const graph& g, const marking& start, std::size_t max_states) {
    if (max_states == 0) throw error(errc::state_bound_exceeded, "max_states must be at least 1");

    lts out;
    std::unordered_map<marking, std::size_t> ids;
    auto admit = [&](const marking& m) {
        ids.emplace(m, out.states.size());
        out.states.push_back(m);
        out.accepting.push_back(is_accepting_marking(m));
    };
    admit(start);

    for (std::size_t current = 0; current < out.states.size(); ++current) {
        const marking source = out.states[current];
        enabled_events(g, source).for_each([&](event_index e) {
            auto target = execute(g, source, e);
            auto it = ids.find(target);
            if (it == ids.end()) {
                if (out.states.size() >= max_states) {
                    out.truncated = true;
                    return;
                }
                admit(target);
                it = ids.find(target);
            }
            out.transitions.push_back({current, e, it->second});
        });
    }
    return out;
}

}  // namespace dcr
