#include "dcr/semantics.hpp"

#include <algorithm>
#include <unordered_map>

namespace dcr {

transition_label plain_label(const graph& g, event_index e) { return {e, g.action(e), std::nullopt}; }

event_set blocking_conditions(const graph& g, const marking& m, event_index e) {
    return (g.conditions_of(e) & m.included) - m.executed;
}

bool is_enabled(const graph& g, const marking& m, event_index e) {
    return m.included.contains(e) && blocking_conditions(g, m, e).empty();
}

event_set enabled_events(const graph& g, const marking& m) {
    event_set out = g.empty_set();
    m.included.for_each([&](event_index e) {
        if (blocking_conditions(g, m, e).empty()) out.insert(e);
    });
    return out;
}

marking execute(const graph& g, const marking& m, event_index e) {
    if (e >= g.size()) throw execution_error(errc::unknown_event, "unknown event index " + std::to_string(e));
    if (!m.included.contains(e))
        throw execution_error(errc::not_included, "event '" + g.name(e) + "' is not included");
    const auto blocking = blocking_conditions(g, m, e);
    if (!blocking.empty())
        throw execution_error(errc::conditions_unmet,
                              "event '" + g.name(e) + "' is blocked by {" + g.format(blocking) + "}",
                              g.names_of(blocking));

    marking next = m;
    next.executed.insert(e);
    next.pending.erase(e);
    next.pending |= g.responses_of(e);
    next.included |= g.includes_of(e);
    next.included -= g.excludes_of(e);
    return next;
}

marking execute(const graph& g, const marking& m, std::string_view event) { return execute(g, m, g.index_of(event)); }

distributed_step execute_as(const distributed_graph& d, const marking& m, std::string_view principal, event_index e) {
    const auto& g = d.base();
    if (!d.has_principal(principal))
        throw execution_error(errc::unknown_principal, "unknown principal '" + std::string(principal) + "'");
    if (e >= g.size()) throw execution_error(errc::unknown_event, "unknown event index " + std::to_string(e));
    auto target = execute(g, m, e);
    const auto roles = d.witnesses(principal, e);
    if (roles.empty())
        throw execution_error(errc::unauthorized, "principal '" + std::string(principal) +
                                                      "' holds no role permitting '" + g.action(e) + "'");
    return {std::move(target), {e, g.action(e), authorization{std::string(principal), roles.front()}}};
}

std::vector<enabled_triple> enabled_for(const distributed_graph& d, const marking& m, std::string_view principal) {
    if (!d.has_principal(principal))
        throw execution_error(errc::unknown_principal, "unknown principal '" + std::string(principal) + "'");
    const auto& g = d.base();
    std::vector<enabled_triple> out;
    enabled_events(g, m).for_each([&](event_index e) {
        for (auto& role : d.witnesses(principal, e)) out.push_back({e, g.action(e), std::move(role)});
    });
    return out;
}

bool is_accepting_marking(const marking& m) { return !m.pending.intersects(m.included); }

replay_result replay(const graph& g, const std::vector<event_index>& events) {
    replay_result r;
    r.markings.push_back(g.initial_marking());
    for (std::size_t i = 0; i < events.size(); ++i) {
        try {
            r.markings.push_back(execute(g, r.markings.back(), events[i]));
        } catch (const execution_error& e) {
            throw replay_error(i, e);
        }
        r.run.push_back(plain_label(g, events[i]));
    }
    return r;
}

replay_result replay(const graph& g, const std::vector<std::string>& events) {
    std::vector<event_index> ids;
    for (std::size_t i = 0; i < events.size(); ++i) {
        try {
            ids.push_back(g.index_of(events[i]));
        } catch (const execution_error& e) {
            throw replay_error(i, e);
        }
    }
    return replay(g, ids);
}

namespace {

marking step_label(const distributed_graph& d, const marking& m, const transition_label& label) {
    const auto& g = d.base();
    if (label.event >= g.size())
        throw execution_error(errc::unknown_event, "unknown event index " + std::to_string(label.event));
    if (label.action != g.action(label.event))
        throw execution_error(errc::invalid_run, "label action '" + label.action + "' does not match event '" +
                                                     g.name(label.event) + "'");
    if (label.as) {
        if (!d.has_principal(label.as->principal))
            throw execution_error(errc::unknown_principal, "unknown principal '" + label.as->principal + "'");
        if (!d.principal_has(label.as->principal, label.as->role) || !d.action_has(label.action, label.as->role))
            throw execution_error(errc::unauthorized, "'" + label.as->principal + "' may not perform '" +
                                                          label.action + "' as '" + label.as->role + "'");
    }
    return execute(g, m, label.event);
}

}  // namespace

replay_result replay(const distributed_graph& d, const finite_run& run) {
    replay_result r;
    r.markings.push_back(d.base().initial_marking());
    for (std::size_t i = 0; i < run.size(); ++i) {
        try {
            r.markings.push_back(step_label(d, r.markings.back(), run[i]));
        } catch (const execution_error& e) {
            throw replay_error(i, e);
        }
        r.run.push_back(run[i]);
    }
    return r;
}

bool finite_run_accepting(const graph& g, const std::vector<event_index>& events) {
    return is_accepting_marking(replay(g, events).markings.back());
}

namespace {

template <typename Step>
bool decide_lasso(const marking& initial, std::size_t prefix_len, std::size_t loop_len, Step&& step) {
    if (loop_len == 0) throw error(errc::invalid_run, "lasso loop must be nonempty");

    std::vector<marking> markings{initial};
    std::vector<event_index> events;
    for (std::size_t s = 0; s < prefix_len; ++s) {
        try {
            auto [e, next] = step(markings.back(), s, false);
            events.push_back(e);
            markings.push_back(std::move(next));
        } catch (const execution_error& err) {
            throw lasso_error(0, s, err);
        }
    }

    // Position of each loop entry, keyed by the marking found there.
    std::unordered_map<marking, std::size_t> entry_position;
    std::size_t iteration = 1;
    while (entry_position.emplace(markings.back(), markings.size() - 1).second) {
        for (std::size_t s = 0; s < loop_len; ++s) {
            try {
                auto [e, next] = step(markings.back(), s, true);
                events.push_back(e);
                markings.push_back(std::move(next));
            } catch (const execution_error& err) {
                throw lasso_error(iteration, s, err);
            }
        }
        ++iteration;
    }

    const std::size_t transient = entry_position.at(markings.back());
    const std::size_t end = events.size();
    const std::size_t period = end - transient;
    auto wrap = [&](std::size_t j) { return j < end ? j : transient + (j - transient) % period; };

    for (std::size_t i = 0; i < end; ++i) {
        const auto obligations = markings[i].pending & markings[i].included;
        const std::size_t horizon = std::max(i, transient) + period;
        bool ok = true;
        obligations.for_each([&](event_index x) {
            if (!ok) return;
            for (std::size_t j = i; j < horizon; ++j) {
                const auto k = wrap(j);
                if (events[k] == x || !markings[k].included.contains(x)) return;
            }
            ok = false;
        });
        if (!ok) return false;
    }
    return true;
}

}  // namespace

bool lasso_run_accepting(const graph& g, const event_lasso& lasso) {
    return decide_lasso(g.initial_marking(), lasso.prefix.size(), lasso.loop.size(),
                        [&](const marking& m, std::size_t s, bool in_loop) {
                            const auto e = in_loop ? lasso.loop[s] : lasso.prefix[s];
                            return std::pair{e, execute(g, m, e)};
                        });
}

bool lasso_run_accepting(const distributed_graph& d, const lasso_run& lasso) {
    return decide_lasso(d.base().initial_marking(), lasso.prefix.size(), lasso.loop.size(),
                        [&](const marking& m, std::size_t s, bool in_loop) {
                            const auto& label = in_loop ? lasso.loop[s] : lasso.prefix[s];
                            return std::pair{label.event, step_label(d, m, label)};
                        });
}

}  // namespace dcr
