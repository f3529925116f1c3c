#include "dcr/buchi.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <unordered_map>

namespace dcr {

rank_order rank_order::declaration(std::size_t events) {
    std::vector<event_index> seq(events);
    for (event_index e = 0; e < events; ++e) seq[e] = e;
    return from_sequence(events, std::move(seq));
}

rank_order rank_order::from_sequence(std::size_t events, std::vector<event_index> sequence) {
    if (sequence.size() != events) throw error(errc::order_not_permutation, "rank order must list every event exactly once");
    rank_order r;
    r.rank_.assign(events, 0);
    for (std::size_t pos = 0; pos < sequence.size(); ++pos) {
        const auto e = sequence[pos];
        if (e >= events || r.rank_[e] != 0)
            throw error(errc::order_not_permutation, "rank order must list every event exactly once");
        r.rank_[e] = pos + 1;
    }
    r.sequence_ = std::move(sequence);
    return r;
}

rank_order rank_order::from_names(const graph& g, const std::vector<std::string>& names) {
    std::vector<event_index> seq;
    for (const auto& n : names) {
        auto e = g.find(n);
        if (!e) throw error(errc::order_not_permutation, "rank order names unknown event '" + n + "'");
        seq.push_back(*e);
    }
    return from_sequence(g.size(), std::move(seq));
}

std::optional<event_index> rank_order::min(const event_set& s) const {
    for (auto e : sequence_)
        if (s.contains(e)) return e;
    return std::nullopt;
}

// ---------------------------------------------------------------------------

std::size_t buchi_automaton::accepting_count() const {
    return static_cast<std::size_t>(std::count_if(states_.begin(), states_.end(), [](const buchi_state& s) { return s.flag; }));
}

std::optional<std::size_t> buchi_automaton::successor(std::size_t s, const transition_label& letter) const {
    if (!letter.as) return std::nullopt;
    const auto& g = graph_.base();
    if (letter.event >= g.size() || letter.action != g.action(letter.event)) return std::nullopt;
    if (!graph_.principal_has(letter.as->principal, letter.as->role) || !graph_.action_has(letter.action, letter.as->role))
        return std::nullopt;
    const auto& succ = by_event_.at(s);
    auto it = std::lower_bound(succ.begin(), succ.end(), letter.event,
                               [](const auto& entry, event_index e) { return entry.first < e; });
    if (it == succ.end() || it->first != letter.event) return std::nullopt;
    return it->second;
}

std::vector<transition_label> labels_for(const distributed_graph& d, event_index e) {
    std::vector<transition_label> out;
    const auto& action = d.base().action(e);
    for (const auto& p : d.principals())
        for (auto& role : d.witnesses(p, e)) out.push_back({e, action, authorization{p, std::move(role)}});
    return out;
}

namespace {

struct state_key_hash {
    std::size_t operator()(const buchi_state& s) const noexcept {
        return s.m.hash() ^ (s.index * 0x9e3779b97f4a7c15ULL) ^ (s.flag ? 0x51ed27 : 0);
    }
};

bool no_included_pending(const marking& m) { return !m.pending.intersects(m.included); }

}  // namespace

buchi_automaton build_buchi(const distributed_graph& d, const rank_order& order, std::size_t max_states) {
    const auto& g = d.base();
    if (order.sequence().size() != g.size())
        throw error(errc::order_not_permutation, "rank order must list every event exactly once");

    buchi_automaton b;
    b.graph_ = d;
    b.order_ = order;

    std::unordered_map<buchi_state, std::size_t, state_key_hash> ids;
    auto intern = [&](buchi_state s) {
        auto [it, fresh] = ids.emplace(s, b.states_.size());
        if (fresh) {
            if (b.states_.size() >= max_states)
                throw error(errc::state_bound_exceeded,
                            "automaton exceeds " + std::to_string(max_states) + " states");
            b.states_.push_back(std::move(s));
            b.tau_.push_back(0);
            b.outgoing_.emplace_back();
            b.by_event_.emplace_back();
        }
        return it->second;
    };

    const auto& m0 = g.initial_marking();
    intern({m0, 1, no_included_pending(m0)});

    for (std::size_t id = 0; id < b.states_.size(); ++id) {
        const buchi_state current = b.states_[id];
        const auto& m1 = current.m;

        const auto tau_target = intern({m1, current.index, no_included_pending(m1)});
        b.tau_[id] = tau_target;
        b.transitions_.push_back({id, std::nullopt, tau_target});

        const auto pending_before = m1.pending & m1.included;
        event_set above_index = g.empty_set();
        pending_before.for_each([&](event_index x) {
            if (order.rank(x) > current.index) above_index.insert(x);
        });
        const auto min_above = order.min(above_index);
        const auto min_pending = order.min(pending_before);

        for (event_index e = 0; e < g.size(); ++e) {
            if (!is_enabled(g, m1, e)) continue;
            auto labels = labels_for(d, e);
            if (labels.empty()) continue;

            marking m2 = execute(g, m1, e);
            const auto pending_after = m2.pending & m2.included;
            auto discharged = pending_before - pending_after;
            discharged.insert(e);

            bool flag = pending_after.empty();
            std::size_t index = current.index;
            if (min_above && discharged.contains(*min_above)) {
                flag = true;
                index = order.rank(*min_above);
            } else if (!min_above && min_pending && discharged.contains(*min_pending)) {
                flag = true;
                index = order.rank(*min_pending);
            }

            const auto target = intern({std::move(m2), index, flag});
            b.by_event_[id].emplace_back(e, target);
            for (auto& label : labels) {
                b.outgoing_[id].push_back(b.transitions_.size());
                b.transitions_.push_back({id, std::move(label), target});
            }
        }
    }
    return b;
}

buchi_automaton build_buchi(const distributed_graph& d) {
    return build_buchi(d, rank_order::declaration(d.base().size()));
}

std::optional<std::size_t> buchi_walk(const buchi_automaton& b, const finite_run& run) {
    std::size_t s = b.initial();
    for (const auto& letter : run) {
        auto next = b.successor(s, letter);
        if (!next) return std::nullopt;
        s = *next;
    }
    return s;
}

bool buchi_accepts_finite(const buchi_automaton& b, const finite_run& run) {
    auto s = buchi_walk(b, run);
    if (!s) return false;
    // Trailing tau^omega: every tau after the first stays put.
    return b.accepting(b.tau_successor(*s));
}

bool buchi_accepts_lasso(const buchi_automaton& b, const lasso_run& lasso) {
    if (lasso.loop.empty()) throw error(errc::invalid_run, "lasso loop must be nonempty");

    auto read = [&](std::size_t s, const transition_label& letter, std::size_t iteration, std::size_t step) {
        auto next = b.successor(s, letter);
        if (!next) {
            const auto& g = b.source().base();
            const auto name = letter.event < g.size() ? g.name(letter.event) : std::to_string(letter.event);
            throw lasso_error(iteration, step,
                              execution_error(errc::invalid_run, "automaton has no transition for '" + name + "'"));
        }
        return *next;
    };

    std::size_t s = b.initial();
    for (std::size_t i = 0; i < lasso.prefix.size(); ++i) s = read(s, lasso.prefix[i], 0, i);

    // The (marking, index) path is fixed by the letters; tau only rewrites the
    // flag. Record visited states so the periodic part can be isolated.
    std::vector<std::size_t> path{s};
    std::unordered_map<std::size_t, std::size_t> entry_at{{s, 0}};
    for (std::size_t iteration = 1;; ++iteration) {
        for (std::size_t i = 0; i < lasso.loop.size(); ++i) {
            s = read(s, lasso.loop[i], iteration, i);
            path.push_back(s);
        }
        if (!entry_at.emplace(s, path.size() - 1).second) break;
    }

    const auto start = entry_at.at(s);
    for (std::size_t k = start; k < path.size(); ++k) {
        const auto& st = b.states().at(path[k]);
        if (k > start && st.flag) return true;  // reached by a non-tau step
        if (no_included_pending(st.m)) return true;  // a tau here lands in F
    }
    return false;
}

// ---------------------------------------------------------------------------

namespace {

std::string describe(const distributed_graph& d, const finite_run& run) {
    std::string out = "[";
    for (std::size_t i = 0; i < run.size(); ++i) {
        if (i) out += ",";
        if (run[i].as) out += run[i].as->principal + ":";
        out += d.base().name(run[i].event);
    }
    return out + "]";
}

template <typename Visit>
void for_each_run(const distributed_graph& d, const marking& from, std::size_t max_len, finite_run& run,
                  Visit&& visit) {
    visit(run, from);
    if (run.size() == max_len) return;
    const auto& g = d.base();
    enabled_events(g, from).for_each([&](event_index e) {
        const auto next = execute(g, from, e);
        for (auto& label : labels_for(d, e)) {
            run.push_back(std::move(label));
            for_each_run(d, next, max_len, run, visit);
            run.pop_back();
        }
    });
}

}  // namespace

acceptance_report compare_acceptance(const distributed_graph& d, std::size_t run_bound, std::size_t lasso_bound) {
    return compare_acceptance(d, rank_order::declaration(d.base().size()), run_bound, lasso_bound);
}

acceptance_report compare_acceptance(const distributed_graph& d, const rank_order& order, std::size_t run_bound,
                                     std::size_t lasso_bound) {
    const auto& g = d.base();
    const auto b = build_buchi(d, order);
    acceptance_report report;

    // Finite runs of the graph: same runs, same verdicts.
    finite_run run;
    for_each_run(d, g.initial_marking(), run_bound, run, [&](const finite_run& r, const marking&) {
        ++report.runs_checked;
        std::vector<event_index> events;
        for (const auto& l : r) events.push_back(l.event);
        const bool semantic = finite_run_accepting(g, events);
        if (!buchi_walk(b, r)) {
            report.disagreements.push_back("run " + describe(d, r) + " missing from automaton");
            return;
        }
        if (semantic != buchi_accepts_finite(b, r))
            report.disagreements.push_back("finite run " + describe(d, r) + ": semantics says " +
                                           (semantic ? "accepting" : "rejecting"));
    });

    // Finite runs of the automaton must replay in the graph.
    std::function<void(std::size_t, finite_run&)> walk = [&](std::size_t s, finite_run& r) {
        try {
            (void)replay(d, r);
        } catch (const replay_error&) {
            report.disagreements.push_back("automaton run " + describe(d, r) + " does not replay");
            return;
        }
        if (r.size() == run_bound) return;
        for (auto t : b.outgoing(s)) {
            const auto& tr = b.transitions()[t];
            r.push_back(*tr.letter);
            walk(tr.target, r);
            r.pop_back();
        }
    };
    finite_run aut_run;
    walk(b.initial(), aut_run);

    // Lassos: prefix and loop each up to lasso_bound letters, loop nonempty.
    if (lasso_bound > 0) {
        finite_run prefix;
        for_each_run(d, g.initial_marking(), lasso_bound, prefix, [&](const finite_run& p, const marking& entry) {
            finite_run loop;
            for_each_run(d, entry, lasso_bound, loop, [&](const finite_run& l, const marking&) {
                if (l.empty()) return;
                const lasso_run lasso{p, l};
                std::optional<bool> semantic;
                std::optional<bool> automaton;
                try {
                    semantic = lasso_run_accepting(d, lasso);
                } catch (const lasso_error&) {
                }
                try {
                    automaton = buchi_accepts_lasso(b, lasso);
                } catch (const lasso_error&) {
                }
                const auto name = describe(d, p) + describe(d, l) + "^w";
                if (semantic.has_value() != automaton.has_value()) {
                    report.disagreements.push_back("lasso " + name + " is a run of only one side");
                } else if (semantic) {
                    ++report.lassos_checked;
                    if (*semantic != *automaton)
                        report.disagreements.push_back("lasso " + name + ": semantics says " +
                                                       (*semantic ? "accepting" : "rejecting"));
                }
            });
        });
    }
    return report;
}

}  // namespace dcr
