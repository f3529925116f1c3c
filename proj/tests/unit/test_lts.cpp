#include <doctest.h>

#include <set>

#include "dcr/lts.hpp"
#include "dcr/semantics.hpp"
#include "oracle/brute_force.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace dcr;

// Frozen from oracle::enumerate_reachable; the engine never produced them.
constexpr oracle::lts_counts g1_counts{8, 21, 2};
constexpr oracle::lts_counts g2_counts{15, 46, 3};

TEST_CASE("oracle snapshot is stable") {
    const auto a = oracle::enumerate_reachable(oracle::prescribe_medicine());
    CHECK(a.states == g1_counts.states);
    CHECK(a.transitions == g1_counts.transitions);
    CHECK(a.accepting == g1_counts.accepting);
    const auto b = oracle::enumerate_reachable(oracle::prescribe_medicine_with_check());
    CHECK(b.states == g2_counts.states);
    CHECK(b.transitions == g2_counts.transitions);
    CHECK(b.accepting == g2_counts.accepting);
}

TEST_CASE("explore_lts matches the snapshot") {
    const auto l1 = explore_lts(fixtures::plain("g1.json"));
    CHECK(l1.states.size() == g1_counts.states);
    CHECK(l1.transitions.size() == g1_counts.transitions);
    CHECK(l1.accepting_count() == g1_counts.accepting);
    CHECK_FALSE(l1.truncated);
    const auto l2 = explore_lts(fixtures::plain("g2.json"));
    CHECK(l2.states.size() == g2_counts.states);
    CHECK(l2.transitions.size() == g2_counts.transitions);
    CHECK(l2.accepting_count() == g2_counts.accepting);
}

TEST_CASE("G1 initial state has one way out") {
    const auto g = fixtures::plain("g1.json");
    const auto l = explore_lts(g);
    std::size_t out = 0;
    for (const auto& t : l.transitions)
        if (t.source == l.initial()) {
            ++out;
            CHECK(t.event == g.index_of("pm"));
        }
    CHECK(out == 1);
    for (std::size_t s = 0; s < l.states.size(); ++s) CHECK(l.accepting[s] == is_accepting_marking(l.states[s]));
}

TEST_CASE("empty graph") {
    const auto l = explore_lts(fixtures::plain("empty.json"));
    CHECK(l.states.size() == 1);
    CHECK(l.transitions.empty());
    CHECK(l.accepting_count() == 1);
}

TEST_CASE("truncation") {
    const auto g = fixtures::plain("g2.json");
    const auto l = explore_lts(g, 4);
    CHECK(l.truncated);
    CHECK(l.states.size() == 4);
    for (const auto& t : l.transitions) CHECK(t.target < 4);
    CHECK_THROWS((void)explore_lts(g, 0));
}

TEST_CASE("LTS agrees with the engine and the oracle on random graphs") {
    gen::rng r(23);
    for (int round = 0; round < 60; ++round) {
        const auto doc = gen::random_graph(r, {3, 0.3, true, false});
        const auto g = graph::from_document(doc);
        const auto l = explore_lts(g);
        for (const auto& t : l.transitions) CHECK(execute(g, l.states[t.source], t.event) == l.states[t.target]);
        std::set<marking> distinct(l.states.begin(), l.states.end());
        CHECK(distinct.size() == l.states.size());

        oracle::plain_graph og;
        og.events = doc.events;
        og.conditions = doc.conditions;
        og.responses = doc.responses;
        og.includes = doc.includes;
        og.excludes = doc.excludes;
        og.executed = {doc.marking->executed.begin(), doc.marking->executed.end()};
        og.pending = {doc.marking->pending.begin(), doc.marking->pending.end()};
        og.included = {doc.marking->included.begin(), doc.marking->included.end()};
        const auto counts = oracle::enumerate_reachable(og);
        CHECK(l.states.size() == counts.states);
        CHECK(l.transitions.size() == counts.transitions);
        CHECK(l.accepting_count() == counts.accepting);
    }
}

TEST_CASE("deterministic ordering") {
    const auto g = fixtures::plain("g2.json");
    const auto a = explore_lts(g), b = explore_lts(g);
    CHECK(a.states == b.states);
    CHECK(a.transitions == b.transitions);
}
