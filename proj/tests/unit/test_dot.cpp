#include <doctest.h>

#include "dcr/dot.hpp"
#include "support/dot_parser.hpp"
#include "support/fixtures.hpp"

using namespace dcr;

TEST_CASE("the test parser rejects garbage") {
    CHECK_THROWS(dot::parse("digraph { a -> }"));
    CHECK_THROWS(dot::parse("digraph { a [label=\"x] }"));
    CHECK_THROWS(dot::parse("graph { a -> b }"));
    CHECK(dot::parse("digraph g { a -> b -> c [label=x]; }").edges.size() == 2);
}

TEST_CASE("LTS export") {
    const auto g = fixtures::plain("g1.json");
    const auto l = explore_lts(g);
    const auto p = dot::parse(to_dot(g, l));
    CHECK(p.directed);
    CHECK(p.nodes.size() == l.states.size());
    CHECK(p.edges.size() == l.transitions.size());
    const auto& init = p.nodes.at("s0");
    CHECK(init.at("shape") == "doublecircle");
    CHECK(init.at("label") == "{}/{}/{gm,pm,s}");
    std::size_t green = 0;
    for (const auto& [name, attrs] : p.nodes)
        if (attrs.count("fillcolor") && attrs.at("fillcolor") == "green") ++green;
    CHECK(green == l.accepting_count());
    bool prescribe = false;
    for (const auto& e : p.edges) prescribe = prescribe || e.attrs.at("label") == "prescribe medicine";
    CHECK(prescribe);
}

TEST_CASE("automaton export") {
    const auto d = fixtures::d2();
    const auto b = build_buchi(d);
    for (bool stratified : {false, true}) {
        const auto p = dot::parse(to_dot(b, stratified));
        CHECK(p.nodes.size() == b.states().size() + 1);  // plus the start point
        CHECK(p.edges.size() == b.transitions().size() + 1);
        std::size_t doubled = 0;
        for (const auto& [name, attrs] : p.nodes)
            if (attrs.count("shape") && attrs.at("shape") == "doublecircle") ++doubled;
        CHECK(doubled == b.accepting_count());
        std::size_t dashed = 0;
        for (const auto& e : p.edges)
            if (e.attrs.count("style") && e.attrs.at("style") == "dashed") {
                ++dashed;
                CHECK(e.attrs.at("label") == "tau");
            }
        CHECK(dashed == b.states().size());
        if (stratified)
            CHECK(p.subgraphs.size() >= 2);
        else
            CHECK(p.subgraphs.empty());
        CHECK(p.nodes.at("q0").at("label").find("| i=1") != std::string::npos);
    }
}

TEST_CASE("export is deterministic") {
    const auto g = fixtures::plain("g2.json");
    CHECK(to_dot(g, explore_lts(g)) == to_dot(g, explore_lts(g)));
}
