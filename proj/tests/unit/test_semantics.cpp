#include <doctest.h>

#include <set>

#include "dcr/semantics.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace dcr;

namespace {

graph self_response() {
    graph_document doc;
    doc.events = {"a"};
    doc.responses = {{"a", "a"}};
    return graph::from_document(doc);
}

}  // namespace

TEST_CASE("enabled_events examples") {
    const auto g = fixtures::plain("g1.json");
    CHECK(enabled_events(g, g.initial_marking()) == g.make_set({"pm"}));
    CHECK(enabled_events(g, g.make_marking({}, {}, {})).empty());
    CHECK(enabled_events(g, g.make_marking({"pm", "s"}, {"gm"}, {"pm", "s", "gm"})) == g.all_events());
}

TEST_CASE("execute examples") {
    const auto g = fixtures::plain("g1.json");
    SUBCASE("pm from initial") {
        CHECK(execute(g, g.initial_marking(), "pm") == g.make_marking({"pm"}, {"s", "gm"}, {"pm", "s", "gm"}));
    }
    SUBCASE("gm from initial is blocked by s") {
        try {
            (void)execute(g, g.initial_marking(), "gm");
            FAIL("expected conditions_unmet");
        } catch (const execution_error& e) {
            CHECK(e.code() == errc::conditions_unmet);
            CHECK(e.blocking() == std::vector<std::string>{"s"});
        }
    }
    SUBCASE("self response stays pending") {
        const auto a = self_response();
        CHECK(execute(a, a.initial_marking(), "a") == a.make_marking({"a"}, {"a"}, {"a"}));
    }
    SUBCASE("dt on G2") {
        const auto g2 = fixtures::plain("g2.json");
        const auto m = g2.make_marking({"pm", "s"}, {"gm"}, {"pm", "s", "gm", "dt"});
        CHECK(execute(g2, m, "dt") == g2.make_marking({"pm", "s", "dt"}, {"gm", "s"}, {"pm", "s", "dt"}));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS((void)execute(g, g.initial_marking(), "zz"), execution_error);
        try {
            (void)execute(g, g.make_marking({}, {}, {"s"}), "pm");
            FAIL("expected not_included");
        } catch (const execution_error& e) {
            CHECK(e.code() == errc::not_included);
        }
        try {
            (void)execute(g, g.initial_marking(), "zz");
        } catch (const execution_error& e) {
            CHECK(e.code() == errc::unknown_event);
        }
    }
}

TEST_CASE("blocking set lists every unmet condition") {
    graph_document doc;
    doc.events = {"a", "b", "c"};
    doc.conditions = {{"a", "c"}, {"b", "c"}};
    const auto g = graph::from_document(doc);
    try {
        (void)execute(g, g.initial_marking(), "c");
        FAIL("expected conditions_unmet");
    } catch (const execution_error& e) {
        CHECK(e.blocking() == std::vector<std::string>{"a", "b"});
    }
    CHECK(blocking_conditions(g, g.initial_marking(), 2) == g.make_set({"a", "b"}));
}

TEST_CASE("execute_as examples") {
    const auto d = fixtures::d1();
    const auto& g = d.base();
    const auto pm = g.index_of("pm"), s = g.index_of("s"), gm = g.index_of("gm");

    const auto step = execute_as(d, g.initial_marking(), "Peter", pm);
    REQUIRE(step.label.as);
    CHECK(step.label.as->role == "Doctor");
    CHECK(step.label.action == "prescribe medicine");

    const auto after_s = execute(g, step.target, s);
    const auto given = execute_as(d, after_s, "Ann", gm);
    CHECK(given.label.as->role == "Nurse");

    try {
        (void)execute_as(d, step.target, "Ann", s);
        FAIL("expected unauthorized");
    } catch (const execution_error& e) {
        CHECK(e.code() == errc::unauthorized);
    }
    try {
        (void)execute_as(d, g.initial_marking(), "Nobody", pm);
        FAIL("expected unknown_principal");
    } catch (const execution_error& e) {
        CHECK(e.code() == errc::unknown_principal);
    }
}

TEST_CASE("execute_as picks the least witnessing role") {
    auto doc = fixtures::document("g1.json");
    doc.roles->push_back("Admin");
    doc.assignments->principals["Peter"].push_back("Admin");
    doc.assignments->actions["prescribe medicine"].push_back("Admin");
    const auto d = distributed_graph::from_document(doc);
    const auto step = execute_as(d, d.base().initial_marking(), "Peter", 0);
    CHECK(step.label.as->role == "Admin");
}

TEST_CASE("enabled_for examples") {
    const auto d = fixtures::d1();
    const auto& g = d.base();
    CHECK(enabled_for(d, g.initial_marking(), "Peter") ==
          std::vector<enabled_triple>{{g.index_of("pm"), "prescribe medicine", "Doctor"}});
    CHECK(enabled_for(d, g.initial_marking(), "Ann").empty());
    const auto m = g.make_marking({"pm", "s"}, {"gm"}, {"pm", "s", "gm"});
    CHECK(enabled_for(d, m, "Ann") == std::vector<enabled_triple>{{g.index_of("gm"), "give medicine", "Nurse"}});
    CHECK_THROWS_AS((void)enabled_for(d, m, "Bob"), execution_error);
}

TEST_CASE("enabled_for agrees with brute force over all triples") {
    gen::rng r(3);
    for (int round = 0; round < 100; ++round) {
        const auto d = distributed_graph::from_document(gen::random_graph(r, {4, 0.25, true, true}));
        const auto& g = d.base();
        for (const auto& p : d.principals()) {
            std::set<std::tuple<event_index, std::string, std::string>> expect;
            for (event_index e = 0; e < g.size(); ++e)
                for (const auto& role : d.roles())
                    if (is_enabled(g, g.initial_marking(), e) && d.principal_has(p, role) &&
                        d.action_has(g.action(e), role))
                        expect.emplace(e, g.action(e), role);
            std::set<std::tuple<event_index, std::string, std::string>> got;
            for (const auto& t : enabled_for(d, g.initial_marking(), p)) got.emplace(t.event, t.action, t.role);
            CHECK(got == expect);
        }
    }
}

TEST_CASE("is_accepting_marking examples") {
    const auto g = fixtures::plain("g1.json");
    CHECK(is_accepting_marking(g.initial_marking()));
    CHECK_FALSE(is_accepting_marking(g.make_marking({"pm"}, {"s", "gm"}, {"pm", "s", "gm"})));
    const auto g2 = fixtures::plain("g2.json");
    CHECK_FALSE(is_accepting_marking(g2.make_marking({"pm", "s", "dt"}, {"gm", "s"}, {"pm", "s", "dt"})));
    CHECK(is_accepting_marking(g2.make_marking({}, {"gm"}, {"pm"})));
}

TEST_CASE("replay examples") {
    const auto g = fixtures::plain("g1.json");
    SUBCASE("G1 full run") {
        const auto r = replay(g, std::vector<std::string>{"pm", "s", "gm"});
        REQUIRE(r.markings.size() == 4);
        CHECK(r.markings.back() == g.make_marking({"pm", "s", "gm"}, {}, {"pm", "s", "gm"}));
        CHECK(r.run.size() == 3);
        CHECK(r.run[1].action == "sign");
    }
    SUBCASE("G2 narrative") {
        const auto g2 = fixtures::plain("g2.json");
        const auto r = replay(g2, std::vector<std::string>{"pm", "s", "dt", "s", "gm"});
        REQUIRE(r.markings.size() == 6);
        const auto& m = r.markings;
        const auto gm = g2.index_of("gm"), s = g2.index_of("s"), dt = g2.index_of("dt");
        CHECK_FALSE(m[3].included.contains(gm));
        CHECK(m[3].pending.contains(s));
        CHECK(m[4].included.contains(gm));
        CHECK_FALSE(m[5].included.contains(dt));
        CHECK(m[5].pending.empty());
    }
    SUBCASE("failing first step") {
        try {
            (void)replay(g, std::vector<std::string>{"s"});
            FAIL("expected replay_error");
        } catch (const replay_error& e) {
            CHECK(e.step() == 0);
            CHECK(e.cause().code() == errc::conditions_unmet);
            CHECK(e.cause().blocking() == std::vector<std::string>{"pm"});
        }
    }
}

TEST_CASE("distributed replay checks authorization") {
    const auto d = fixtures::d1();
    const auto& g = d.base();
    finite_run run{{g.index_of("pm"), "prescribe medicine", authorization{"Peter", "Doctor"}},
                   {g.index_of("s"), "sign", authorization{"Peter", "Doctor"}}};
    CHECK(replay(d, run).markings.size() == 3);
    run[1].as = authorization{"Ann", "Doctor"};
    try {
        (void)replay(d, run);
        FAIL("expected replay_error");
    } catch (const replay_error& e) {
        CHECK(e.step() == 1);
        CHECK(e.cause().code() == errc::unauthorized);
    }
}

TEST_CASE("finite_run_accepting examples") {
    const auto g = fixtures::plain("g1.json");
    const auto idx = [&](std::initializer_list<std::string_view> names) {
        std::vector<event_index> out;
        for (auto n : names) out.push_back(g.index_of(n));
        return out;
    };
    CHECK(finite_run_accepting(g, {}));
    CHECK_FALSE(finite_run_accepting(g, idx({"pm"})));
    CHECK(finite_run_accepting(g, idx({"pm", "s", "gm"})));
}

TEST_CASE("lasso_run_accepting examples") {
    const auto g = fixtures::plain("g1.json");
    const auto pm = g.index_of("pm"), s = g.index_of("s"), gm = g.index_of("gm");
    CHECK(lasso_run_accepting(g, event_lasso{{pm, s}, {gm}}));
    CHECK_FALSE(lasso_run_accepting(g, event_lasso{{pm, s}, {pm}}));
    const auto a = self_response();
    CHECK(lasso_run_accepting(a, event_lasso{{}, {0}}));
}

TEST_CASE("lasso_run_accepting more cases") {
    const auto g = fixtures::plain("g1.json");
    const auto pm = g.index_of("pm"), s = g.index_of("s"), gm = g.index_of("gm");
    // every round re-prescribes and discharges both obligations
    CHECK(lasso_run_accepting(g, event_lasso{{}, {pm, s, gm}}));
    // gm is owed forever once the loop stops giving it
    CHECK_FALSE(lasso_run_accepting(g, event_lasso{{pm}, {s}}));
    // a loop that cannot repeat
    graph_document doc;
    doc.events = {"a"};
    doc.excludes = {{"a", "a"}};
    const auto once = graph::from_document(doc);
    try {
        (void)lasso_run_accepting(once, event_lasso{{}, {0}});
        FAIL("expected lasso_error");
    } catch (const lasso_error& e) {
        CHECK(e.iteration() == 2);
        CHECK(e.step() == 0);
        CHECK(e.cause().code() == errc::not_included);
    }
    try {
        (void)lasso_run_accepting(g, event_lasso{{gm}, {pm}});
        FAIL("expected lasso_error");
    } catch (const lasso_error& e) {
        CHECK(e.iteration() == 0);
    }
}

TEST_CASE("pending obligations excluded for good are released") {
    graph_document doc;
    doc.events = {"a", "b", "c"};
    doc.responses = {{"a", "b"}};
    doc.excludes = {{"c", "b"}};
    const auto g = graph::from_document(doc);
    CHECK(lasso_run_accepting(g, event_lasso{{0, 2}, {0}}));
    CHECK_FALSE(lasso_run_accepting(g, event_lasso{{}, {0}}));
    CHECK(lasso_run_accepting(g, event_lasso{{}, {0, 1}}));
}

TEST_CASE("random walks: invariants") {
    gen::rng r(17);
    for (int round = 0; round < 300; ++round) {
        const auto g = graph::from_document(gen::random_graph(r, {5, 0.25, true, false}));
        auto m = g.initial_marking();
        for (int step = 0; step < 12; ++step) {
            const auto en = enabled_events(g, m);
            CHECK(en.subset_of(m.included));
            // excluded-condition release and the enabled formula, event by event
            for (event_index e = 0; e < g.size(); ++e) {
                const bool expect = m.included.contains(e) && ((g.conditions_of(e) & m.included) - m.executed).empty();
                CHECK(en.contains(e) == expect);
            }
            const auto members = en.members();
            if (members.empty()) break;
            const auto e = members[r() % members.size()];
            const auto next = execute(g, m, e);
            CHECK(next == execute(g, m, e));
            CHECK(m.executed.subset_of(next.executed));
            CHECK(next.executed == (m.executed | event_set(g.size(), {e})));
            CHECK(next.included == ((m.included | g.includes_of(e)) - g.excludes_of(e)));
            auto pending = m.pending;
            pending.erase(e);
            CHECK(next.pending == (pending | g.responses_of(e)));
            m = next;
        }
    }
}
