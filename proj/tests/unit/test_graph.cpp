#include <doctest.h>

#include <random>

#include "dcr/graph.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace dcr;

namespace {

graph_document two_events() {
    graph_document doc;
    doc.events = {"a", "b"};
    doc.conditions = {{"a", "b"}};
    return doc;
}

}  // namespace

TEST_CASE("validate_graph examples") {
    SUBCASE("G1 has no errors") {
        const auto report = validate_graph(fixtures::document("g1.json"));
        CHECK(report.errors() == 0);
    }
    SUBCASE("include/exclude clash") {
        auto doc = two_events();
        doc.includes = {{"a", "b"}};
        doc.excludes = {{"a", "b"}};
        const auto report = validate_graph(doc);
        CHECK(report.errors() == 1);
        CHECK(report.count("±-conflict") == 1);
    }
    SUBCASE("undeclared condition endpoint") {
        auto doc = two_events();
        doc.conditions.emplace_back("x", "a");
        const auto report = validate_graph(doc);
        CHECK(report.errors() == 1);
        CHECK(report.count("unknown-event") == 1);
    }
}

TEST_CASE("validate_graph detail") {
    auto doc = two_events();
    doc.events.push_back("a");
    CHECK(validate_graph(doc).count("duplicate-event") == 1);

    doc = two_events();
    doc.events.push_back("bad id");
    CHECK(validate_graph(doc).count("invalid-identifier") == 1);

    doc = two_events();
    doc.events.push_back("lonely");
    auto report = validate_graph(doc);
    CHECK(report.ok());
    CHECK(report.count("isolated-event") == 1);

    doc = two_events();
    doc.marking = marking_document{{"a"}, {"zz"}, {"a", "b"}};
    CHECK(validate_graph(doc).count("unknown-event") == 1);

    doc = two_events();
    doc.labels["q"] = "label of nothing";
    CHECK(validate_graph(doc).count("unknown-event") == 1);

    // self pairs are fine in conditions, responses and excludes
    doc = two_events();
    doc.conditions.emplace_back("a", "a");
    doc.responses.emplace_back("a", "a");
    doc.excludes.emplace_back("b", "b");
    CHECK(validate_graph(doc).ok());
}

TEST_CASE("validate_distributed examples") {
    SUBCASE("D1") { CHECK(validate_document(fixtures::document("g1.json")).errors() == 0); }
    SUBCASE("undeclared role") {
        auto doc = fixtures::document("g1.json");
        doc.assignments->principals["Peter"].push_back("Surgeon");
        const auto report = validate_distributed(doc);
        CHECK(report.errors() == 1);
        CHECK(report.count("unknown-role") == 1);
    }
    SUBCASE("no principals") {
        auto doc = fixtures::document("g1.json");
        doc.principals = std::vector<std::string>{};
        doc.assignments->principals.clear();
        const auto report = validate_distributed(doc);
        CHECK(report.errors() == 0);
        CHECK(report.warnings() == 1);
        CHECK(report.count("no-executors") == 1);
    }
    SUBCASE("undeclared principal") {
        auto doc = fixtures::document("g1.json");
        doc.assignments->principals["Mallory"] = {"Doctor"};
        CHECK(validate_distributed(doc).count("unknown-principal") == 1);
    }
    SUBCASE("unassigned action warns") {
        auto doc = fixtures::document("g1.json");
        doc.assignments->actions.erase("sign");
        const auto report = validate_document(doc);
        CHECK(report.ok());
        CHECK(report.count("unassigned-action") == 1);
    }
}

TEST_CASE("validation is pure") {
    const auto doc = fixtures::document("g2.json");
    const auto a = validate_document(doc);
    const auto b = validate_document(doc);
    REQUIRE(a.findings.size() == b.findings.size());
    for (std::size_t i = 0; i < a.findings.size(); ++i) {
        CHECK(a.findings[i].code == b.findings[i].code);
        CHECK(a.findings[i].message == b.findings[i].message);
    }
}

TEST_CASE("every violation class is caught after a random mutation") {
    gen::rng r(11);
    for (int round = 0; round < 300; ++round) {
        auto doc = gen::random_graph(r, {4, 0.3, true, false});
        REQUIRE(validate_graph(doc).ok());
        const auto& ev = doc.events;
        const auto pick = [&] { return ev[r() % ev.size()]; };
        std::string expected;
        switch (r() % 5) {
            case 0: {
                relation_pairs* rels[] = {&doc.conditions, &doc.responses, &doc.includes, &doc.excludes};
                auto& rel = *rels[r() % 4];
                if (r() % 2)
                    rel.emplace_back("ghost", pick());
                else
                    rel.emplace_back(pick(), "ghost");
                expected = "unknown-event";
                break;
            }
            case 1: {
                const auto a = pick(), b = pick();
                doc.includes.emplace_back(a, b);
                doc.excludes.emplace_back(a, b);
                expected = "±-conflict";
                break;
            }
            case 2:
                doc.events.push_back(pick());
                expected = "duplicate-event";
                break;
            case 3:
                doc.marking->pending.push_back("ghost");
                expected = "unknown-event";
                break;
            default:
                doc.events.push_back("no good");
                expected = "invalid-identifier";
                break;
        }
        const auto report = validate_graph(doc);
        CHECK_FALSE(report.ok());
        CHECK(report.count(expected) >= 1);
        CHECK_THROWS_AS((void)graph::from_document(doc), invalid_graph);
    }
}

TEST_CASE("compiled graph") {
    const auto g = fixtures::plain("g1.json");
    CHECK(g.size() == 3);
    CHECK(g.name(0) == "pm");
    CHECK(g.action(2) == "give medicine");
    CHECK(g.index_of("gm") == 2);
    CHECK_FALSE(g.find("zz"));
    CHECK_THROWS_AS((void)g.index_of("zz"), execution_error);
    CHECK(g.conditions_of(g.index_of("gm")) == g.make_set({"s"}));
    CHECK(g.responses_of(g.index_of("pm")) == g.make_set({"s", "gm"}));
    CHECK(g.initial_marking() == g.make_marking({}, {}, {"pm", "s", "gm"}));
    CHECK(g.format(g.make_set({"s", "gm", "pm"})) == "gm,pm,s");
    CHECK(g.format(g.initial_marking()) == "Ex={} Re={} In={gm,pm,s}");
}

TEST_CASE("defaults: marking and actions") {
    graph_document doc;
    doc.events = {"x", "y"};
    const auto g = graph::from_document(doc);
    CHECK(g.initial_marking().included == g.all_events());
    CHECK(g.initial_marking().executed.empty());
    CHECK(g.action(1) == "y");
}

TEST_CASE("marking sets stay inside the event set") {
    gen::rng r(5);
    for (int i = 0; i < 100; ++i) {
        const auto g = graph::from_document(gen::random_graph(r, {5, 0.2, true, false}));
        const auto all = g.all_events();
        CHECK(g.initial_marking().executed.subset_of(all));
        CHECK(g.initial_marking().pending.subset_of(all));
        CHECK(g.initial_marking().included.subset_of(all));
    }
}

TEST_CASE("document round trip") {
    const auto d = fixtures::d2();
    const auto again = distributed_graph::from_document(d.to_document());
    CHECK(again.base().initial_marking() == d.base().initial_marking());
    CHECK(again.base().to_document().conditions == d.base().to_document().conditions);
    CHECK(again.roles() == d.roles());
}

TEST_CASE("distributed graph queries") {
    const auto d = fixtures::d1();
    const auto& g = d.base();
    CHECK(d.has_principal("Peter"));
    CHECK_FALSE(d.has_principal("Bob"));
    CHECK(d.principal_has("Ann", "Nurse"));
    CHECK(d.action_has("sign", "Doctor"));
    CHECK(d.witnesses("Peter", g.index_of("pm")) == std::vector<std::string>{"Doctor"});
    CHECK(d.witnesses("Ann", g.index_of("pm")).empty());
    CHECK(d.roles_for(g.index_of("gm")) == std::vector<std::string>{"Nurse"});

    const auto open = distributed_graph::open(g);
    CHECK(open.witnesses("_", 0) == std::vector<std::string>{"_"});
}
