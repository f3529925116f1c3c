#include <doctest.h>

#include "dcr/json_io.hpp"
#include "support/fixtures.hpp"

using namespace dcr;

TEST_CASE("loads the G1 fixture") {
    const auto doc = fixtures::document("g1.json");
    CHECK(doc.events == std::vector<std::string>{"pm", "s", "gm"});
    CHECK(doc.labels.at("gm") == "give medicine");
    CHECK(doc.conditions.size() == 2);
    CHECK(doc.conditions[0] == std::pair<std::string, std::string>{"pm", "s"});
    REQUIRE(doc.assignments);
    CHECK(doc.assignments->principals.at("Ann") == std::vector<std::string>{"Nurse"});
    CHECK(doc.is_distributed());
}

TEST_CASE("optional fields") {
    const auto doc = parse_document(R"({"events":["a"]})");
    CHECK_FALSE(doc.marking);
    CHECK_FALSE(doc.is_distributed());
    CHECK(doc.conditions.empty());

    const auto partial = parse_document(R"({"events":["a","b"],"marking":{"pending":["a"]}})");
    const auto g = graph::from_document(partial);
    CHECK(g.initial_marking() == g.make_marking({}, {"a"}, {"a", "b"}));
}

TEST_CASE("parse errors carry a position") {
    try {
        (void)load_document(fixtures::path("malformed.json"));
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line() == 4);
        CHECK(e.column() >= 1);
    }
}

TEST_CASE("shape errors are structural") {
    CHECK_THROWS_AS((void)parse_document(R"({"events":"a"})"), parse_error);
    CHECK_THROWS_AS((void)parse_document(R"({"events":["a"],"conditions":[["a"]]})"), parse_error);
    CHECK_THROWS_AS((void)parse_document(R"([1,2])"), parse_error);
    try {
        (void)parse_document(R"({"events":[1]})");
    } catch (const parse_error& e) {
        CHECK(e.line() == 0);
    }
}

TEST_CASE("missing file") { CHECK_THROWS_AS((void)load_document("/nonexistent/x.json"), io_error); }

TEST_CASE("json round trip") {
    const auto doc = fixtures::document("g2.json");
    const auto again = document_from_json(to_json(doc));
    CHECK(again.events == doc.events);
    CHECK(again.excludes == doc.excludes);
    CHECK(again.labels == doc.labels);
    CHECK(again.assignments->actions == doc.assignments->actions);
}

TEST_CASE("report json") {
    auto doc = fixtures::document("conflict.json");
    const auto j = to_json(validate_document(doc));
    CHECK(j.at("errors") == 1);
    CHECK(j.at("findings")[0].at("code") == "±-conflict");
}
