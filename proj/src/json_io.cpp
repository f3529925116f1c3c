#include "dcr/json_io.hpp"

#include <fstream>
#include <sstream>

namespace dcr {

using nlohmann::json;

namespace {

[[noreturn]] void shape_error(const std::string& message) { throw parse_error(message, 0, 0); }

std::vector<std::string> string_list(const json& j, const std::string& field) {
    if (!j.is_array()) shape_error("field '" + field + "' must be an array of strings");
    std::vector<std::string> out;
    for (const auto& v : j) {
        if (!v.is_string()) shape_error("field '" + field + "' must be an array of strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

relation_pairs pair_list(const json& root, const char* field) {
    relation_pairs out;
    if (!root.contains(field)) return out;
    const auto& j = root.at(field);
    if (!j.is_array()) shape_error(std::string("field '") + field + "' must be an array of pairs");
    for (const auto& p : j) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
            shape_error(std::string("field '") + field + "' must contain [\"source\",\"target\"] pairs");
        out.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
    }
    return out;
}

std::map<std::string, std::vector<std::string>> role_map(const json& j, const std::string& field) {
    if (!j.is_object()) shape_error("field '" + field + "' must be an object of string arrays");
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& [k, v] : j.items()) out[k] = string_list(v, field + "." + k);
    return out;
}

json pairs_json(const relation_pairs& pairs) {
    json out = json::array();
    for (const auto& [a, b] : pairs) out.push_back({a, b});
    return out;
}

}  // namespace

json parse_json(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // Byte offsets are 1-based in the parser's diagnostics.
        std::size_t line = 1;
        std::size_t column = 1;
        const auto end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw parse_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + e.what(), line,
                          column);
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw io_error("cannot read " + path.string());
    return buf.str();
}

graph_document document_from_json(const json& j) {
    if (!j.is_object()) shape_error("graph document must be a JSON object");
    if (!j.contains("events")) shape_error("missing required field 'events'");

    graph_document doc;
    doc.events = string_list(j.at("events"), "events");
    if (j.contains("labels")) {
        const auto& labels = j.at("labels");
        if (!labels.is_object()) shape_error("field 'labels' must be an object of strings");
        for (const auto& [k, v] : labels.items()) {
            if (!v.is_string()) shape_error("field 'labels' must be an object of strings");
            doc.labels[k] = v.get<std::string>();
        }
    }
    doc.conditions = pair_list(j, "conditions");
    doc.responses = pair_list(j, "responses");
    doc.includes = pair_list(j, "includes");
    doc.excludes = pair_list(j, "excludes");

    if (j.contains("marking")) {
        const auto& m = j.at("marking");
        if (!m.is_object()) shape_error("field 'marking' must be an object");
        marking_document md;
        if (m.contains("executed")) md.executed = string_list(m.at("executed"), "marking.executed");
        if (m.contains("pending")) md.pending = string_list(m.at("pending"), "marking.pending");
        if (m.contains("included")) {
            md.included = string_list(m.at("included"), "marking.included");
        } else {
            md.included = doc.events;
        }
        doc.marking = std::move(md);
    }
    if (j.contains("roles")) doc.roles = string_list(j.at("roles"), "roles");
    if (j.contains("principals")) doc.principals = string_list(j.at("principals"), "principals");
    if (j.contains("assignments")) {
        const auto& a = j.at("assignments");
        if (!a.is_object()) shape_error("field 'assignments' must be an object");
        assignment_document ad;
        if (a.contains("principals")) ad.principals = role_map(a.at("principals"), "assignments.principals");
        if (a.contains("actions")) ad.actions = role_map(a.at("actions"), "assignments.actions");
        doc.assignments = std::move(ad);
    }
    return doc;
}

json to_json(const graph_document& doc) {
    json j;
    j["events"] = doc.events;
    j["labels"] = doc.labels;
    j["conditions"] = pairs_json(doc.conditions);
    j["responses"] = pairs_json(doc.responses);
    j["includes"] = pairs_json(doc.includes);
    j["excludes"] = pairs_json(doc.excludes);
    if (doc.marking)
        j["marking"] = {{"executed", doc.marking->executed},
                        {"pending", doc.marking->pending},
                        {"included", doc.marking->included}};
    if (doc.roles) j["roles"] = *doc.roles;
    if (doc.principals) j["principals"] = *doc.principals;
    if (doc.assignments)
        j["assignments"] = {{"principals", doc.assignments->principals}, {"actions", doc.assignments->actions}};
    return j;
}

graph_document parse_document(std::string_view text) { return document_from_json(parse_json(text)); }

graph_document load_document(const std::filesystem::path& path) { return parse_document(read_file(path)); }

json to_json(const validation_report& report) {
    json findings = json::array();
    for (const auto& f : report.findings)
        findings.push_back({{"severity", f.level == severity::error ? "error" : "warning"},
                            {"code", f.code},
                            {"message", f.message},
                            {"element", f.element}});
    return {{"errors", report.errors()}, {"warnings", report.warnings()}, {"findings", findings}};
}

}  // namespace dcr
