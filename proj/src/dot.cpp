#include "dcr/dot.hpp"

#include <map>
#include <sstream>

namespace dcr {

namespace {

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string triple(const graph& g, const marking& m) {
    return "{" + g.format(m.executed) + "}/{" + g.format(m.pending) + "}/{" + g.format(m.included) + "}";
}

}  // namespace

std::string to_dot(const graph& g, const lts& system) {
    std::ostringstream out;
    out << "digraph lts {\n  node [shape=ellipse];\n";
    for (std::size_t s = 0; s < system.states.size(); ++s) {
        out << "  s" << s << " [label=" << quoted(triple(g, system.states[s]));
        if (s == system.initial()) out << ", shape=doublecircle";
        if (system.accepting[s]) out << ", style=filled, fillcolor=green";
        out << "];\n";
    }
    for (const auto& t : system.transitions)
        out << "  s" << t.source << " -> s" << t.target << " [label=" << quoted(g.action(t.event)) << "];\n";
    out << "}\n";
    return out.str();
}

std::string to_dot(const buchi_automaton& b, bool stratified) {
    const auto& g = b.source().base();
    std::ostringstream out;
    out << "digraph buchi {\n  node [shape=circle];\n  start [shape=point];\n";

    auto node = [&](std::size_t s) {
        const auto& st = b.states()[s];
        std::ostringstream n;
        n << "q" << s << " [label=" << quoted(triple(g, st.m) + " | i=" + std::to_string(st.index));
        if (st.flag) n << ", shape=doublecircle";
        n << "];";
        return n.str();
    };

    if (stratified) {
        std::map<std::size_t, std::vector<std::size_t>> by_index;
        for (std::size_t s = 0; s < b.states().size(); ++s) by_index[b.states()[s].index].push_back(s);
        for (const auto& [index, members] : by_index) {
            out << "  subgraph cluster_i" << index << " {\n    label=" << quoted("i=" + std::to_string(index)) << ";\n";
            for (auto s : members) out << "    " << node(s) << "\n";
            out << "  }\n";
        }
    } else {
        for (std::size_t s = 0; s < b.states().size(); ++s) out << "  " << node(s) << "\n";
    }

    out << "  start -> q" << b.initial() << ";\n";
    for (const auto& t : b.transitions()) {
        out << "  q" << t.source << " -> q" << t.target;
        if (t.is_tau()) {
            out << " [label=\"tau\", style=dashed];\n";
        } else {
            const auto& l = *t.letter;
            std::string text = g.name(l.event) + " (" + (l.as ? l.as->principal : std::string("-")) + ", " + l.action +
                               ", " + (l.as ? l.as->role : std::string("-")) + ")";
            out << " [label=" << quoted(text) << "];\n";
        }
    }
    out << "}\n";
    return out.str();
}

}  // namespace dcr
