#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "dcr/buchi.hpp"
#include "dcr/dot.hpp"
#include "dcr/json_io.hpp"
#include "dcr/lts.hpp"
#include "dcr/semantics.hpp"
#include "dcr/service.hpp"

namespace dcr::cli {

namespace {

constexpr int ok = 0;
constexpr int domain_failure = 1;
constexpr int io_failure = 2;

struct failure {
    int status;
};

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    if (text.empty()) return out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) out.push_back(item);
    return out;
}

void print_findings(const validation_report& report, std::ostream& out) {
    for (const auto& f : report.findings)
        out << (f.level == severity::error ? "error" : "warning") << " " << f.code << ": " << f.message << "\n";
}

graph_document load(const std::string& path, std::ostream& err) {
    try {
        return load_document(path);
    } catch (const io_error& e) {
        err << "error: " << e.what() << "\n";
    } catch (const parse_error& e) {
        err << "error: " << path << ": " << e.what() << "\n";
    }
    throw failure{io_failure};
}

distributed_graph compile(const std::string& path, std::ostream& out, std::ostream& err) {
    auto doc = load(path, err);
    auto report = validate_document(doc);
    if (!report.ok()) {
        print_findings(report, out);
        throw failure{domain_failure};
    }
    if (doc.is_distributed()) return distributed_graph::from_document(doc);
    return distributed_graph::open(graph::from_document(doc));
}

void write_file(const std::string& path, const std::string& content, std::ostream& err) {
    std::ofstream f(path, std::ios::binary);
    if (!(f << content)) {
        err << "error: cannot write " << path << "\n";
        throw failure{io_failure};
    }
}

// "e" or "p:e"; principals are resolved to their least witnessing role.
transition_label parse_step(const distributed_graph& d, const std::string& token) {
    const auto& g = d.base();
    const auto colon = token.find(':');
    const auto name = colon == std::string::npos ? token : token.substr(colon + 1);
    const auto e = g.index_of(name);
    transition_label label = plain_label(g, e);
    if (colon != std::string::npos) {
        const auto principal = token.substr(0, colon);
        if (!d.has_principal(principal))
            throw execution_error(errc::unknown_principal, "unknown principal '" + principal + "'");
        const auto roles = d.witnesses(principal, e);
        label.as = authorization{principal, roles.empty() ? std::string() : roles.front()};
    }
    return label;
}

std::vector<transition_label> parse_steps(const distributed_graph& d, const std::vector<std::string>& tokens,
                                          std::ostream& err, std::size_t offset = 0) {
    std::vector<transition_label> out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        try {
            out.push_back(parse_step(d, tokens[i]));
        } catch (const execution_error& e) {
            err << "error: step " << (offset + i) << ": " << e.what() << "\n";
            throw failure{domain_failure};
        }
    }
    return out;
}

void print_markings(const graph& g, const std::vector<marking>& markings, std::ostream& out, std::size_t first = 0) {
    for (std::size_t i = 0; i < markings.size(); ++i) out << "M" << (first + i) << ": " << g.format(markings[i]) << "\n";
}

int verdict(bool accepting, std::ostream& out) {
    out << (accepting ? "ACCEPTING" : "NOT-ACCEPTING") << "\n";
    return accepting ? ok : domain_failure;
}

// -- subcommands ------------------------------------------------------------

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
    const auto doc = load(path, err);
    const auto report = validate_document(doc);
    print_findings(report, out);
    out << report.errors() << " error(s), " << report.warnings() << " warning(s)\n";
    return report.ok() ? ok : domain_failure;
}

int cmd_enabled(const std::string& path, const std::optional<std::string>& principal, bool verbose, std::ostream& out,
                std::ostream& err) {
    const auto d = compile(path, out, err);
    const auto& g = d.base();
    const auto& m = g.initial_marking();

    if (principal) {
        std::vector<enabled_triple> triples;
        try {
            triples = enabled_for(d, m, *principal);
        } catch (const execution_error& e) {
            err << "error: " << e.what() << "\n";
            return domain_failure;
        }
        for (const auto& t : triples) out << g.name(t.event) << "\t" << t.action << "\t" << t.role << "\n";
        return ok;
    }

    for (event_index e = 0; e < g.size(); ++e) {
        if (is_enabled(g, m, e)) {
            out << g.name(e) << "\t" << g.action(e) << (verbose ? "\tenabled" : "") << "\n";
        } else if (verbose) {
            out << g.name(e) << "\t" << g.action(e) << "\t";
            if (!m.included.contains(e))
                out << "excluded\n";
            else
                out << "blocked by {" << g.format(blocking_conditions(g, m, e)) << "}\n";
        }
    }
    return ok;
}

int cmd_exec(const std::string& path, const std::vector<std::string>& tokens, std::ostream& out, std::ostream& err) {
    const auto d = compile(path, out, err);
    const auto& g = d.base();
    const auto run = parse_steps(d, tokens, err);
    try {
        const auto r = replay(d, run);
        print_markings(g, r.markings, out);
        return verdict(is_accepting_marking(r.markings.back()), out);
    } catch (const replay_error& e) {
        const finite_run done(run.begin(), run.begin() + static_cast<std::ptrdiff_t>(e.step()));
        print_markings(g, replay(d, done).markings, out);
        err << "error: step " << e.step() << ": " << e.cause().what() << "\n";
        return domain_failure;
    }
}

int cmd_check_run(const std::string& path, const std::string& run_text, const std::optional<std::string>& loop_text,
                  std::ostream& out, std::ostream& err) {
    const auto d = compile(path, out, err);
    const auto& g = d.base();
    const auto prefix = parse_steps(d, split(run_text, ','), err);

    if (!loop_text) {
        try {
            const auto r = replay(d, prefix);
            print_markings(g, r.markings, out);
            return verdict(is_accepting_marking(r.markings.back()), out);
        } catch (const replay_error& e) {
            err << "error: step " << e.step() << ": " << e.cause().what() << "\n";
            return domain_failure;
        }
    }

    const auto loop = parse_steps(d, split(*loop_text, ','), err, prefix.size());
    if (loop.empty()) {
        err << "error: --loop needs at least one event\n";
        return io_failure;
    }
    try {
        const bool accepting = lasso_run_accepting(d, lasso_run{prefix, loop});
        auto steps = prefix;
        steps.insert(steps.end(), loop.begin(), loop.end());
        const auto r = replay(d, steps);
        print_markings(g, {r.markings.begin(), r.markings.begin() + static_cast<std::ptrdiff_t>(prefix.size()) + 1}, out);
        out << "loop:\n";
        print_markings(g, {r.markings.begin() + static_cast<std::ptrdiff_t>(prefix.size()) + 1, r.markings.end()}, out,
                       prefix.size() + 1);
        return verdict(accepting, out);
    } catch (const lasso_error& e) {
        if (e.iteration() == 0)
            err << "error: step " << e.step() << ": " << e.cause().what() << "\n";
        else
            err << "error: loop iteration " << e.iteration() << ", step " << e.step() << ": " << e.cause().what() << "\n";
        return domain_failure;
    }
}

int cmd_explore(const std::string& path, std::size_t max_states, const std::optional<std::string>& dot, bool strict,
                std::ostream& out, std::ostream& err) {
    const auto d = compile(path, out, err);
    const auto system = explore_lts(d.base(), max_states);
    out << "states: " << system.states.size() << "\n"
        << "transitions: " << system.transitions.size() << "\n"
        << "accepting: " << system.accepting_count() << "\n"
        << "truncated: " << (system.truncated ? "yes" : "no") << "\n";
    if (dot) write_file(*dot, to_dot(d.base(), system), err);
    return strict && system.truncated ? domain_failure : ok;
}

int cmd_buchi(const std::string& path, const std::optional<std::string>& rank, std::size_t max_states,
              const std::optional<std::string>& dot, bool stratified, std::ostream& out, std::ostream& err) {
    const auto d = compile(path, out, err);
    const auto& g = d.base();
    try {
        const auto order = rank ? rank_order::from_names(g, split(*rank, ',')) : rank_order::declaration(g.size());
        const auto b = build_buchi(d, order, max_states);
        std::size_t tau = 0;
        for (const auto& t : b.transitions()) tau += t.is_tau() ? 1 : 0;
        out << "rank: ";
        for (std::size_t i = 0; i < order.sequence().size(); ++i) out << (i ? "," : "") << g.name(order.sequence()[i]);
        out << "\n"
            << "states: " << b.states().size() << "\n"
            << "transitions: " << b.transitions().size() << " (tau: " << tau << ")\n"
            << "accepting: " << b.accepting_count() << "\n";
        if (dot) write_file(*dot, to_dot(b, stratified), err);
        return ok;
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return domain_failure;
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Execute and verify DCR graphs", "dcr"};
    app.require_subcommand(1);

    std::string file;
    std::optional<std::string> principal;
    bool verbose = false;
    std::vector<std::string> events;
    std::string run_text;
    std::optional<std::string> loop_text;
    std::size_t max_states = default_max_states;
    std::size_t buchi_max_states = default_buchi_state_bound;
    std::optional<std::string> dot;
    bool strict = false;
    std::optional<std::string> rank;
    bool stratified = false;
    int port = 8080;
    std::string host = "0.0.0.0";
    std::optional<std::string> persist_dir;
    long ttl_seconds = 24 * 60 * 60;

    auto* validate = app.add_subcommand("validate", "Check a graph file and list findings");
    validate->add_option("file", file, "Graph file")->required();

    auto* enabled = app.add_subcommand("enabled", "List events enabled in the initial marking");
    enabled->add_option("file", file, "Graph file")->required();
    enabled->add_option("--principal", principal, "Only events this principal may fire");
    enabled->add_flag("--verbose", verbose, "Also list blocked and excluded events");

    auto* exec = app.add_subcommand("exec", "Execute events in order and print each marking");
    exec->add_option("file", file, "Graph file")->required();
    exec->add_option("events", events, "Events, or principal:event");

    auto* check = app.add_subcommand("check-run", "Decide acceptance of a finite or lasso run");
    check->add_option("file", file, "Graph file")->required();
    check->add_option("--run", run_text, "Comma-separated steps (e or principal:e)");
    check->add_option("--loop", loop_text, "Comma-separated loop steps, repeated forever");

    auto* explore = app.add_subcommand("explore", "Explore the reachable transition system");
    explore->add_option("file", file, "Graph file")->required();
    explore->add_option("--max-states", max_states, "State bound")->check(CLI::PositiveNumber);
    explore->add_option("--dot", dot, "Write DOT to this file");
    explore->add_flag("--strict", strict, "Fail when the state bound truncates exploration");

    auto* buchi = app.add_subcommand("buchi", "Build the Buchi automaton with tau-event");
    buchi->add_option("file", file, "Graph file")->required();
    buchi->add_option("--rank", rank, "Comma-separated rank order (default: declaration order)");
    buchi->add_option("--max-states", buchi_max_states, "State bound")->check(CLI::PositiveNumber);
    buchi->add_option("--dot", dot, "Write DOT to this file");
    buchi->add_flag("--stratified", stratified, "Group states by index in the DOT output");

    auto* serve = app.add_subcommand("serve", "Run the simulation service");
    serve->add_option("--port", port, "TCP port")->check(CLI::Range(0, 65535));
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--persist-dir", persist_dir, "Directory for session logs");
    serve->add_option("--session-ttl", ttl_seconds, "Idle seconds before a session is dropped")->check(CLI::PositiveNumber);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return io_failure;
    }

    try {
        if (validate->parsed()) return cmd_validate(file, out, err);
        if (enabled->parsed()) return cmd_enabled(file, principal, verbose, out, err);
        if (exec->parsed()) return cmd_exec(file, events, out, err);
        if (check->parsed()) return cmd_check_run(file, run_text, loop_text, out, err);
        if (explore->parsed()) return cmd_explore(file, max_states, dot, strict, out, err);
        if (buchi->parsed()) return cmd_buchi(file, rank, buchi_max_states, dot, stratified, out, err);
        if (serve->parsed()) {
            service::store_options options;
            if (persist_dir) options.persist_dir = *persist_dir;
            options.ttl = std::chrono::seconds(ttl_seconds);
            service::session_store store(options);
            const auto restored = store.restore();
            out << "serving on " << host << ":" << port << " (" << restored << " session(s) restored)" << std::endl;
            return service::serve(store, host, port) ? ok : io_failure;
        }
    } catch (const failure& f) {
        return f.status;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return io_failure;
    }
    return io_failure;
}

}  // namespace dcr::cli
