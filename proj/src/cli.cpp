#include "mill/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mill/frontend.hpp"
#include "mill/render.hpp"

namespace mill::cli {

namespace {

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

int run(const CliOptions& options, std::ostream& out, std::ostream& err) {
    try {
        options.engine.validate();
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    if (options.query && options.query_path) {
        err << "error: give either --query or --query-file, not both\n";
        return exit_usage;
    }
    if (options.engine.mode == Mode::goal && !options.query && !options.query_path) {
        err << "error: goal mode needs --query or --query-file\n";
        return exit_usage;
    }

    const auto kb_text = read_file(options.kb_path);
    if (!kb_text) {
        err << "error: cannot read knowledge base '" << options.kb_path << "': file not found or unreadable\n";
        return exit_usage;
    }
    KnowledgeBase kb;
    try {
        kb = parse_kb(*kb_text);
    } catch (const Error& e) {
        err << options.kb_path << ":" << e.what() << "\n";
        return exit_usage;
    }

    std::string query_text = "causation(X, Y)";
    std::string query_origin = "--query";
    if (options.query) {
        query_text = *options.query;
    } else if (options.query_path) {
        auto text = read_file(*options.query_path);
        if (!text) {
            err << "error: cannot read query file '" << *options.query_path << "'\n";
            return exit_usage;
        }
        query_text = *text;
        query_origin = *options.query_path;
    }
    Query query;
    try {
        query = parse_query(query_text);
    } catch (const Error& e) {
        err << query_origin << ":" << e.what() << "\n";
        return exit_usage;
    }

    const SolutionSet solutions = solve(kb, query, options.engine);
    if (options.format == Format::structured) {
        out << render_structured(solutions, kb, options.engine, options.trace);
    } else {
        out << render_text(solutions, options.trace);
    }
    return solutions.bindings.empty() ? exit_nothing_found : exit_found;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Eliminative induction of causal correspondences with Mill's methods"};
    CliOptions options;
    std::string mode = "goal";
    std::string em = "strict-nonresidue";
    std::string method_order = "MA,MD,MCV,MR";
    std::string format = "text";
    bool no_trace = false;
    std::string query;
    std::string query_path;

    app.add_option("--kb", options.kb_path, "Knowledge-base file")->required();
    auto* q = app.add_option("--query", query, "Query, e.g. \"causation(c:X, c:Y)\"");
    auto* qf = app.add_option("--query-file", query_path, "File containing the query");
    q->excludes(qf);
    app.add_option("--mode", mode, "goal or saturate")->check(CLI::IsMember({"goal", "saturate"}));
    app.add_option("--em", em, "Elimination policy")
        ->check(CLI::IsMember({"strict-all", "strict-nonresidue", "conflict-only"}));
    app.add_option("--method-order", method_order, "Comma-separated permutation of MA,MD,MCV,MR");
    app.add_option("--max-depth", options.engine.max_depth, "Residue recursion bound");
    app.add_option("--format", format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
    app.add_flag("--no-trace", no_trace, "Omit explanation traces");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : exit_usage;
    }

    options.engine.mode = *parse_mode(mode);
    options.engine.em_policy = *parse_em_policy(em);
    try {
        options.engine.method_order = parse_method_order(method_order);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    if (q->count() > 0) options.query = query;
    if (qf->count() > 0) options.query_path = query_path;
    options.format = format == "structured" ? Format::structured : Format::text;
    options.trace = !no_trace;
    return run(options, out, err);
}

}  // namespace mill::cli
