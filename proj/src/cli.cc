#include <treecsp/classify.hh>
#include <treecsp/cli.hh>
#include <treecsp/errors.hh>
#include <treecsp/formats.hh>
#include <treecsp/generate.hh>
#include <treecsp/lemma_suite.hh>

#include <CLI11.hpp>

#include <chrono>
#include <ostream>
#include <sstream>

using namespace treecsp;

using std::string;
using std::uint64_t;
using std::vector;

namespace
{
    struct Budgets
    {
        uint64_t nodes = 20'000'000;
        uint64_t time_ms = 0;
        uint64_t indicator = default_indicator_budget;
        uint64_t arity = default_arity_budget;

        auto search() const -> SearchOptions
        {
            SearchOptions o;
            o.node_budget = nodes;
            o.time_budget = std::chrono::milliseconds(time_ms);
            return o;
        }
    };

    auto add_budget_flags(CLI::App * cmd, Budgets & b) -> void
    {
        cmd->add_option("--budget-nodes", b.nodes, "search node budget per solver call (0 = unlimited)");
        cmd->add_option("--budget-time-ms", b.time_ms, "advisory wall time per solver call (0 = none)");
        cmd->add_option("--budget-indicator", b.indicator, "indicator structure size limit")
            ->check(CLI::PositiveNumber);
    }

    auto extension(const string & path) -> string
    {
        auto dot = path.rfind('.');
        return dot == string::npos ? string() : path.substr(dot + 1);
    }

    auto emit(const string & path, const string & text, std::ostream & out) -> void
    {
        if (path.empty() || path == "-")
            out << text;
        else
            write_file(path, text);
    }

    auto load_graph(const string & path) -> Digraph
    {
        if (extension(path) == "stree")
            return SpecialTree(parse_stree(read_file(path))).digraph();
        return parse_dg(read_file(path));
    }

    auto parse_pin(const string & text) -> std::pair<Vertex, Vertex>
    {
        auto eq = text.find('=');
        if (eq == string::npos)
            throw InvalidPin("pin '" + text + "' is not of the form v=t");
        try {
            size_t used_v = 0, used_t = 0;
            auto v = std::stoul(text.substr(0, eq), &used_v);
            auto t = std::stoul(text.substr(eq + 1), &used_t);
            if (used_v != eq || used_t != text.size() - eq - 1)
                throw InvalidPin("pin '" + text + "' is not of the form v=t");
            return {static_cast<Vertex>(v), static_cast<Vertex>(t)};
        }
        catch (const std::logic_error &) {
            throw InvalidPin("pin '" + text + "' is not of the form v=t");
        }
    }

    auto verdict_exit(Verdict v) -> int
    {
        switch (v) {
            case Verdict::BoundedWidth: return exit_found;
            case Verdict::NpComplete: return exit_none;
            case Verdict::Undetermined: return exit_budget;
        }
        return exit_error;
    }
}

auto treecsp::run_cli(const vector<string> & args, std::ostream & out, std::ostream & err) -> int
{
    CLI::App app{"H-colouring of special oriented trees: solving, polymorphisms, classification"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "worker threads for table checks (0 = hardware)");

    Budgets budgets;

    // build
    auto build = app.add_subcommand("build", "compile a .stree spec to a .dg digraph");
    string build_tree, build_out, build_roles;
    build->add_option("--tree", build_tree, "input .stree")->required();
    build->add_option("--out", build_out, "output .dg (default stdout)");
    build->add_option("--roles", build_roles, "role sidecar output");

    // solve
    auto solve_cmd = app.add_subcommand("solve", "decide a homomorphism x -> h");
    string solve_input, solve_target, solve_method = "bt";
    vector<string> solve_pins;
    solve_cmd->add_option("--input", solve_input, "source .dg or .stree")->required();
    solve_cmd->add_option("--target", solve_target, "target .dg or .stree")->required();
    solve_cmd->add_option("--pin", solve_pins, "v=t, repeatable");
    solve_cmd->add_option("--method", solve_method, "bt, ac or 23")
        ->check(CLI::IsMember({"bt", "ac", "23"}));
    add_budget_flags(solve_cmd, budgets);

    // poly
    auto poly_cmd = app.add_subcommand("poly", "search for a polymorphism of a given kind");
    string poly_target, poly_kind, poly_out;
    unsigned poly_arity = 0;
    poly_cmd->add_option("--target", poly_target, "target .dg or .stree")->required();
    poly_cmd->add_option("--kind", poly_kind, "wnu, siggers, majority or tsi")
        ->required()
        ->check(CLI::IsMember({"wnu", "siggers", "majority", "tsi"}));
    poly_cmd->add_option("--arity", poly_arity, "arity for wnu and tsi (default 3 and 2)");
    poly_cmd->add_option("--out", poly_out, "write the table as .op");
    add_budget_flags(poly_cmd, budgets);

    // classify
    auto classify_cmd = app.add_subcommand("classify", "classify the H-colouring problem of a digraph");
    string classify_tree, classify_input, classify_json;
    bool classify_no_timings = false, classify_skip_width = false;
    auto tree_opt = classify_cmd->add_option("--tree", classify_tree, "input .stree");
    auto input_opt = classify_cmd->add_option("--input", classify_input, "input .dg");
    tree_opt->excludes(input_opt);
    classify_cmd->add_option("--json", classify_json, "write the JSON report here ('-' for stdout)");
    classify_cmd->add_flag("--no-timings", classify_no_timings, "leave timings out of the report");
    classify_cmd->add_flag("--skip-width", classify_skip_width, "skip the bounded-width certificate searches");
    add_budget_flags(classify_cmd, budgets);

    // core
    auto core_cmd = app.add_subcommand("core", "compute the core and a retraction onto it");
    string core_input, core_out;
    core_cmd->add_option("--input", core_input, "input .dg or .stree")->required();
    core_cmd->add_option("--out", core_out, "write the core as .dg");
    add_budget_flags(core_cmd, budgets);

    // verify
    auto verify_cmd = app.add_subcommand("verify", "run instance checks on a special tree");
    string verify_tree, verify_suite = "lemmas";
    uint64_t verify_seed = 1;
    verify_cmd->add_option("--tree", verify_tree, "input .stree")->required();
    verify_cmd->add_option("--suite", verify_suite, "check suite")->check(CLI::IsMember({"lemmas"}));
    verify_cmd->add_option("--seed", verify_seed, "candidate sampling seed");
    verify_cmd->add_option("--budget-nodes", budgets.nodes, "search node budget per solver call");
    verify_cmd->add_option("--budget-arity", budgets.arity, "arity budget for composed operations")
        ->check(CLI::PositiveNumber);

    // gen
    auto gen_cmd = app.add_subcommand("gen", "generate seeded instances");
    string gen_kind = "stree", gen_out;
    uint64_t gen_seed = 1;
    size_t gen_a = 2, gen_b = 2, gen_max_len = 8, gen_n = 5;
    int gen_height = 2;
    double gen_p = 0.3;
    gen_cmd->add_option("--kind", gen_kind, "stree, path, digraph or triad")
        ->check(CLI::IsMember({"stree", "path", "digraph", "triad"}));
    gen_cmd->add_option("--seed", gen_seed, "seed");
    gen_cmd->add_option("--a", gen_a, "|A| for stree");
    gen_cmd->add_option("--b", gen_b, "|B| for stree");
    gen_cmd->add_option("--height", gen_height, "height for stree and path");
    gen_cmd->add_option("--max-len", gen_max_len, "longest path for stree and path");
    gen_cmd->add_option("--n", gen_n, "vertices for digraph");
    gen_cmd->add_option("--p", gen_p, "edge probability for digraph")->check(CLI::Range(0.0, 1.0));
    gen_cmd->add_option("--out", gen_out, "output file (default stdout)");

    // convert
    auto convert_cmd = app.add_subcommand("convert", "convert between .stree, .dg and .op");
    string convert_input, convert_to, convert_out;
    convert_cmd->add_option("--input", convert_input, "input file; format from the extension")->required();
    convert_cmd->add_option("--to", convert_to, "dg, stree or op")->required()
        ->check(CLI::IsMember({"dg", "stree", "op"}));
    convert_cmd->add_option("--out", convert_out, "output file (default stdout)");

    vector<string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    }
    catch (const CLI::ParseError & e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_found : exit_error;
    }

    set_worker_threads(threads);

    try {
        if (*build) {
            SpecialTree tree(parse_stree(read_file(build_tree)));
            emit(build_out, write_dg(tree.digraph()), out);
            if (! build_roles.empty())
                write_file(build_roles, write_roles(tree));
            return exit_found;
        }

        if (*solve_cmd) {
            auto x = load_graph(solve_input);
            auto h = load_graph(solve_target);
            Pins pins;
            for (auto & p : solve_pins)
                pins.push_back(parse_pin(p));
            if (solve_method == "bt") {
                SearchStats stats;
                auto hom = solve_hom(x, h, pins, budgets.search(), &stats);
                if (! hom) {
                    out << "none\n";
                    return exit_none;
                }
                for (Vertex v = 0; v < hom->size(); ++v)
                    out << v << ' ' << (*hom)[v] << '\n';
                return exit_found;
            }
            auto inst = build_instance(x, h, pins);
            bool consistent = solve_method == "ac" ? arc_consistency(inst).has_value()
                                                   : consistency_23(inst).has_value();
            out << (consistent ? "consistent\n" : "empty\n");
            return consistent ? exit_found : exit_none;
        }

        if (*poly_cmd) {
            auto h = load_graph(poly_target);
            PolySearchOptions options;
            options.budget = budgets.indicator;
            options.search = budgets.search();
            std::optional<OperationTable> op;
            if (poly_kind == "wnu")
                op = find_wnu(h, poly_arity ? poly_arity : 3, options);
            else if (poly_kind == "tsi")
                op = find_tsi(h, poly_arity ? poly_arity : 2, options);
            else if (poly_kind == "majority")
                op = find_majority(h, options);
            else
                op = find_siggers(h, options);
            if (! op) {
                out << "none\n";
                return exit_none;
            }
            if (poly_out.empty())
                out << "found " << poly_kind << " of arity " << op->arity() << '\n';
            else
                write_file(poly_out, write_op(*op));
            return exit_found;
        }

        if (*classify_cmd) {
            ClassifyOptions options;
            options.node_budget = budgets.nodes;
            options.indicator_budget = budgets.indicator;
            options.width_certificates = ! classify_skip_width;
            ClassificationReport report;
            if (! classify_tree.empty())
                report = classify_special_tree(parse_stree(read_file(classify_tree)), options);
            else if (! classify_input.empty())
                report = classify_digraph(load_graph(classify_input), options);
            else
                throw InvalidParams("classify needs --tree or --input");
            if (classify_no_timings)
                report.timings_ms.clear();
            if (! classify_json.empty())
                emit(classify_json, report.to_json() + "\n", out);
            if (classify_json != "-") {
                out << "verdict " << to_string(report.verdict) << '\n';
                out << "taylor " << to_string(report.taylor) << '\n';
                for (auto & c : report.width_certificates)
                    out << c.kind << c.arity << ' ' << c.status << '\n';
                for (auto & d : report.diagnostics)
                    err << d << '\n';
            }
            return verdict_exit(report.verdict);
        }

        if (*core_cmd) {
            auto g = load_graph(core_input);
            auto core = compute_core(g, budgets.search());
            if (! core_out.empty())
                write_file(core_out, write_dg(core.core));
            out << "core " << core.core.vertex_count() << " vertices, " << core.core.edge_count() << " edges\n";
            out << "kept";
            for (auto k : core.kept)
                out << ' ' << k;
            out << "\nretraction";
            for (auto r : core.retraction)
                out << ' ' << r;
            out << '\n';
            return exit_found;
        }

        if (*verify_cmd) {
            LemmaSuiteOptions options;
            options.node_budget = budgets.nodes;
            options.arity_budget = budgets.arity;
            auto report = verify_lemma_suite(parse_stree(read_file(verify_tree)), verify_seed, options);
            out << report.to_json() << '\n';
            return report.passed() ? exit_found : exit_none;
        }

        if (*gen_cmd) {
            string text;
            if (gen_kind == "stree")
                text = write_stree(gen_random_special_tree(gen_seed, gen_a, gen_b, gen_height, gen_max_len));
            else if (gen_kind == "triad")
                text = write_stree(canned_triad());
            else if (gen_kind == "path") {
                Rng rng(gen_seed);
                text = random_minimal_path(rng, gen_height, gen_max_len).directions() + "\n";
            }
            else {
                Rng rng(gen_seed);
                text = write_dg(random_digraph(rng, gen_n, gen_p));
            }
            emit(gen_out, text, out);
            return exit_found;
        }

        if (*convert_cmd) {
            auto from = extension(convert_input);
            auto text = read_file(convert_input);
            string result;
            if (convert_to == "op") {
                if (from != "op")
                    throw InvalidParams("only .op converts to op");
                result = write_op(parse_op(text));
            }
            else if (from == "stree") {
                auto spec = parse_stree(text);
                result = convert_to == "dg" ? write_dg(SpecialTree(spec).digraph()) : write_stree(spec);
            }
            else if (from == "dg") {
                auto g = parse_dg(text);
                result = convert_to == "dg" ? write_dg(g) : write_stree(recognize_special_tree(g).spec);
            }
            else
                throw InvalidParams("cannot convert '" + convert_input + "' to " + convert_to);
            emit(convert_out, result, out);
            return exit_found;
        }
    }
    catch (const BudgetExceeded & e) {
        err << "budget exceeded: " << e.what() << '\n';
        return exit_budget;
    }
    catch (const ArityBudgetExceeded & e) {
        err << "budget exceeded: " << e.what() << '\n';
        return exit_budget;
    }
    catch (const Error & e) {
        err << "error: " << e.what() << '\n';
        return exit_error;
    }
    catch (const std::exception & e) {
        err << "error: " << e.what() << '\n';
        return exit_error;
    }
    return exit_error;
}
