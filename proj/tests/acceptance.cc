// Acceptance gate: one PASS/FAIL line per criterion. Exit status 0 iff all
// gating criteria pass. --extended also runs the long triad refutation.

#include "oracle.hh"

#include <treecsp/classify.hh>
#include <treecsp/errors.hh>
#include <treecsp/generate.hh>
#include <treecsp/homsolver.hh>
#include <treecsp/lemma_suite.hh>
#include <treecsp/minpath.hh>
#include <treecsp/polysearch.hh>
#include <treecsp/spectree.hh>

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace treecsp;

using std::size_t;
using std::string;
using std::uint64_t;
using std::vector;

namespace
{
    // wall-time limits per criterion, seconds
    constexpr double limit_path = 0.001;
    constexpr double limit_triad = 10;
    constexpr double limit_solver = 30;
    constexpr double limit_poly = 60;
    constexpr double limit_triangle = 60;
    constexpr double limit_paths = 300;
    constexpr double limit_suite = 900;
    constexpr double limit_consistency = 600;

    // corpus sizes and seeds
    constexpr size_t solver_pairs = 200;
    constexpr uint64_t solver_seed = 20240601;
    constexpr size_t path_count = 20;
    constexpr uint64_t path_seed = 7;
    constexpr size_t suite_trees = 25;
    constexpr size_t suite_max_vertices = 30;
    constexpr uint64_t suite_seed = 11;
    constexpr size_t consistency_trees = 5;
    constexpr size_t consistency_instances = 50;
    constexpr uint64_t consistency_seed = 5;

    struct Outcome
    {
        bool pass = false;
        string detail;
    };

    auto symmetric_triangle() -> Digraph
    {
        return Digraph(3, {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {0, 2}, {2, 0}});
    }

    auto minimal_path_example() -> Outcome
    {
        OrientedPath p("110110110001111");
        bool ok = is_minimal(p) && p.height() == 5 && net_length(p) == 5;
        return {ok, "minimal=" + std::to_string(is_minimal(p)) + " height=" + std::to_string(p.height())
                        + " net=" + std::to_string(net_length(p))};
    }

    auto canned_triad_structure() -> Outcome
    {
        SpecialTree tree(canned_triad());
        const auto & g = tree.digraph();
        auto levels = compute_levels(g);
        auto tb = recover_top_bottom(g, levels.height);
        auto expected = tree.template_edges();
        auto got = tb.e;
        std::sort(expected.begin(), expected.end());
        std::sort(got.begin(), got.end());
        bool ok = g.vertex_count() == 39 && g.edge_count() == 38 && levels.height == 4 && tb.a.count() == 4
            && tb.b.count() == 3 && tb.a == tree.a_set() && tb.b == tree.b_set() && got == expected
            && got.size() == 6;
        std::ostringstream d;
        d << g.vertex_count() << " vertices, " << g.edge_count() << " edges, height " << levels.height << ", |A|="
          << tb.a.count() << ", |B|=" << tb.b.count() << ", " << got.size() << " template edges";
        return {ok, d.str()};
    }

    auto solver_matches_brute_force() -> Outcome
    {
        Rng rng(solver_seed);
        size_t agree = 0, positive = 0;
        for (size_t i = 0; i < solver_pairs; ++i) {
            auto nx = 1 + rng.below(6), nh = 1 + rng.below(5);
            double px = 0.1 + 0.4 * static_cast<double>(rng.below(5)) / 4;
            double ph = 0.2 + 0.6 * static_cast<double>(rng.below(5)) / 4;
            auto x = random_digraph(rng, nx, px, rng.chance(0.2));
            auto h = random_digraph(rng, nh, ph, rng.chance(0.3));
            auto hom = solve_hom(x, h);
            bool expected = oracle::hom_exists(x, h);
            if (hom.has_value() == expected && (! hom || is_homomorphism(x, h, *hom)))
                ++agree;
            positive += expected;
        }
        return {agree == solver_pairs, std::to_string(agree) + "/" + std::to_string(solver_pairs) + " agree, "
                                           + std::to_string(positive) + " satisfiable"};
    }

    auto polymorphism_search_matches_enumeration() -> Outcome
    {
        size_t checks = 0, agree = 0, found = 0;
        auto compare = [&](bool search, bool enumerated) {
            ++checks;
            agree += search == enumerated;
            found += enumerated;
        };
        for (auto & h : oracle::all_digraphs(2)) {
            for (unsigned k = 2; k <= 3; ++k) {
                compare(find_wnu(h, k).has_value(),
                    oracle::exists_table(2, k, [k](auto & f) { return oracle::wnu(f, 2, k); }, h));
                compare(find_tsi(h, k).has_value(),
                    oracle::exists_table(2, k, [k](auto & f) { return oracle::tsi(f, 2, k); }, h));
            }
            compare(find_majority(h).has_value(),
                oracle::exists_table(2, 3, [](auto & f) { return oracle::majority(f, 2); }, h));
        }
        for (auto & h : oracle::all_digraphs(3)) {
            compare(find_wnu(h, 2).has_value(),
                oracle::exists_table(3, 2, [](auto & f) { return oracle::wnu(f, 3, 2); }, h));
            compare(find_tsi(h, 2).has_value(),
                oracle::exists_table(3, 2, [](auto & f) { return oracle::tsi(f, 3, 2); }, h));
        }
        return {agree == checks, std::to_string(agree) + "/" + std::to_string(checks) + " agree, "
                                     + std::to_string(found) + " exist"};
    }

    auto symmetric_triangle_hardness() -> Outcome
    {
        auto h = symmetric_triangle();
        bool wnu = find_wnu(h, 3).has_value();
        bool maj = find_majority(h).has_value();
        bool sig = find_siggers(h).has_value();
        return {! wnu && ! maj && ! sig, string("wnu3 ") + (wnu ? "found" : "none") + ", majority "
                                             + (maj ? "found" : "none") + ", siggers " + (sig ? "found" : "none")};
    }

    auto minimal_paths_bounded_width() -> Outcome
    {
        Rng rng(path_seed);
        size_t ok = 0;
        string first_bad;
        for (size_t i = 0; i < path_count; ++i) {
            int height = 1 + static_cast<int>(rng.below(4));
            auto p = random_minimal_path(rng, height, 14);
            auto g = p.to_digraph();
            bool maj = find_majority(g).has_value();
            auto report = classify_digraph(g);
            if (maj && report.verdict == Verdict::BoundedWidth)
                ++ok;
            else if (first_bad.empty())
                first_bad = p.directions();
        }
        return {ok == path_count,
            std::to_string(ok) + "/" + std::to_string(path_count) + (first_bad.empty() ? "" : ", first bad " + first_bad)};
    }

    auto special_tree_instance_checks() -> Outcome
    {
        const vector<string> required = {"top_bottom_in_diagonal_component", "wnu_extension", "special_polymer",
            "singleton_absorber", "order_absorption", "s_set_identities"};
        size_t found = 0, passed = 0, tried = 0;
        string first_bad;
        Rng params(suite_seed);
        for (uint64_t seed = suite_seed; found < suite_trees && tried < 400; ++seed) {
            ++tried;
            size_t a = 2 + params.below(4), b = 2 + params.below(4);
            int h = 1 + static_cast<int>(params.below(3));
            auto spec = gen_random_special_tree(seed, a, b, h, static_cast<size_t>(h) + 5);
            if (SpecialTree(spec).vertex_count() > suite_max_vertices)
                continue;
            auto report = verify_lemma_suite(spec, seed);
            if (! report.wnu_found)
                continue;
            ++found;
            bool ok = report.passed();
            for (auto & name : required) {
                auto c = report.find(name);
                ok = ok && c && c->status == "pass";
            }
            if (ok)
                ++passed;
            else if (first_bad.empty())
                first_bad = " first failing seed " + std::to_string(seed);
        }
        return {found == suite_trees && passed == found,
            std::to_string(passed) + "/" + std::to_string(found) + " trees pass" + first_bad};
    }

    // random digraph whose edges go up exactly one of height+1 levels
    auto random_layered(Rng & rng, int height) -> Digraph
    {
        auto n = 3 + rng.below(6);
        vector<int> level(n);
        for (auto & l : level)
            l = static_cast<int>(rng.below(static_cast<uint64_t>(height) + 1));
        vector<Edge> edges;
        for (Vertex u = 0; u < n; ++u)
            for (Vertex v = 0; v < n; ++v)
                if (level[v] == level[u] + 1 && rng.chance(0.45))
                    edges.emplace_back(u, v);
        return Digraph(n, std::move(edges));
    }

    auto random_oriented_tree(Rng & rng) -> Digraph
    {
        auto n = 2 + rng.below(10);
        vector<Edge> edges;
        for (Vertex v = 1; v < n; ++v) {
            auto p = static_cast<Vertex>(rng.below(v));
            if (rng.chance(0.5))
                edges.emplace_back(p, v);
            else
                edges.emplace_back(v, p);
        }
        return Digraph(n, std::move(edges));
    }

    auto consistency_decides_bounded_width() -> Outcome
    {
        vector<SpecialTreeSpec> trees;
        Rng params(consistency_seed);
        for (uint64_t seed = consistency_seed; trees.size() < consistency_trees && seed < consistency_seed + 200; ++seed) {
            size_t a = 2 + params.below(3), b = 2 + params.below(3);
            int h = 2 + static_cast<int>(params.below(2));
            auto spec = gen_random_special_tree(seed, a, b, h, static_cast<size_t>(h) + 4);
            ClassifyOptions options;
            options.width_certificates = false;
            if (classify_special_tree(spec, options).verdict == Verdict::BoundedWidth)
                trees.push_back(spec);
        }
        size_t agree = 0, total = 0, empty = 0, ac_only_misses = 0;
        Rng rng(consistency_seed);
        for (auto & spec : trees) {
            SpecialTree tree(spec);
            const auto & h = tree.digraph();
            for (size_t i = 0; i < consistency_instances; ++i) {
                auto x = rng.chance(0.5) ? random_layered(rng, spec.height + 1) : random_oriented_tree(rng);
                auto inst = build_instance(x, h);
                bool consistent = consistency_23(inst).has_value();
                bool hom = solve_hom(x, h).has_value();
                ++total;
                agree += consistent == hom;
                empty += ! consistent;
                ac_only_misses += ! hom && arc_consistency(inst).has_value();
            }
        }
        return {trees.size() == consistency_trees && agree == total,
            std::to_string(trees.size()) + " trees, " + std::to_string(agree) + "/" + std::to_string(total) + " agree, "
                + std::to_string(empty) + " empty, " + std::to_string(ac_only_misses) + " missed by arc consistency"};
    }

    auto triad_siggers_refutation() -> Outcome
    {
        ClassifyOptions options;
        options.node_budget = 0;
        options.width_certificates = false;
        auto report = classify_special_tree(canned_triad(), options);
        return {report.taylor == TaylorStatus::Refuted && report.verdict == Verdict::NpComplete,
            "taylor " + to_string(report.taylor) + ", verdict " + to_string(report.verdict)};
    }

    struct Criterion
    {
        int number;
        string name;
        double limit_s;
        std::function<Outcome()> run;
        bool gating = true;
    };
}

auto main(int argc, char * argv[]) -> int
{
    CLI::App app{"acceptance criteria"};
    bool extended = false;
    vector<int> only;
    app.add_flag("--extended", extended, "also run the non-gating long criterion");
    app.add_option("--only", only, "run just these criterion numbers");
    CLI11_PARSE(app, argc, argv);

    vector<Criterion> criteria = {
        {1, "minimal_path_example", limit_path, minimal_path_example},
        {2, "canned_triad_structure", limit_triad, canned_triad_structure},
        {3, "solver_matches_brute_force", limit_solver, solver_matches_brute_force},
        {4, "polymorphism_search_matches_enumeration", limit_poly, polymorphism_search_matches_enumeration},
        {5, "symmetric_triangle_hardness", limit_triangle, symmetric_triangle_hardness},
        {6, "minimal_paths_bounded_width", limit_paths, minimal_paths_bounded_width},
        {7, "special_tree_instance_checks", limit_suite, special_tree_instance_checks},
        {8, "consistency_decides_bounded_width", limit_consistency, consistency_decides_bounded_width},
        {9, "triad_siggers_refutation", 0, triad_siggers_refutation, false},
    };

    bool all = true;
    for (auto & c : criteria) {
        if (! only.empty() && std::find(only.begin(), only.end(), c.number) == only.end())
            continue;
        if (! c.gating && ! extended) {
            std::cout << "criterion " << c.number << " " << c.name << ": SKIP (non-gating, use --extended)\n";
            continue;
        }
        auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        }
        catch (const std::exception & e) {
            outcome = {false, string("threw: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool in_time = c.limit_s <= 0 || secs <= c.limit_s;
        bool pass = outcome.pass && in_time;
        std::cout << "criterion " << c.number << " " << c.name << ": " << (pass ? "PASS" : "FAIL") << " ("
                  << outcome.detail << "; " << std::fixed << std::setprecision(3) << secs << " s"
                  << (in_time ? "" : ", over time limit") << ")\n"
                  << std::defaultfloat;
        if (c.gating && ! pass)
            all = false;
    }
    return all ? 0 : 1;
}
