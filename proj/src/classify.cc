#include <treecsp/classify.hh>
#include <treecsp/errors.hh>

#include <json.hpp>

#include <chrono>
#include <functional>
#include <numeric>

using namespace treecsp;

using std::size_t;
using std::string;
using std::uint64_t;
using std::vector;

auto treecsp::compute_core(const Digraph & g, const SearchOptions & options) -> CoreResult
{
    const size_t n = g.vertex_count();
    // current graph vertex -> input vertex
    vector<Vertex> alive(n);
    std::iota(alive.begin(), alive.end(), 0u);
    // input vertex -> current graph vertex, composed along the way
    vector<Vertex> psi(n);
    std::iota(psi.begin(), psi.end(), 0u);
    Digraph current = g;

    bool shrunk = true;
    while (shrunk) {
        shrunk = false;
        for (Vertex v = 0; v < current.vertex_count() && current.vertex_count() > 1; ++v) {
            vector<Vertex> keep;
            for (Vertex u = 0; u < current.vertex_count(); ++u)
                if (u != v)
                    keep.push_back(u);
            auto smaller = current.induced(keep);
            auto hom = solve_hom(current, smaller, {}, options);
            if (! hom)
                continue;
            for (auto & p : psi)
                p = (*hom)[p];
            vector<Vertex> next_alive(keep.size());
            for (size_t i = 0; i < keep.size(); ++i)
                next_alive[i] = alive[keep[i]];
            alive = std::move(next_alive);
            current = std::move(smaller);
            shrunk = true;
            break;
        }
    }

    CoreResult result;
    result.core = current;
    result.kept = alive;
    result.certified = true;

    // psi restricted to the core is an automorphism; undo it
    const size_t m = current.vertex_count();
    vector<Vertex> inverse(m, UINT32_MAX);
    for (Vertex c = 0; c < m; ++c)
        inverse[psi[alive[c]]] = c;
    for (auto v : inverse)
        if (v == UINT32_MAX)
            throw Error("internal: core map is not bijective on the core");
    result.retraction.resize(n);
    for (Vertex v = 0; v < n; ++v)
        result.retraction[v] = alive[inverse[psi[v]]];
    if (! is_homomorphism(g, g, result.retraction))
        throw Error("internal: retraction is not an endomorphism");
    for (auto k : alive)
        if (result.retraction[k] != k)
            throw Error("internal: retraction moves a core vertex");
    return result;
}

auto treecsp::to_string(TaylorStatus s) -> string
{
    switch (s) {
        case TaylorStatus::SiggersFound: return "siggers_found";
        case TaylorStatus::Refuted: return "refuted";
        case TaylorStatus::BudgetExceeded: return "budget_exceeded";
    }
    return "?";
}

auto treecsp::to_string(Verdict v) -> string
{
    switch (v) {
        case Verdict::NpComplete: return "NP_COMPLETE";
        case Verdict::BoundedWidth: return "BOUNDED_WIDTH";
        case Verdict::Undetermined: return "UNDETERMINED";
    }
    return "?";
}

auto ClassificationReport::to_json() const -> string
{
    nlohmann::ordered_json j;
    j["format_version"] = 1;
    j["input_summary"] = {{"vertices", input_vertices}, {"edges", input_edges}, {"height", input_height},
        {"special_tree", input_special_tree}};
    j["is_core"] = is_core;
    j["core_size"] = core_size;
    j["core_special_tree"] = core_special_tree;
    j["taylor"] = to_string(taylor);
    auto certs = nlohmann::ordered_json::array();
    for (auto & c : width_certificates)
        certs.push_back({{"kind", c.kind}, {"arity", c.arity}, {"status", c.status}});
    j["width_certificates"] = certs;
    j["verdict"] = to_string(verdict);
    nlohmann::ordered_json t = nlohmann::ordered_json::object();
    for (auto & [stage, ms] : timings_ms)
        t[stage] = ms;
    j["timings"] = t;
    j["seeds"] = seeds;
    j["diagnostics"] = diagnostics;
    return j.dump(2);
}

namespace
{
    class Stopwatch
    {
        private:
            std::chrono::steady_clock::time_point _start = std::chrono::steady_clock::now();

        public:
            auto ms() const -> double
            {
                return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - _start).count();
            }
    };

    auto run_pipeline(const Digraph & g, const ClassifyOptions & options, ClassificationReport & report) -> void
    {
        SearchOptions search;
        search.node_budget = options.node_budget;

        report.input_vertices = g.vertex_count();
        report.input_edges = g.edge_count();
        try {
            report.input_height = compute_levels(g).height;
        }
        catch (const Error &) {
            report.input_height = -1;
        }

        Stopwatch core_clock;
        CoreResult core;
        try {
            core = compute_core(g, search);
        }
        catch (const BudgetExceeded & e) {
            report.diagnostics.push_back(string("core: ") + e.what());
            report.timings_ms.emplace_back("core", core_clock.ms());
            return;
        }
        report.timings_ms.emplace_back("core", core_clock.ms());
        report.is_core = core.certified;
        report.core_size = core.core.vertex_count();

        try {
            recognize_special_tree(core.core);
            report.core_special_tree = true;
        }
        catch (const Error & e) {
            report.diagnostics.push_back(string("core is not a special tree: ") + e.what());
        }

        PolySearchOptions poly;
        poly.budget = options.indicator_budget;
        poly.search = search;
        const auto & h = core.core;

        if (options.width_certificates) {
            struct Attempt
            {
                string kind;
                unsigned arity;
                std::function<std::optional<OperationTable>()> run;
            };
            vector<Attempt> attempts = {
                {"tsi", 2, [&] { return find_tsi(h, 2, poly); }},
                {"majority", 3, [&] { return find_majority(h, poly); }},
                {"wnu", 3, [&] { return find_wnu(h, 3, poly); }},
            };
            for (auto & a : attempts) {
                Stopwatch clock;
                WidthCertificate cert{a.kind, a.arity, ""};
                try {
                    cert.status = a.run() ? "found" : "none";
                }
                catch (const BudgetExceeded &) {
                    cert.status = "budget_exceeded";
                }
                report.width_certificates.push_back(cert);
                report.timings_ms.emplace_back(a.kind + std::to_string(a.arity), clock.ms());
            }
        }

        Stopwatch siggers_clock;
        try {
            report.taylor = find_siggers(h, poly) ? TaylorStatus::SiggersFound : TaylorStatus::Refuted;
        }
        catch (const BudgetExceeded & e) {
            report.taylor = TaylorStatus::BudgetExceeded;
            report.diagnostics.push_back(string("siggers: ") + e.what());
        }
        report.timings_ms.emplace_back("siggers", siggers_clock.ms());

        if (report.taylor == TaylorStatus::Refuted && report.is_core)
            report.verdict = Verdict::NpComplete;
        else if (report.taylor == TaylorStatus::SiggersFound && report.core_special_tree)
            report.verdict = Verdict::BoundedWidth;
        else
            report.verdict = Verdict::Undetermined;
    }
}

auto treecsp::classify_special_tree(const SpecialTreeSpec & spec, const ClassifyOptions & options)
    -> ClassificationReport
{
    ClassificationReport report;
    try {
        SpecialTree tree(spec);
        report.input_special_tree = true;
        run_pipeline(tree.digraph(), options, report);
    }
    catch (const Error & e) {
        report.diagnostics.push_back(e.what());
        report.verdict = Verdict::Undetermined;
    }
    return report;
}

auto treecsp::classify_digraph(const Digraph & g, const ClassifyOptions & options) -> ClassificationReport
{
    ClassificationReport report;
    try {
        try {
            recognize_special_tree(g);
            report.input_special_tree = true;
        }
        catch (const Error &) {
            report.input_special_tree = false;
        }
        run_pipeline(g, options, report);
    }
    catch (const Error & e) {
        report.diagnostics.push_back(e.what());
        report.verdict = Verdict::Undetermined;
    }
    return report;
}
