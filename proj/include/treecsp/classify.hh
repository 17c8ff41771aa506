#pragma once

#include <treecsp/digraph.hh>
#include <treecsp/homsolver.hh>
#include <treecsp/polysearch.hh>
#include <treecsp/spectree.hh>

#include <cstdint>
#include <string>
#include <vector>

namespace treecsp
{
    struct CoreResult
    {
        Digraph core;
        // core vertex -> input vertex
        std::vector<Vertex> kept;
        // input -> input, identity on kept, image exactly kept
        std::vector<Vertex> retraction;
        // true when the final pass showed no vertex can be avoided
        bool certified = false;
    };

    /// Deletes vertices while the graph maps into itself minus that vertex.
    /// Throws BudgetExceeded.
    auto compute_core(const Digraph & g, const SearchOptions & options = {}) -> CoreResult;

    enum class TaylorStatus
    {
        SiggersFound,
        Refuted,
        BudgetExceeded
    };

    enum class Verdict
    {
        NpComplete,
        BoundedWidth,
        Undetermined
    };

    auto to_string(TaylorStatus s) -> std::string;
    auto to_string(Verdict v) -> std::string;

    struct WidthCertificate
    {
        std::string kind;
        unsigned arity = 0;
        // "found", "none" or "budget_exceeded"
        std::string status;
    };

    struct ClassificationReport
    {
        std::size_t input_vertices = 0, input_edges = 0;
        int input_height = -1;
        bool input_special_tree = false;
        bool is_core = false;
        std::size_t core_size = 0;
        bool core_special_tree = false;
        TaylorStatus taylor = TaylorStatus::BudgetExceeded;
        std::vector<WidthCertificate> width_certificates;
        Verdict verdict = Verdict::Undetermined;
        std::vector<std::pair<std::string, double>> timings_ms;
        std::vector<std::uint64_t> seeds;
        std::vector<std::string> diagnostics;

        auto to_json() const -> std::string;
    };

    struct ClassifyOptions
    {
        // per search; 0 means unlimited
        std::uint64_t node_budget = 20'000'000;
        std::uint64_t indicator_budget = default_indicator_budget;
        bool width_certificates = true;
    };

    auto classify_special_tree(const SpecialTreeSpec & spec, const ClassifyOptions & options = {})
        -> ClassificationReport;

    /// The same pipeline for any digraph; a found Siggers operation only
    /// yields BOUNDED_WIDTH when the core is recognised as a special tree.
    auto classify_digraph(const Digraph & g, const ClassifyOptions & options = {}) -> ClassificationReport;
}
