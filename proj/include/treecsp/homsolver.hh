#pragma once

#include <treecsp/digraph.hh>

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace treecsp
{
    /// A binary relation between two value ranges as bitset rows, kept in
    /// both directions.
    class Relation
    {
        private:
            std::size_t _left = 0, _right = 0;
            std::size_t _left_words = 0, _right_words = 0;
            std::vector<std::uint64_t> _fwd, _bwd;

        public:
            Relation() = default;
            Relation(std::size_t left, std::size_t right);

            static auto from_digraph(const Digraph & h) -> Relation;

            auto add(Vertex a, Vertex b) -> void;
            auto contains(Vertex a, Vertex b) const -> bool;

            auto left_size() const -> std::size_t { return _left; }
            auto right_size() const -> std::size_t { return _right; }

            /// Right values related to a, as right_words() words.
            auto forward(Vertex a) const -> const std::uint64_t * { return _fwd.data() + a * _right_words; }
            /// Left values related to b, as left_words() words.
            auto backward(Vertex b) const -> const std::uint64_t * { return _bwd.data() + b * _left_words; }
            auto left_words() const -> std::size_t { return _left_words; }
            auto right_words() const -> std::size_t { return _right_words; }
    };

    struct Constraint
    {
        std::size_t u = 0, v = 0;
        std::size_t relation = 0;
    };

    /// Variables over a common value range 0..domain_size-1, with bitset
    /// domains and binary constraints. A constraint on (u, u) is folded into
    /// u's domain immediately.
    class CspInstance
    {
        private:
            std::size_t _vars = 0, _values = 0, _words = 0;
            std::vector<std::uint64_t> _domains;
            std::vector<Relation> _relations;
            std::vector<Constraint> _constraints;
            std::vector<std::string> _tags;

        public:
            CspInstance() = default;
            CspInstance(std::size_t var_count, std::size_t domain_size);

            auto var_count() const -> std::size_t { return _vars; }
            auto domain_size() const -> std::size_t { return _values; }
            auto words() const -> std::size_t { return _words; }

            auto domain(std::size_t var) const -> Bitset;
            auto domain_data(std::size_t var) -> std::uint64_t * { return _domains.data() + var * _words; }
            auto domain_data(std::size_t var) const -> const std::uint64_t * { return _domains.data() + var * _words; }
            auto set_domain(std::size_t var, const Bitset & values) -> void;
            auto restrict_domain(std::size_t var, const Bitset & values) -> void;
            auto pin(std::size_t var, Vertex value) -> void;
            auto domain_count(std::size_t var) const -> std::size_t;

            auto add_relation(Relation r) -> std::size_t;
            auto add_constraint(std::size_t u, std::size_t v, std::size_t relation) -> void;

            auto relations() const -> const std::vector<Relation> & { return _relations; }
            auto constraints() const -> const std::vector<Constraint> & { return _constraints; }

            /// Optional per-variable labels for diagnostics.
            auto set_tag(std::size_t var, std::string tag) -> void;
            auto tag(std::size_t var) const -> std::string;

            auto all_domains() const -> const std::vector<std::uint64_t> & { return _domains; }
            auto all_domains() -> std::vector<std::uint64_t> & { return _domains; }
    };

    using Pins = std::vector<std::pair<Vertex, Vertex>>;
    using Homomorphism = std::vector<Vertex>;

    /// One variable per vertex of x over the vertices of h; one constraint per
    /// edge of x. Throws InvalidPin on out-of-range pins.
    auto build_instance(const Digraph & x, const Digraph & h, const Pins & pins = {}) -> CspInstance;

    /// Reduces domains to the arc-consistent fixpoint in place; false if some
    /// domain empties.
    auto enforce_arc_consistency(CspInstance & inst) -> bool;

    /// Copying form: the reduced instance, or nullopt for Empty.
    auto arc_consistency(const CspInstance & inst) -> std::optional<CspInstance>;

    struct SearchOptions
    {
        // 0 means unlimited; exceeding either raises BudgetExceeded
        std::uint64_t node_budget = 0;
        std::chrono::milliseconds time_budget{0};
        // solve independent parts of the constraint graph one after another
        bool decompose = true;
    };

    struct SearchStats
    {
        std::uint64_t nodes = 0;
        std::uint64_t failures = 0;
        std::size_t components = 0;
    };

    /// Backtracking with arc consistency maintained at every node; smallest
    /// domain first (lowest index on ties), values ascending.
    auto solve(const CspInstance & inst, const SearchOptions & options = {}, SearchStats * stats = nullptr)
        -> std::optional<std::vector<Vertex>>;

    auto is_homomorphism(const Digraph & x, const Digraph & h, std::span<const Vertex> map) -> bool;

    auto solve_hom(const Digraph & x, const Digraph & h, const Pins & pins = {},
        const SearchOptions & options = {}, SearchStats * stats = nullptr) -> std::optional<Homomorphism>;

    /// Every homomorphism x -> h respecting pins, in lexicographic order, up
    /// to limit (0 = all). Throws BudgetExceeded past node_budget nodes.
    auto enumerate_homs(const Digraph & x, const Digraph & h, std::size_t limit = 0,
        const Pins & pins = {}, std::uint64_t node_budget = 50'000'000) -> std::vector<Homomorphism>;

    /// The (2,3)-consistent pair family of an instance: for every ordered
    /// pair of distinct variables, the allowed value pairs.
    class PairFamily
    {
        private:
            std::size_t _vars = 0, _values = 0;
            std::vector<Bitset> _domains;
            // row (u * vars + v) * values + a: the b with (a, b) allowed on (u, v)
            std::vector<Bitset> _rows;

            friend auto consistency_23(const CspInstance & inst) -> std::optional<PairFamily>;

        public:
            auto var_count() const -> std::size_t { return _vars; }
            auto domain(std::size_t u) const -> const Bitset & { return _domains[u]; }
            auto allowed(std::size_t u, Vertex a, std::size_t v, Vertex b) const -> bool;
            auto row(std::size_t u, Vertex a, std::size_t v) const -> const Bitset &
            {
                return _rows[(u * _vars + v) * _values + a];
            }
    };

    /// The greatest (2,3)-consistent family, or nullopt when it collapses.
    auto consistency_23(const CspInstance & inst) -> std::optional<PairFamily>;
}
