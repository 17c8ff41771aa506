#pragma once

#include <treecsp/algebra.hh>
#include <treecsp/digraph.hh>
#include <treecsp/homsolver.hh>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace treecsp
{
    inline constexpr std::uint64_t default_indicator_budget = 4'000'000;

    /// A pattern is a k-tuple of variable indices 0..variables-1.
    using Pattern = std::vector<unsigned>;

    /// All instantiations of the patterns must take the same value.
    struct MergeRule
    {
        unsigned variables = 0;
        std::vector<Pattern> patterns;
        // empty, or one allowed value set per variable
        std::vector<VertexSet> domains;
    };

    /// Every instantiation of the pattern takes the value of variable `target`.
    struct PinRule
    {
        unsigned variables = 0;
        Pattern pattern;
        unsigned target = 0;
        std::vector<VertexSet> domains;
    };

    class IdentitySystem
    {
        private:
            unsigned _arity;
            std::vector<MergeRule> _merges;
            std::vector<PinRule> _pins;
            bool _set_symmetric = false;
            std::string _name;

        public:
            explicit IdentitySystem(unsigned arity, std::string name = "custom");

            // throw InvalidParams on a malformed rule
            auto add_merge(MergeRule rule) -> void;
            auto add_pin(PinRule rule) -> void;
            /// Identify every pair of tuples with the same set of entries.
            auto set_symmetric(bool on) -> void { _set_symmetric = on; }

            auto arity() const -> unsigned { return _arity; }
            auto merges() const -> const std::vector<MergeRule> & { return _merges; }
            auto pins() const -> const std::vector<PinRule> & { return _pins; }
            auto is_set_symmetric() const -> bool { return _set_symmetric; }
            auto name() const -> const std::string & { return _name; }

            static auto idempotent(unsigned k) -> IdentitySystem;
            static auto wnu(unsigned k) -> IdentitySystem;
            /// Idempotent everywhere, WNU identities only inside each subset.
            static auto wnu_on_subsets(unsigned k, const std::vector<VertexSet> & subsets) -> IdentitySystem;
            static auto majority() -> IdentitySystem;
            static auto tsi(unsigned k) -> IdentitySystem;
            static auto siggers() -> IdentitySystem;
    };

    /// The quotient of h^k by an identity system, as a CSP over h.
    struct Indicator
    {
        CspInstance instance;
        // tuple index -> variable
        std::vector<std::uint32_t> class_of;
        unsigned arity = 0;
        std::size_t base_size = 0;

        auto decode(const std::vector<Vertex> & solution) const -> OperationTable;
    };

    /// Throws BudgetExceeded when |h|^k or |E(h)|^k passes budget, and
    /// InconsistentPins when a class is forced to two values.
    auto indicator(const Digraph & h, const IdentitySystem & sys, std::uint64_t budget = default_indicator_budget)
        -> Indicator;

    struct PolySearchOptions
    {
        std::uint64_t budget = default_indicator_budget;
        SearchOptions search;
    };

    /// Solves the indicator and re-checks the result with the algebra
    /// predicates. Returns none when the identities are unsatisfiable.
    auto find_polymorphism(const Digraph & h, const IdentitySystem & sys, const PolySearchOptions & options = {},
        SearchStats * stats = nullptr) -> std::optional<OperationTable>;

    auto find_wnu(const Digraph & h, unsigned k, const PolySearchOptions & options = {}) -> std::optional<OperationTable>;
    auto find_wnu_on(const Digraph & h, unsigned k, const std::vector<VertexSet> & subsets,
        const PolySearchOptions & options = {}) -> std::optional<OperationTable>;
    auto find_majority(const Digraph & h, const PolySearchOptions & options = {}) -> std::optional<OperationTable>;
    auto find_tsi(const Digraph & h, unsigned k, const PolySearchOptions & options = {}) -> std::optional<OperationTable>;
    auto find_siggers(const Digraph & h, const PolySearchOptions & options = {}) -> std::optional<OperationTable>;
}
