#pragma once

#include <treecsp/digraph.hh>

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace treecsp
{
    inline constexpr std::uint64_t default_table_budget = 4'000'000;
    inline constexpr std::uint64_t default_arity_budget = 4096;

    /// Upper bound on threads used by the exhaustive table checks; 0 means
    /// one per hardware thread. Results never depend on it.
    auto set_worker_threads(unsigned count) -> void;

    /// A k-ary operation on {0..n-1} as an explicit table; tuple index is
    /// the base-n number with the leftmost coordinate most significant.
    class OperationTable
    {
        private:
            std::size_t _n = 0;
            unsigned _k = 0;
            std::vector<Vertex> _values;

        public:
            OperationTable() = default;
            // all-zero table; throws BudgetExceeded past default_table_budget entries
            OperationTable(std::size_t n, unsigned k);
            // throws InvalidParams on a wrong length or out-of-range value
            OperationTable(std::size_t n, unsigned k, std::vector<Vertex> values);

            static auto projection(std::size_t n, unsigned k, unsigned i) -> OperationTable;
            static auto identity(std::size_t n) -> OperationTable { return projection(n, 1, 0); }

            template <typename F>
            static auto from_function(std::size_t n, unsigned k, F && f) -> OperationTable
            {
                OperationTable t(n, k);
                std::vector<Vertex> args(k, 0);
                for (std::size_t idx = 0; idx < t._values.size(); ++idx) {
                    t._values[idx] = static_cast<Vertex>(f(std::span<const Vertex>(args)));
                    for (unsigned i = k; i-- > 0;) {
                        if (++args[i] < n)
                            break;
                        args[i] = 0;
                    }
                }
                return t;
            }

            auto base_size() const -> std::size_t { return _n; }
            auto arity() const -> unsigned { return _k; }
            auto size() const -> std::size_t { return _values.size(); }
            auto values() const -> const std::vector<Vertex> & { return _values; }

            auto at(std::size_t index) const -> Vertex { return _values[index]; }
            auto set(std::size_t index, Vertex v) -> void { _values[index] = v; }

            auto index_of(std::span<const Vertex> args) const -> std::size_t
            {
                std::size_t idx = 0;
                for (auto a : args)
                    idx = idx * _n + a;
                return idx;
            }

            auto operator()(std::span<const Vertex> args) const -> Vertex { return _values[index_of(args)]; }
            auto operator()(Vertex x, Vertex y) const -> Vertex { return _values[x * _n + y]; }
            auto operator()(Vertex x, Vertex y, Vertex z) const -> Vertex { return _values[(x * _n + y) * _n + z]; }

            friend auto operator==(const OperationTable &, const OperationTable &) -> bool = default;
    };

    /// Either a table, or the composition g <- f of arity arity(g) * arity(f):
    /// (g <- f)(x_1..x_kn) = g(f(x_1..x_k), f(x_k+1..x_2k), ...).
    /// Arity saturates at UINT64_MAX; such expressions can be carried around
    /// but not evaluated.
    class OperationExpr
    {
        private:
            struct Node;
            std::shared_ptr<const Node> _node;

            explicit OperationExpr(std::shared_ptr<const Node> node);

        public:
            OperationExpr();

            static auto leaf(OperationTable table) -> OperationExpr;
            static auto compose(const OperationExpr & g, const OperationExpr & f) -> OperationExpr;

            auto is_leaf() const -> bool;
            auto table() const -> const OperationTable &;
            auto outer() const -> const OperationExpr &;
            auto inner() const -> const OperationExpr &;

            auto base_size() const -> std::size_t;
            auto arity() const -> std::uint64_t;
            auto leaf_count() const -> std::uint64_t;

            /// Throws ArityBudgetExceeded if the arity is past budget, and
            /// InvalidParams on a wrong argument count.
            auto evaluate(std::span<const Vertex> args, std::uint64_t budget = default_arity_budget) const -> Vertex;

            auto materialize(std::uint64_t budget = default_table_budget) const -> OperationTable;

            /// Readable structure, e.g. "(t3 <- (t3 <- t3))".
            auto describe() const -> std::string;
    };

    /// Exhaustive check over all edge tuples of h^k. Throws BudgetExceeded
    /// when |E(h)|^k is past budget.
    auto is_polymorphism(const Digraph & h, const OperationTable & f, std::uint64_t budget = 50'000'000) -> bool;

    /// Tables are checked exhaustively; a composition of polymorphisms is
    /// accepted structurally, otherwise it is materialised and checked.
    auto is_polymorphism(const Digraph & h, const OperationExpr & f, std::uint64_t budget = 50'000'000) -> bool;

    auto is_idempotent(const OperationTable & f) -> bool;
    auto is_idempotent(const OperationExpr & f) -> bool;
    /// Idempotent, and all "one argument differs" patterns agree. At arity
    /// 2 this is commutativity.
    auto satisfies_wnu(const OperationTable & f) -> bool;
    auto satisfies_wnu_on(const OperationTable & f, const VertexSet & s) -> bool;
    auto is_majority(const OperationTable & f) -> bool;
    /// Idempotent and depending only on the set of arguments.
    auto is_tsi(const OperationTable & f) -> bool;
    /// 4-ary, idempotent, s(a,r,e,a) = s(r,a,r,e).
    auto is_siggers(const OperationTable & f) -> bool;
    auto is_commutative_on(const OperationTable & f, const VertexSet & s) -> bool;
    auto is_closed_under(const VertexSet & s, const OperationTable & f) -> bool;

    /// x o y = w(x, .., x, y). Throws NotWNU.
    auto binary_polymer(const OperationTable & w) -> OperationTable;

    /// p(x, p(x, y)) = p(x, y) for all x, y.
    auto is_special_polymer(const OperationTable & p) -> bool;

    struct SpecialWnu
    {
        // w <- w <- ... <- w, `copies` factors
        OperationExpr wnu;
        OperationTable polymer;
        OperationTable base_polymer;
        std::size_t copies = 1;
    };

    /// Composes w with itself until the binary polymer becomes special.
    /// Polymers follow p_1 = o and p_(m+1)(x, y) = x o p_m(x, y). Throws NotWNU.
    auto make_special(const OperationTable & w, std::size_t max_copies = 1'000'000) -> SpecialWnu;

    /// x * y: y applied on the right of x through the polymer, hsize times.
    auto star(const OperationTable & polymer, std::size_t hsize) -> OperationTable;

    /// Least superset of s closed under every op.
    auto closure(const VertexSet & s, const std::vector<OperationExpr> & ops,
        std::uint64_t budget = default_table_budget) -> VertexSet;

    /// A binary term in the star operation over the variables x and y.
    class BinaryTerm
    {
        private:
            struct Node;
            std::shared_ptr<const Node> _node;

            explicit BinaryTerm(std::shared_ptr<const Node> node);

        public:
            static auto x() -> BinaryTerm;
            static auto y() -> BinaryTerm;
            static auto star(const BinaryTerm & left, const BinaryTerm & right) -> BinaryTerm;

            auto evaluate(const OperationTable & star_table, Vertex x, Vertex y) const -> Vertex;
            /// The binary operation the term defines.
            auto to_table(const OperationTable & star_table) const -> OperationTable;
            auto contains_x() const -> bool;
            auto contains_y() const -> bool;
            auto to_string() const -> std::string;
    };

    struct SSet
    {
        Vertex c = 0, c2 = 0;
        VertexSet elements;
        // one witnessing term per element, evaluating to it at (c, c2)
        std::map<Vertex, BinaryTerm> terms;
    };

    /// All values at (c, c2) of binary star-terms using both variables, each
    /// with a witnessing term.
    auto s_set(Vertex c, Vertex c2, const OperationTable & star_table) -> SSet;

    struct AbsorptionCertificate
    {
        VertexSet superset, subset;
        OperationExpr op;
    };

    /// Subset nonempty and contained in superset, both closed under op, and
    /// every application with one argument from the superset and the rest
    /// from the subset lands in the subset. Throws BudgetExceeded.
    auto verify_absorption(const AbsorptionCertificate & cert, std::uint64_t budget = default_table_budget) -> bool;

    /// {o} absorbs a via a WNU with binary polymer p: o p x = o for x in a.
    auto singleton_absorbs_via_wnu(const OperationTable & polymer, Vertex o, const VertexSet & a) -> bool;

    struct WeakPointingCertificate
    {
        OperationExpr op;
        VertexSet x, y;
        // witnesses[i] is the tuple used for coordinate i
        std::vector<std::vector<Vertex>> witnesses;
        // when present: for u in alpha_domain and every i, the value with u
        // in place i is alpha[u]
        std::optional<std::vector<Vertex>> alpha;
        VertexSet alpha_domain;
    };

    auto verify_weak_pointing(const WeakPointingCertificate & cert, std::uint64_t budget = default_arity_budget) -> bool;

    /// The unary identity pointing {x} to {x}.
    auto identity_pointing(std::size_t n, Vertex x, const VertexSet & alpha_domain) -> WeakPointingCertificate;

    /// From f: X -> Y and g: Y -> Z, the certificate for g <- f: X -> Z with
    /// the block witnesses of the composition argument. Throws
    /// ArityBudgetExceeded, or PreconditionViolated if an input fails
    /// verification or the result does.
    auto compose_pointing(const WeakPointingCertificate & f_cert, const WeakPointingCertificate & g_cert,
        std::uint64_t arity_budget = default_arity_budget) -> WeakPointingCertificate;
}
