#pragma once

#include <treecsp/algebra.hh>
#include <treecsp/spectree.hh>

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace treecsp
{
    /// Tuples of H^n in the component of the diagonal. Throws BudgetExceeded.
    auto delta_n(const SpecialTree & tree, unsigned n, std::uint64_t budget = default_power_budget) -> Bitset;

    /// Whether every tuple of A^n and B^n lies in delta_n.
    auto top_bottom_in_delta(const SpecialTree & tree, unsigned n, std::uint64_t budget = default_power_budget) -> bool;

    /// Rank of each template edge in the linear order used by extend_wnu.
    /// Empty means the spec listing order.
    using EdgeOrder = std::vector<std::size_t>;

    /// Turns an idempotent polymorphism that is a WNU on A and on B into a
    /// polymorphism that is a WNU on the whole tree. The result is verified.
    /// Throws PreconditionViolated, BudgetExceeded.
    auto extend_wnu(const SpecialTree & tree, const OperationTable & tau, const EdgeOrder & edge_order = {})
        -> OperationTable;

    /// Some template vertex u with u p w = u for all w in E_2({u}), lowest
    /// first. Throws NoneFound.
    auto find_singleton_absorber(const SpecialTree & tree, const OperationTable & polymer) -> Vertex;

    /// a p a' = a for every comparable pair a <= a' on one template side,
    /// the order rooted at o.
    auto verify_preceq_absorption(const SpecialTree & tree, Vertex o, const OperationTable & polymer) -> bool;

    /// Template vertices on hub's side lying strictly above some member of c.
    auto vertices_above(const SpecialTree & tree, const RootedOrder & order, Vertex hub, const VertexSet & c)
        -> std::vector<Vertex>;

    /// hub * d = d * hub = hub for each d from vertices_above.
    auto verify_star_absorbs(const SpecialTree & tree, const RootedOrder & order, Vertex hub, const VertexSet & c,
        const OperationTable & star_table) -> bool;

    /// phi(hub, d) = phi(d, hub) = hub for every witnessing term of the
    /// S-sets over pairs of c, and each d from vertices_above.
    auto verify_terms_absorb(const SpecialTree & tree, const RootedOrder & order, Vertex hub, const VertexSet & c,
        const OperationTable & star_table) -> bool;

    using PartialBinary = std::map<std::pair<Vertex, Vertex>, Vertex>;

    /// A commutative choice gamma(c, c') from S_{c,c'} over all pairs of c,
    /// taking the least element unless overridden.
    auto commutative_choice(const VertexSet & c, const OperationTable & star_table, const PartialBinary & overrides = {})
        -> PartialBinary;

    /// An idempotent binary polymorphism agreeing with gamma on c, where c
    /// sits in E_1(hub) and above hub in the order. gamma must be defined on
    /// all of c x c with gamma(c, c') in S_{c,c'}. Throws PreconditionViolated
    /// for bad input and ConstructionStuck when the result is not a
    /// polymorphism.
    auto extend_binary(const SpecialTree & tree, const RootedOrder & order, Vertex hub, const VertexSet & c,
        const PartialBinary & gamma, const OperationTable & star_table) -> OperationTable;
}
