#pragma once

#include <treecsp/algebra.hh>
#include <treecsp/lemmas.hh>
#include <treecsp/spectree.hh>

#include <optional>
#include <vector>

namespace treecsp
{
    /// Everything the pointing constructions share for one tree and one
    /// WNU polymorphism.
    struct PointingContext
    {
        const SpecialTree * tree = nullptr;
        OperationTable omega;
        SpecialWnu special;
        OperationTable star_table;
        Vertex o = 0;
        RootedOrder order;
        std::uint64_t arity_budget = default_arity_budget;

        /// omega, its polymer, the special polymer and star, as expressions.
        auto known_ops() const -> std::vector<OperationExpr>;
    };

    /// Builds the special polymer, star and the absorbing vertex o from a
    /// WNU polymorphism omega of the tree. Throws NotWNU, NoneFound.
    auto make_pointing_context(const SpecialTree & tree, const OperationTable & omega,
        std::uint64_t arity_budget = default_arity_budget) -> PointingContext;

    /// Closed under every known operation.
    auto is_relative_subuniverse(const PointingContext & ctx, const VertexSet & c) -> bool;

    /// A proper nonempty subset of c, closed under some known operation,
    /// that absorbs c via it. None means c is absorption-free relative to
    /// the known operations.
    auto find_relative_absorption(const PointingContext & ctx, const VertexSet & c)
        -> std::optional<AbsorptionCertificate>;

    /// Points {x, y} to a singleton with the alpha map over c defined.
    /// Throws ConstructionStuck or ArityBudgetExceeded.
    auto point_pair(const PointingContext & ctx, Vertex hub, const VertexSet & c, Vertex x, Vertex y)
        -> WeakPointingCertificate;

    /// Points x (a subset of c) to a singleton, with c in E_1(hub) above
    /// hub. x defaults to c. Throws ConstructionStuck, ArityBudgetExceeded.
    auto build_pointing_for_neighborhood(const PointingContext & ctx, Vertex hub, const VertexSet & c,
        const std::optional<VertexSet> & x = std::nullopt) -> WeakPointingCertificate;

    /// Points c (inside A or inside B) to a singleton by recursion on the
    /// template distance from o. Throws DistanceNotUniform,
    /// ConstructionStuck, ArityBudgetExceeded.
    auto build_pointing_for_af(const PointingContext & ctx, const VertexSet & c) -> WeakPointingCertificate;

    /// First follows relative absorption down to a smaller set, then uses
    /// the neighbourhood or distance constructions.
    auto point_to_singleton(const PointingContext & ctx, const VertexSet & c) -> WeakPointingCertificate;

    /// As point_to_singleton for a subset of E_1(hub) above hub.
    auto point_to_singleton_hub(const PointingContext & ctx, Vertex hub, const VertexSet & c)
        -> WeakPointingCertificate;
}
