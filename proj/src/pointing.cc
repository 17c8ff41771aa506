#include <treecsp/pointing.hh>
#include <treecsp/errors.hh>

#include <algorithm>

using namespace treecsp;

using std::size_t;
using std::string;
using std::to_string;
using std::uint64_t;
using std::vector;

auto PointingContext::known_ops() const -> vector<OperationExpr>
{
    return {OperationExpr::leaf(omega), OperationExpr::leaf(special.base_polymer), OperationExpr::leaf(special.polymer),
        OperationExpr::leaf(star_table)};
}

auto treecsp::make_pointing_context(const SpecialTree & tree, const OperationTable & omega, uint64_t arity_budget)
    -> PointingContext
{
    PointingContext ctx;
    ctx.tree = &tree;
    ctx.omega = omega;
    ctx.special = make_special(omega);
    ctx.star_table = star(ctx.special.polymer, tree.vertex_count());
    ctx.o = find_singleton_absorber(tree, ctx.special.polymer);
    ctx.order = RootedOrder(tree.digraph(), ctx.o);
    ctx.arity_budget = arity_budget;
    return ctx;
}

auto treecsp::is_relative_subuniverse(const PointingContext & ctx, const VertexSet & c) -> bool
{
    for (auto & op : ctx.known_ops())
        if (! is_closed_under(c, op.table()))
            return false;
    return true;
}

namespace
{
    auto singleton(size_t n, Vertex v) -> VertexSet
    {
        VertexSet s(n);
        s.set(v);
        return s;
    }

    auto subsets_to_try(const PointingContext & ctx, const VertexSet & c) -> vector<VertexSet>
    {
        auto members = c.members();
        const size_t n = c.size();
        vector<VertexSet> result;
        if (members.size() <= 10) {
            // every proper nonempty subset, smallest first
            for (uint64_t mask = 1; mask + 1 < (uint64_t{1} << members.size()); ++mask) {
                VertexSet s(n);
                for (size_t i = 0; i < members.size(); ++i)
                    if (mask >> i & 1)
                        s.set(members[i]);
                result.push_back(std::move(s));
            }
            std::stable_sort(result.begin(), result.end(),
                [](const VertexSet & a, const VertexSet & b) { return a.count() < b.count(); });
        }
        else {
            for (auto v : members)
                result.push_back(singleton(n, v));
            // the layers by distance from o
            auto dist = ctx.tree->template_distances(ctx.o);
            for (int k = 0; k < static_cast<int>(n); ++k) {
                VertexSet s(n);
                for (auto v : members)
                    if (dist[v] == k)
                        s.set(v);
                if (s.any() && s.count() < members.size())
                    result.push_back(std::move(s));
            }
        }
        return result;
    }

    auto pointing_from_absorption(const AbsorptionCertificate & cert) -> WeakPointingCertificate
    {
        WeakPointingCertificate p;
        p.op = cert.op;
        p.x = cert.superset;
        p.y = cert.subset;
        auto n = static_cast<size_t>(cert.op.arity());
        p.witnesses.assign(n, vector<Vertex>(n, static_cast<Vertex>(cert.subset.find_first())));
        return p;
    }

    auto compose(const PointingContext & ctx, const WeakPointingCertificate & f, const WeakPointingCertificate & g)
        -> WeakPointingCertificate
    {
        try {
            return compose_pointing(f, g, ctx.arity_budget);
        }
        catch (const PreconditionViolated & e) {
            throw ConstructionStuck(string("composition failed: ") + e.what());
        }
    }

    auto verified(const PointingContext & ctx, WeakPointingCertificate cert, const char * stage) -> WeakPointingCertificate
    {
        if (! verify_weak_pointing(cert, ctx.arity_budget))
            throw ConstructionStuck(string(stage) + " produced a certificate that does not verify");
        return cert;
    }

    auto check_neighbourhood(const PointingContext & ctx, Vertex hub, const VertexSet & c) -> void
    {
        auto & tree = *ctx.tree;
        if (! tree.is_template_vertex(hub))
            throw PreconditionViolated("hub must be a template vertex");
        auto & nbrs = tree.template_neighbours(hub);
        c.for_each([&](size_t x) {
            if (! std::binary_search(nbrs.begin(), nbrs.end(), static_cast<Vertex>(x)))
                throw PreconditionViolated("set must lie in the template neighbourhood of the hub");
            if (! ctx.order.precedes(hub, static_cast<Vertex>(x)))
                throw PreconditionViolated("set must lie above the hub");
        });
        if (! is_closed_under(c, ctx.star_table))
            throw PreconditionViolated("set must be closed under star");
    }

    auto point_pair_impl(const PointingContext & ctx, Vertex hub, const VertexSet & c, Vertex x, Vertex y)
        -> WeakPointingCertificate
    {
        const size_t n = ctx.tree->vertex_count();
        const auto & st = ctx.star_table;
        if (x == y)
            return identity_pointing(n, x, c);

        auto s = s_set(x, y, st);
        auto build = [&](const PartialBinary & overrides) {
            auto gamma = commutative_choice(c, st, overrides);
            for (auto & [pair, value] : gamma)
                if (! c.test(value))
                    throw ConstructionStuck("an S-set leaves the set");
            return extend_binary(*ctx.tree, ctx.order, hub, c, gamma, st);
        };
        auto alpha_of = [&](const OperationTable & phi, Vertex w) {
            vector<Vertex> alpha(n);
            for (Vertex u = 0; u < n; ++u)
                alpha[u] = c.test(u) ? phi(u, w) : u;
            return alpha;
        };

        if (s.elements.test(x) || s.elements.test(y)) {
            Vertex z = s.elements.test(x) ? x : y;
            auto phi = build({{{x, y}, z}});
            WeakPointingCertificate cert;
            cert.op = OperationExpr::leaf(phi);
            cert.x = VertexSet::from_members(n, {x, y});
            cert.y = singleton(n, z);
            cert.witnesses = {{z, z}, {z, z}};
            cert.alpha = alpha_of(phi, z);
            cert.alpha_domain = c;
            return verified(ctx, std::move(cert), "pair base case");
        }

        Vertex mid = st(x, y), x2 = st(x, mid), y2 = st(y, mid);
        auto phi = build({{{x, mid}, x2}, {{y, mid}, y2}});
        WeakPointingCertificate first;
        first.op = OperationExpr::leaf(phi);
        first.x = VertexSet::from_members(n, {x, y});
        first.y = VertexSet::from_members(n, {x2, y2});
        first.witnesses = {{mid, mid}, {mid, mid}};
        first.alpha = alpha_of(phi, mid);
        first.alpha_domain = c;
        first = verified(ctx, std::move(first), "pair step");

        auto rest = point_pair_impl(ctx, hub, c, x2, y2);
        auto result = compose(ctx, first, rest);
        if (! result.alpha)
            throw ConstructionStuck("composed pair certificate lost its alpha map");
        return result;
    }
}

auto treecsp::find_relative_absorption(const PointingContext & ctx, const VertexSet & c)
    -> std::optional<AbsorptionCertificate>
{
    if (c.count() <= 1)
        return std::nullopt;
    auto ops = ctx.known_ops();
    for (auto & sub : subsets_to_try(ctx, c))
        for (auto & op : ops) {
            if (! is_closed_under(sub, op.table()))
                continue;
            AbsorptionCertificate cert{c, sub, op};
            if (verify_absorption(cert))
                return cert;
        }
    return std::nullopt;
}

auto treecsp::point_pair(const PointingContext & ctx, Vertex hub, const VertexSet & c, Vertex x, Vertex y)
    -> WeakPointingCertificate
{
    check_neighbourhood(ctx, hub, c);
    if (! c.test(x) || ! c.test(y))
        throw PreconditionViolated("pair must lie in the set");
    return point_pair_impl(ctx, hub, c, x, y);
}

auto treecsp::build_pointing_for_neighborhood(const PointingContext & ctx, Vertex hub, const VertexSet & c,
    const std::optional<VertexSet> & x) -> WeakPointingCertificate
{
    check_neighbourhood(ctx, hub, c);
    VertexSet target = x ? *x : c;
    if (target.none() || ! target.is_subset_of(c))
        throw PreconditionViolated("pointed set must be a nonempty subset");
    const size_t n = c.size();

    auto members = target.members();
    if (members.size() == 1)
        return identity_pointing(n, members[0], c);

    // point the first two together, carry the rest along through alpha
    auto pair = point_pair_impl(ctx, hub, c, members[0], members[1]);
    auto & alpha = *pair.alpha;
    WeakPointingCertificate step = pair;
    step.x = target;
    step.y = VertexSet(n);
    for (auto v : members)
        step.y.set(alpha[v]);
    step = verified(ctx, std::move(step), "set step");

    auto rest = build_pointing_for_neighborhood(ctx, hub, c, step.y);
    return compose(ctx, step, rest);
}

auto treecsp::build_pointing_for_af(const PointingContext & ctx, const VertexSet & c) -> WeakPointingCertificate
{
    auto & tree = *ctx.tree;
    const size_t n = c.size();
    auto members = c.members();
    if (members.empty())
        throw PreconditionViolated("cannot point an empty set");
    bool in_a = std::all_of(members.begin(), members.end(), [&](Vertex v) { return tree.is_a(v); });
    bool in_b = std::all_of(members.begin(), members.end(), [&](Vertex v) { return tree.is_b(v); });
    if (! in_a && ! in_b)
        throw PreconditionViolated("set must lie within A or within B");
    if (members.size() == 1)
        return identity_pointing(n, members[0], c);

    auto dist = tree.template_distances(ctx.o);
    int k = dist[members[0]];
    for (auto v : members)
        if (dist[v] != k)
            throw DistanceNotUniform("members lie at different template distances from o");
    if (k == 0)
        throw DistanceNotUniform("o itself cannot be in a set of size > 1");
    if (k == 1)
        return build_pointing_for_neighborhood(ctx, ctx.o, c);

    auto d_set = e_neighborhood(tree, c, 1) & e_neighborhood(tree, singleton(n, ctx.o), static_cast<unsigned>(k - 1));
    auto d_members = d_set.members();
    if (d_members.size() == 1)
        return point_to_singleton_hub(ctx, d_members[0], c);

    // eta sends each member to its unique neighbour in D
    vector<Vertex> lift(n, 0);
    vector<char> has_lift(n, 0);
    for (auto v : members)
        for (auto d : tree.template_neighbours(v))
            if (d_set.test(d) && ! has_lift[d]) {
                lift[d] = v;
                has_lift[d] = 1;
            }

    auto on_d = point_to_singleton(ctx, d_set);
    Vertex d = static_cast<Vertex>(on_d.y.find_first());

    WeakPointingCertificate down;
    down.op = on_d.op;
    down.x = c;
    down.y = VertexSet(n);
    for (auto v : members)
        for (auto nb : tree.template_neighbours(v))
            if (nb == d)
                down.y.set(v);
    for (auto & w : on_d.witnesses) {
        vector<Vertex> lifted(w.size());
        for (size_t i = 0; i < w.size(); ++i) {
            if (! has_lift[w[i]])
                throw ConstructionStuck("a witness lies outside D");
            lifted[i] = lift[w[i]];
        }
        down.witnesses.push_back(std::move(lifted));
    }
    down = verified(ctx, std::move(down), "lifted pointing");

    auto fibre = point_to_singleton_hub(ctx, d, down.y);
    return compose(ctx, down, fibre);
}

auto treecsp::point_to_singleton_hub(const PointingContext & ctx, Vertex hub, const VertexSet & c)
    -> WeakPointingCertificate
{
    if (c.count() == 1)
        return identity_pointing(c.size(), static_cast<Vertex>(c.find_first()), c);
    if (auto absorbed = find_relative_absorption(ctx, c)) {
        auto step = verified(ctx, pointing_from_absorption(*absorbed), "absorption");
        return compose(ctx, step, point_to_singleton_hub(ctx, hub, absorbed->subset));
    }
    return build_pointing_for_neighborhood(ctx, hub, c);
}

auto treecsp::point_to_singleton(const PointingContext & ctx, const VertexSet & c) -> WeakPointingCertificate
{
    if (c.none())
        throw PreconditionViolated("cannot point an empty set");
    if (c.count() == 1)
        return identity_pointing(c.size(), static_cast<Vertex>(c.find_first()), c);
    if (auto absorbed = find_relative_absorption(ctx, c)) {
        auto step = verified(ctx, pointing_from_absorption(*absorbed), "absorption");
        return compose(ctx, step, point_to_singleton(ctx, absorbed->subset));
    }
    return build_pointing_for_af(ctx, c);
}
