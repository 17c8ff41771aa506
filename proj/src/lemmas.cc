#include <treecsp/lemmas.hh>
#include <treecsp/errors.hh>

#include <algorithm>

using namespace treecsp;

using std::size_t;
using std::string;
using std::to_string;
using std::uint64_t;
using std::vector;

auto treecsp::delta_n(const SpecialTree & tree, unsigned n, uint64_t budget) -> Bitset
{
    return diagonal_component(tree.digraph(), n, budget);
}

auto treecsp::top_bottom_in_delta(const SpecialTree & tree, unsigned n, uint64_t budget) -> bool
{
    auto delta = delta_n(tree, n, budget);
    const size_t size = tree.vertex_count();
    for (auto side : {tree.a_set(), tree.b_set()}) {
        auto members = side.members();
        vector<size_t> pos(n, 0);
        vector<Vertex> t(n);
        while (true) {
            for (unsigned i = 0; i < n; ++i)
                t[i] = members[pos[i]];
            if (! delta.test(encode_tuple(t, size)))
                return false;
            unsigned i = n;
            while (i > 0 && ++pos[i - 1] == members.size())
                pos[--i] = 0;
            if (i == 0)
                break;
        }
    }
    return true;
}

auto treecsp::extend_wnu(const SpecialTree & tree, const OperationTable & tau, const EdgeOrder & edge_order)
    -> OperationTable
{
    const unsigned n = tau.arity();
    const size_t size = tree.vertex_count();
    const auto & spec = tree.spec();
    if (n < 3)
        throw PreconditionViolated("extend_wnu needs arity at least 3");
    if (tau.base_size() != size)
        throw PreconditionViolated("operation base size differs from the tree");
    if (! is_idempotent(tau) || ! is_polymorphism(tree.digraph(), tau))
        throw PreconditionViolated("extend_wnu needs an idempotent polymorphism");
    if (! satisfies_wnu_on(tau, tree.a_set()) || ! satisfies_wnu_on(tau, tree.b_set()))
        throw PreconditionViolated("extend_wnu needs a WNU on A and on B");

    vector<size_t> rank(spec.edges.size());
    if (edge_order.empty())
        for (size_t e = 0; e < rank.size(); ++e)
            rank[e] = e;
    else {
        if (edge_order.size() != rank.size())
            throw PreconditionViolated("edge order needs one rank per template edge");
        rank = edge_order;
        auto sorted = rank;
        std::sort(sorted.begin(), sorted.end());
        for (size_t e = 0; e < sorted.size(); ++e)
            if (sorted[e] != e)
                throw PreconditionViolated("edge order must be a permutation");
    }

    // position of interior vertices in the linear order; template vertices sort last
    vector<uint64_t> key(size, UINT64_MAX);
    for (Vertex v = 0; v < size; ++v) {
        auto & r = tree.role(v);
        if (r.kind == RoleKind::Interior)
            key[v] = rank[r.index] * (size + 1) + r.position;
    }
    auto order_min = [&](const vector<Vertex> & x) {
        return *std::min_element(x.begin(), x.end(), [&](Vertex a, Vertex b) { return key[a] < key[b]; });
    };

    auto delta = delta_n(tree, n);
    OperationTable result(size, n);
    vector<Vertex> x(n, 0), moved(n);

    // the index of the one coordinate whose label differs from all others
    auto odd_one_out = [&](auto label) -> std::optional<unsigned> {
        for (unsigned i = 0; i < n; ++i) {
            auto other = label(x[i == 0 ? 1 : 0]);
            if (label(x[i]) == other)
                continue;
            bool rest_equal = true;
            for (unsigned j = 0; j < n; ++j)
                if (j != i && label(x[j]) != other)
                    rest_equal = false;
            if (rest_equal)
                return i;
        }
        return std::nullopt;
    };

    for (size_t idx = 0; idx < result.size(); ++idx) {
        bool all_a = std::all_of(x.begin(), x.end(), [&](Vertex v) { return tree.is_a(v); });
        bool all_b = std::all_of(x.begin(), x.end(), [&](Vertex v) { return tree.is_b(v); });
        Vertex value;
        if (all_a || all_b)
            value = tau.at(idx);
        else if (delta.test(idx)) {
            // tuples here are interior in every coordinate
            auto edge = [&](Vertex v) { return tree.role(v).index; };
            bool one_path = std::all_of(x.begin(), x.end(), [&](Vertex v) { return edge(v) == edge(x[0]); });
            if (one_path)
                value = order_min(x);
            else if (auto i = odd_one_out(edge)) {
                moved[0] = x[*i];
                for (unsigned j = 0, out = 1; j < n; ++j)
                    if (j != *i)
                        moved[out++] = x[j];
                value = tau(moved);
            }
            else
                value = tau.at(idx);
        }
        else {
            auto level = [&](Vertex v) { return tree.level(v); };
            bool one_level = std::all_of(x.begin(), x.end(), [&](Vertex v) { return level(v) == level(x[0]); });
            if (one_level)
                value = order_min(x);
            else if (auto i = odd_one_out(level))
                value = x[*i];
            else
                value = x[0];
        }
        result.set(idx, value);

        for (unsigned i = n; i-- > 0;) {
            if (++x[i] < size)
                break;
            x[i] = 0;
        }
    }

    if (! is_polymorphism(tree.digraph(), result) || ! satisfies_wnu(result))
        throw Error("internal: extended operation is not a WNU polymorphism");
    return result;
}

auto treecsp::find_singleton_absorber(const SpecialTree & tree, const OperationTable & polymer) -> Vertex
{
    const size_t top = tree.spec().a_count + tree.spec().b_count;
    for (Vertex u = 0; u < top; ++u) {
        VertexSet single(tree.vertex_count());
        single.set(u);
        if (singleton_absorbs_via_wnu(polymer, u, e_neighborhood(tree, single, 2)))
            return u;
    }
    throw NoneFound("no template vertex absorbs its second neighbourhood; the polymer is not special or the tree is not Taylor");
}

auto treecsp::verify_preceq_absorption(const SpecialTree & tree, Vertex o, const OperationTable & polymer) -> bool
{
    RootedOrder order(tree.digraph(), o);
    for (auto side : {tree.a_set(), tree.b_set()}) {
        auto members = side.members();
        for (auto a : members)
            for (auto a2 : members)
                if (order.preceq(a, a2) && polymer(a, a2) != a)
                    return false;
    }
    return true;
}

auto treecsp::vertices_above(const SpecialTree & tree, const RootedOrder & order, Vertex hub, const VertexSet & c)
    -> vector<Vertex>
{
    auto side = tree.is_a(hub) ? tree.a_set() : tree.b_set();
    vector<Vertex> result;
    for (auto d : side.members()) {
        bool above = false;
        c.for_each([&](size_t x) {
            if (order.precedes(static_cast<Vertex>(x), d))
                above = true;
        });
        if (above)
            result.push_back(d);
    }
    return result;
}

auto treecsp::verify_star_absorbs(const SpecialTree & tree, const RootedOrder & order, Vertex hub, const VertexSet & c,
    const OperationTable & star_table) -> bool
{
    for (auto d : vertices_above(tree, order, hub, c))
        if (star_table(hub, d) != hub || star_table(d, hub) != hub)
            return false;
    return true;
}

auto treecsp::verify_terms_absorb(const SpecialTree & tree, const RootedOrder & order, Vertex hub, const VertexSet & c,
    const OperationTable & star_table) -> bool
{
    auto above = vertices_above(tree, order, hub, c);
    auto members = c.members();
    for (auto x : members)
        for (auto y : members) {
            auto s = s_set(x, y, star_table);
            for (auto & [value, term] : s.terms)
                for (auto d : above)
                    if (term.evaluate(star_table, hub, d) != hub || term.evaluate(star_table, d, hub) != hub)
                        return false;
        }
    return true;
}

auto treecsp::commutative_choice(const VertexSet & c, const OperationTable & star_table, const PartialBinary & overrides)
    -> PartialBinary
{
    PartialBinary gamma;
    auto members = c.members();
    for (size_t i = 0; i < members.size(); ++i)
        for (size_t j = i; j < members.size(); ++j) {
            Vertex x = members[i], y = members[j];
            Vertex value;
            if (auto it = overrides.find({x, y}); it != overrides.end())
                value = it->second;
            else if (auto it2 = overrides.find({y, x}); it2 != overrides.end())
                value = it2->second;
            else
                value = x == y ? x : static_cast<Vertex>(s_set(x, y, star_table).elements.find_first());
            gamma[{x, y}] = value;
            gamma[{y, x}] = value;
        }
    return gamma;
}

auto treecsp::extend_binary(const SpecialTree & tree, const RootedOrder & order, Vertex hub, const VertexSet & c,
    const PartialBinary & gamma, const OperationTable & star_table) -> OperationTable
{
    const size_t size = tree.vertex_count();
    if (! tree.is_template_vertex(hub))
        throw PreconditionViolated("hub must be a template vertex");
    auto members = c.members();
    if (members.empty())
        throw PreconditionViolated("extend_binary needs a nonempty set");
    const auto & nbrs = tree.template_neighbours(hub);
    for (auto x : members) {
        if (! std::binary_search(nbrs.begin(), nbrs.end(), x))
            throw PreconditionViolated("set must lie in the template neighbourhood of the hub");
        if (! order.precedes(hub, x))
            throw PreconditionViolated("set must lie above the hub");
    }

    // phi_{c,c'} per ordered pair, as tables
    const size_t m = members.size();
    vector<OperationTable> phi(m * m);
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) {
            Vertex x = members[i], y = members[j];
            auto it = gamma.find({x, y});
            if (it == gamma.end())
                throw PreconditionViolated("gamma undefined at (" + to_string(x) + ", " + to_string(y) + ")");
            auto s = s_set(x, y, star_table);
            auto term = s.terms.find(it->second);
            if (term == s.terms.end())
                throw PreconditionViolated("gamma(" + to_string(x) + ", " + to_string(y) + ") = " + to_string(it->second)
                    + " lies outside the S-set");
            phi[i * m + j] = term->second.to_table(star_table);
        }

    // which member's branch each vertex is in: strictly between hub and c, or above c
    vector<int> branch(size, -1);
    for (Vertex v = 0; v < size; ++v)
        for (size_t i = 0; i < m; ++i)
            if ((order.precedes(hub, v) && order.precedes(v, members[i])) || order.preceq(members[i], v))
                branch[v] = static_cast<int>(i);

    auto result = OperationTable::from_function(size, 2, [&](std::span<const Vertex> xy) {
        Vertex x = xy[0], y = xy[1];
        if (branch[x] >= 0 && branch[y] >= 0 && tree.level(x) == tree.level(y))
            return phi[static_cast<size_t>(branch[x]) * m + static_cast<size_t>(branch[y])](x, y);
        return star_table(x, y);
    });

    for (auto x : members)
        for (auto y : members)
            if (result(x, y) != gamma.at({x, y}))
                throw Error("internal: extension disagrees with gamma");
    if (! is_idempotent(result))
        throw Error("internal: extension is not idempotent");
    if (! is_polymorphism(tree.digraph(), result))
        throw ConstructionStuck("binary extension is not a polymorphism; the set is not absorption-free");
    return result;
}
