#include <treecsp/digraph.hh>
#include <treecsp/errors.hh>

#include <algorithm>
#include <deque>
#include <limits>
#include <string>

using namespace treecsp;

using std::size_t;
using std::uint64_t;
using std::vector;

Digraph::Digraph(size_t vertex_count, vector<Edge> edges) :
    _n(vertex_count),
    _edges(std::move(edges))
{
    vector<Edge> sorted = _edges;
    for (auto & [u, v] : sorted)
        if (u >= _n || v >= _n)
            throw InvalidGraph("edge (" + std::to_string(u) + "," + std::to_string(v) + ") has an endpoint out of range");
    std::sort(sorted.begin(), sorted.end());
    if (auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end())
        throw InvalidGraph("duplicate edge (" + std::to_string(dup->first) + "," + std::to_string(dup->second) + ")");

    _out_start.assign(_n + 1, 0);
    _in_start.assign(_n + 1, 0);
    for (auto & [u, v] : sorted) {
        ++_out_start[u + 1];
        ++_in_start[v + 1];
    }
    for (size_t i = 0; i < _n; ++i) {
        _out_start[i + 1] += _out_start[i];
        _in_start[i + 1] += _in_start[i];
    }
    _out.resize(sorted.size());
    _in.resize(sorted.size());
    vector<size_t> out_fill(_out_start.begin(), _out_start.end() - 1), in_fill(_in_start.begin(), _in_start.end() - 1);
    for (auto & [u, v] : sorted) {
        _out[out_fill[u]++] = v;
        _in[in_fill[v]++] = u;
    }
    for (size_t i = 0; i < _n; ++i)
        std::sort(_in.begin() + _in_start[i], _in.begin() + _in_start[i + 1]);
}

auto Digraph::has_edge(Vertex u, Vertex v) const -> bool
{
    auto out = out_neighbours(u);
    return std::binary_search(out.begin(), out.end(), v);
}

auto Digraph::induced(const vector<Vertex> & keep) const -> Digraph
{
    vector<int64_t> index(_n, -1);
    for (size_t i = 0; i < keep.size(); ++i)
        index[keep[i]] = static_cast<int64_t>(i);
    vector<Edge> edges;
    for (auto & [u, v] : _edges)
        if (index[u] >= 0 && index[v] >= 0)
            edges.emplace_back(static_cast<Vertex>(index[u]), static_cast<Vertex>(index[v]));
    return Digraph(keep.size(), std::move(edges));
}

auto Digraph::reversed() const -> Digraph
{
    vector<Edge> edges;
    edges.reserve(_edges.size());
    for (auto & [u, v] : _edges)
        edges.emplace_back(v, u);
    return Digraph(_n, std::move(edges));
}

namespace treecsp
{
    auto operator==(const Digraph & a, const Digraph & b) -> bool
    {
        return a._n == b._n && a._out_start == b._out_start && a._out == b._out;
    }
}

namespace
{
    // Weak components as a vertex -> component id map, ids in order of
    // smallest member.
    auto component_ids(const Digraph & g, size_t & count) -> vector<size_t>
    {
        constexpr size_t unset = static_cast<size_t>(-1);
        vector<size_t> id(g.vertex_count(), unset);
        count = 0;
        vector<Vertex> stack;
        for (Vertex s = 0; s < g.vertex_count(); ++s) {
            if (id[s] != unset)
                continue;
            id[s] = count;
            stack.push_back(s);
            while (! stack.empty()) {
                Vertex v = stack.back();
                stack.pop_back();
                for (auto w : g.out_neighbours(v))
                    if (id[w] == unset) {
                        id[w] = count;
                        stack.push_back(w);
                    }
                for (auto w : g.in_neighbours(v))
                    if (id[w] == unset) {
                        id[w] = count;
                        stack.push_back(w);
                    }
            }
            ++count;
        }
        return id;
    }

    auto raw_levels(const Digraph & g, vector<int> & levels, vector<size_t> & comp, size_t & comp_count) -> void
    {
        comp = component_ids(g, comp_count);
        constexpr int unset = std::numeric_limits<int>::min();
        levels.assign(g.vertex_count(), unset);
        vector<Vertex> stack;
        for (Vertex s = 0; s < g.vertex_count(); ++s) {
            if (levels[s] != unset)
                continue;
            levels[s] = 0;
            stack.push_back(s);
            while (! stack.empty()) {
                Vertex v = stack.back();
                stack.pop_back();
                auto visit = [&](Vertex w, int want) {
                    if (levels[w] == unset) {
                        levels[w] = want;
                        stack.push_back(w);
                    }
                    else if (levels[w] != want)
                        throw NotBalanced("digraph is not balanced: conflicting levels at vertex " + std::to_string(w));
                };
                for (auto w : g.out_neighbours(v))
                    visit(w, levels[v] + 1);
                for (auto w : g.in_neighbours(v))
                    visit(w, levels[v] - 1);
            }
        }
    }
}

auto treecsp::compute_levels_per_component(const Digraph & g) -> LevelAssignment
{
    vector<int> levels;
    vector<size_t> comp;
    size_t comp_count = 0;
    raw_levels(g, levels, comp, comp_count);

    vector<int> minimum(comp_count, std::numeric_limits<int>::max());
    for (size_t v = 0; v < levels.size(); ++v)
        minimum[comp[v]] = std::min(minimum[comp[v]], levels[v]);

    LevelAssignment result;
    result.levels.resize(levels.size());
    for (size_t v = 0; v < levels.size(); ++v) {
        result.levels[v] = levels[v] - minimum[comp[v]];
        result.height = std::max(result.height, result.levels[v]);
    }
    return result;
}

auto treecsp::compute_levels(const Digraph & g) -> LevelAssignment
{
    if (! is_connected(g))
        throw InvalidGraph("compute_levels needs a connected digraph");
    return compute_levels_per_component(g);
}

auto treecsp::connected_components(const Digraph & g) -> vector<VertexSet>
{
    size_t count = 0;
    auto id = component_ids(g, count);
    vector<VertexSet> result(count, VertexSet(g.vertex_count()));
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        result[id[v]].set(v);
    return result;
}

auto treecsp::is_connected(const Digraph & g) -> bool
{
    size_t count = 0;
    component_ids(g, count);
    return count == 1;
}

auto treecsp::is_oriented_tree(const Digraph & g) -> bool
{
    return g.vertex_count() > 0 && g.edge_count() + 1 == g.vertex_count() && is_connected(g);
}

auto treecsp::checked_power(uint64_t base, unsigned exponent, uint64_t cap) -> std::optional<uint64_t>
{
    uint64_t result = 1;
    for (unsigned i = 0; i < exponent; ++i) {
        if (base != 0 && result > cap / base)
            return std::nullopt;
        result *= base;
    }
    if (result > cap)
        return std::nullopt;
    return result;
}

auto treecsp::encode_tuple(std::span<const Vertex> coords, size_t base) -> uint64_t
{
    uint64_t index = 0;
    for (auto c : coords)
        index = index * base + c;
    return index;
}

auto treecsp::decode_tuple(uint64_t index, size_t base, unsigned arity) -> vector<Vertex>
{
    vector<Vertex> coords(arity);
    for (unsigned i = arity; i-- > 0;) {
        coords[i] = static_cast<Vertex>(index % base);
        index /= base;
    }
    return coords;
}

namespace
{
    // Calls f(index) for every tuple in lists[0] x ... x lists[k-1].
    template <typename F>
    auto for_each_product(const vector<std::span<const Vertex>> & lists, size_t base, F && f) -> void
    {
        const size_t k = lists.size();
        for (auto & l : lists)
            if (l.empty())
                return;
        vector<size_t> pos(k, 0);
        while (true) {
            uint64_t index = 0;
            for (size_t i = 0; i < k; ++i)
                index = index * base + lists[i][pos[i]];
            f(index);
            size_t i = k;
            while (i > 0) {
                --i;
                if (++pos[i] < lists[i].size())
                    break;
                pos[i] = 0;
                if (i == 0)
                    return;
            }
            if (k == 0)
                return;
        }
    }
}

auto treecsp::for_each_power_edge(const Digraph & g, unsigned k,
    const std::function<void (uint64_t, uint64_t)> & f) -> void
{
    const auto & edges = g.edges();
    const size_t m = edges.size(), n = g.vertex_count();
    if (m == 0 || k == 0)
        return;
    vector<size_t> pos(k, 0);
    while (true) {
        uint64_t s = 0, t = 0;
        for (unsigned i = 0; i < k; ++i) {
            s = s * n + edges[pos[i]].first;
            t = t * n + edges[pos[i]].second;
        }
        f(s, t);
        unsigned i = k;
        while (true) {
            if (i == 0)
                return;
            --i;
            if (++pos[i] < m)
                break;
            pos[i] = 0;
        }
    }
}

auto treecsp::direct_power(const Digraph & g, unsigned n, uint64_t budget) -> Digraph
{
    if (n == 0)
        throw InvalidParams("direct_power needs n >= 1");
    auto size = checked_power(g.vertex_count(), n, budget);
    auto edge_total = checked_power(g.edge_count(), n, budget * 8);
    if (! size || ! edge_total)
        throw BudgetExceeded("direct power " + std::to_string(n) + " exceeds the tuple budget");
    vector<Edge> edges;
    edges.reserve(*edge_total);
    for_each_power_edge(g, n, [&](uint64_t s, uint64_t t) {
        edges.emplace_back(static_cast<Vertex>(s), static_cast<Vertex>(t));
    });
    return Digraph(*size, std::move(edges));
}

auto treecsp::diagonal_component(const Digraph & g, unsigned n, uint64_t budget) -> Bitset
{
    if (n == 0)
        throw InvalidParams("diagonal_component needs n >= 1");
    const size_t base = g.vertex_count();
    auto size = checked_power(base, n, budget);
    if (! size)
        throw BudgetExceeded("power " + std::to_string(n) + " exceeds the tuple budget");

    Bitset seen(*size);
    std::deque<uint64_t> queue;
    for (Vertex v = 0; v < base; ++v) {
        vector<Vertex> diag(n, v);
        auto idx = encode_tuple(diag, base);
        if (! seen.test(idx)) {
            seen.set(idx);
            queue.push_back(idx);
        }
    }

    vector<std::span<const Vertex>> outs(n), ins(n);
    while (! queue.empty()) {
        auto idx = queue.front();
        queue.pop_front();
        auto coords = decode_tuple(idx, base, n);
        for (unsigned i = 0; i < n; ++i) {
            outs[i] = g.out_neighbours(coords[i]);
            ins[i] = g.in_neighbours(coords[i]);
        }
        auto visit = [&](uint64_t w) {
            if (! seen.test(w)) {
                seen.set(w);
                queue.push_back(w);
            }
        };
        for_each_product(outs, base, visit);
        for_each_product(ins, base, visit);
    }
    return seen;
}
