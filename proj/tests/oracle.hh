#pragma once

// Brute-force reference implementations. They share nothing with the
// library beyond the Digraph container, so agreement is meaningful.

#include <treecsp/digraph.hh>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <vector>

namespace oracle
{
    using treecsp::Digraph;
    using treecsp::Vertex;

    // adjacency matrix, row-major
    inline auto matrix(const Digraph & g) -> std::vector<char>
    {
        const auto n = g.vertex_count();
        std::vector<char> m(n * n, 0);
        for (auto [u, v] : g.edges())
            m[u * n + v] = 1;
        return m;
    }

    /// Tries every map x -> h in turn.
    inline auto hom_exists(const Digraph & x, const Digraph & h) -> bool
    {
        const auto nx = x.vertex_count(), nh = h.vertex_count();
        if (nx == 0)
            return true;
        if (nh == 0)
            return false;
        auto adj = matrix(h);
        std::vector<Vertex> map(nx, 0);
        while (true) {
            bool ok = true;
            for (auto [u, v] : x.edges())
                if (! adj[map[u] * nh + map[v]]) {
                    ok = false;
                    break;
                }
            if (ok)
                return true;
            size_t i = 0;
            while (i < nx && ++map[i] == nh)
                map[i++] = 0;
            if (i == nx)
                return false;
        }
    }

    /// f preserves every edge of h, with f given as a flat table over
    /// tuples with the leftmost coordinate most significant.
    inline auto preserves(const Digraph & h, const std::vector<Vertex> & f, unsigned k) -> bool
    {
        const auto n = h.vertex_count();
        const auto & edges = h.edges();
        if (edges.empty())
            return true;
        auto adj = matrix(h);
        std::vector<size_t> pick(k, 0);
        while (true) {
            size_t s = 0, d = 0;
            for (unsigned i = 0; i < k; ++i) {
                s = s * n + edges[pick[i]].first;
                d = d * n + edges[pick[i]].second;
            }
            if (! adj[f[s] * n + f[d]])
                return false;
            unsigned i = 0;
            while (i < k && ++pick[i] == edges.size())
                pick[i++] = 0;
            if (i == k)
                return true;
        }
    }

    inline auto index_of(const std::vector<Vertex> & t, size_t n) -> size_t
    {
        size_t r = 0;
        for (auto v : t)
            r = r * n + v;
        return r;
    }

    inline auto idempotent(const std::vector<Vertex> & f, size_t n, unsigned k) -> bool
    {
        for (Vertex x = 0; x < n; ++x)
            if (f[index_of(std::vector<Vertex>(k, x), n)] != x)
                return false;
        return true;
    }

    // w(y,x,..,x) = w(x,y,x,..,x) = ... = w(x,..,x,y)
    inline auto wnu(const std::vector<Vertex> & f, size_t n, unsigned k) -> bool
    {
        if (! idempotent(f, n, k))
            return false;
        for (Vertex x = 0; x < n; ++x)
            for (Vertex y = 0; y < n; ++y) {
                std::set<Vertex> values;
                for (unsigned i = 0; i < k; ++i) {
                    std::vector<Vertex> t(k, x);
                    t[i] = y;
                    values.insert(f[index_of(t, n)]);
                }
                if (values.size() != 1)
                    return false;
            }
        return true;
    }

    inline auto majority(const std::vector<Vertex> & f, size_t n) -> bool
    {
        for (Vertex x = 0; x < n; ++x)
            for (Vertex y = 0; y < n; ++y)
                if (f[index_of({y, x, x}, n)] != x || f[index_of({x, y, x}, n)] != x || f[index_of({x, x, y}, n)] != x)
                    return false;
        return true;
    }

    // idempotent and constant on tuples with the same set of entries
    inline auto tsi(const std::vector<Vertex> & f, size_t n, unsigned k) -> bool
    {
        if (! idempotent(f, n, k))
            return false;
        std::vector<std::optional<Vertex>> by_set(size_t{1} << n);
        std::vector<Vertex> t(k, 0);
        for (size_t idx = 0; idx < f.size(); ++idx) {
            size_t rest = idx, mask = 0;
            for (unsigned i = k; i-- > 0;) {
                t[i] = static_cast<Vertex>(rest % n);
                rest /= n;
                mask |= size_t{1} << t[i];
            }
            auto & slot = by_set[mask];
            if (! slot)
                slot = f[idx];
            else if (*slot != f[idx])
                return false;
        }
        return true;
    }

    /// Whether some n^k table satisfies both predicates; every table is
    /// visited, cheap identity filter first.
    inline auto exists_table(size_t n, unsigned k, const std::function<bool(const std::vector<Vertex> &)> & identities,
        const Digraph & h) -> bool
    {
        size_t size = 1;
        for (unsigned i = 0; i < k; ++i)
            size *= n;
        std::vector<Vertex> f(size, 0);
        while (true) {
            if (identities(f) && preserves(h, f, k))
                return true;
            size_t i = 0;
            while (i < size && ++f[i] == n)
                f[i++] = 0;
            if (i == size)
                return false;
        }
    }

    /// Every digraph on n vertices, loops allowed, by edge mask.
    inline auto all_digraphs(size_t n) -> std::vector<Digraph>
    {
        std::vector<Digraph> result;
        const size_t pairs = n * n;
        for (uint64_t mask = 0; mask < (uint64_t{1} << pairs); ++mask) {
            std::vector<treecsp::Edge> edges;
            for (size_t p = 0; p < pairs; ++p)
                if (mask >> p & 1)
                    edges.emplace_back(static_cast<Vertex>(p / n), static_cast<Vertex>(p % n));
            result.emplace_back(n, std::move(edges));
        }
        return result;
    }

    /// Levels by plain relaxation over a connected digraph; nullopt when
    /// unbalanced.
    inline auto levels(const Digraph & g) -> std::optional<std::vector<int>>
    {
        const auto n = g.vertex_count();
        std::vector<int> lvl(n, 0);
        std::vector<char> seen(n, 0);
        if (n == 0)
            return lvl;
        std::vector<Vertex> stack{0};
        seen[0] = 1;
        while (! stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            for (auto [a, b] : g.edges()) {
                if (a == v && ! seen[b]) {
                    seen[b] = 1, lvl[b] = lvl[a] + 1, stack.push_back(b);
                }
                else if (b == v && ! seen[a]) {
                    seen[a] = 1, lvl[a] = lvl[b] - 1, stack.push_back(a);
                }
            }
        }
        for (auto [a, b] : g.edges())
            if (lvl[b] != lvl[a] + 1)
                return std::nullopt;
        int low = *std::min_element(lvl.begin(), lvl.end());
        for (auto & l : lvl)
            l -= low;
        return lvl;
    }
}
