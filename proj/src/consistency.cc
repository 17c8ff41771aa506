#include <treecsp/homsolver.hh>

using namespace treecsp;

using std::size_t;
using std::vector;

auto PairFamily::allowed(size_t u, Vertex a, size_t v, Vertex b) const -> bool
{
    if (u == v)
        return a == b && _domains[u].test(a);
    return row(u, a, v).test(b);
}

auto treecsp::consistency_23(const CspInstance & inst) -> std::optional<PairFamily>
{
    const size_t n = inst.var_count(), d = inst.domain_size();
    PairFamily f;
    f._vars = n;
    f._values = d;
    f._domains.reserve(n);
    for (size_t u = 0; u < n; ++u)
        f._domains.push_back(inst.domain(u));
    f._rows.assign(n * n * d, Bitset(d));

    auto row = [&](size_t u, size_t a, size_t v) -> Bitset & { return f._rows[(u * n + v) * d + a]; };

    for (size_t u = 0; u < n; ++u)
        for (size_t v = 0; v < n; ++v)
            if (u != v)
                f._domains[u].for_each([&](size_t a) { row(u, a, v) = f._domains[v]; });

    for (auto & c : inst.constraints()) {
        auto & r = inst.relations()[c.relation];
        for (size_t a = 0; a < d; ++a) {
            Bitset fwd(d), bwd(d);
            std::copy(r.forward(static_cast<Vertex>(a)), r.forward(static_cast<Vertex>(a)) + r.right_words(), fwd.data());
            std::copy(r.backward(static_cast<Vertex>(a)), r.backward(static_cast<Vertex>(a)) + r.left_words(), bwd.data());
            row(c.u, a, c.v).intersect_with(fwd);
            row(c.v, a, c.u).intersect_with(bwd);
        }
    }

    auto remove_pair = [&](size_t u, size_t a, size_t v, size_t b) {
        row(u, a, v).reset(b);
        row(v, b, u).reset(a);
    };

    bool changed = true;
    while (changed) {
        changed = false;

        // unary projections
        for (size_t u = 0; u < n; ++u) {
            vector<size_t> dropped;
            f._domains[u].for_each([&](size_t a) {
                for (size_t v = 0; v < n; ++v)
                    if (v != u && row(u, a, v).none()) {
                        dropped.push_back(a);
                        return;
                    }
            });
            for (auto a : dropped) {
                f._domains[u].reset(a);
                for (size_t v = 0; v < n; ++v) {
                    if (v == u)
                        continue;
                    row(u, a, v).for_each([&](size_t b) { row(v, b, u).reset(a); });
                    row(u, a, v).clear();
                }
                changed = true;
            }
            if (f._domains[u].none())
                return std::nullopt;
        }

        // extension of every pair to every third variable
        for (size_t u = 0; u < n; ++u)
            for (size_t v = u + 1; v < n; ++v) {
                vector<std::pair<size_t, size_t>> doomed;
                f._domains[u].for_each([&](size_t a) {
                    row(u, a, v).for_each([&](size_t b) {
                        for (size_t w = 0; w < n; ++w) {
                            if (w == u || w == v)
                                continue;
                            if (! row(u, a, w).intersects(row(v, b, w))) {
                                doomed.emplace_back(a, b);
                                return;
                            }
                        }
                    });
                });
                for (auto [a, b] : doomed)
                    remove_pair(u, a, v, b);
                if (! doomed.empty())
                    changed = true;
            }
    }
    return f;
}
