#include <doctest.h>

#include "oracle.hh"

#include <treecsp/algebra.hh>
#include <treecsp/errors.hh>
#include <treecsp/generate.hh>
#include <treecsp/polysearch.hh>

using namespace treecsp;

namespace
{
    auto edge() -> Digraph
    {
        return Digraph(2, {{0, 1}});
    }

    auto boolean_majority() -> OperationTable
    {
        return OperationTable::from_function(2, 3, [](std::span<const Vertex> a) {
            return static_cast<Vertex>(a[0] + a[1] + a[2] >= 2);
        });
    }

    auto meet(std::size_t n) -> OperationTable
    {
        return OperationTable::from_function(n, 2, [](std::span<const Vertex> a) { return std::min(a[0], a[1]); });
    }

    auto full(std::size_t n) -> VertexSet
    {
        VertexSet s(n);
        s.fill();
        return s;
    }

    // WNU polymorphisms of random 4-vertex digraphs
    auto random_wnus(std::uint64_t seed, std::size_t count) -> std::vector<std::pair<Digraph, OperationTable>>
    {
        Rng rng(seed);
        std::vector<std::pair<Digraph, OperationTable>> out;
        for (int t = 0; t < 400 && out.size() < count; ++t) {
            auto h = random_digraph(rng, 4, 0.3 + 0.1 * static_cast<double>(rng.below(3)));
            if (auto w = find_wnu(h, 3))
                out.emplace_back(h, *w);
        }
        return out;
    }
}

TEST_CASE("operation tables")
{
    CHECK_THROWS_AS(OperationTable(2, 2, {0, 1, 2, 0}), InvalidParams);
    CHECK_THROWS_AS(OperationTable(2, 2, {0, 1, 1}), InvalidParams);
    CHECK_THROWS_AS(OperationTable(100, 10), BudgetExceeded);
    auto p = OperationTable::projection(3, 2, 1);
    CHECK(p(2, 1) == 1);
    CHECK_THROWS_AS(OperationTable::projection(3, 2, 2), InvalidParams);
}

TEST_CASE("polymorphism examples")
{
    CHECK(is_polymorphism(edge(), OperationTable::projection(2, 3, 1)));
    CHECK(is_polymorphism(edge(), boolean_majority()));
    CHECK(! is_polymorphism(edge(), OperationTable(2, 2, {0, 0, 0, 0})));
    CHECK_THROWS_AS(is_polymorphism(edge(), OperationTable::projection(3, 1, 0)), InvalidParams);
}

TEST_CASE("property: composed expressions evaluate blockwise")
{
    Rng rng(12);
    for (std::size_t n = 2; n <= 3; ++n)
        for (unsigned kg = 1; kg <= 3; ++kg)
            for (unsigned kf = 1; kf * kg <= 6; ++kf) {
                auto random_table = [&](unsigned k) {
                    auto t = OperationTable(n, k);
                    for (std::size_t i = 0; i < t.size(); ++i)
                        t.set(i, static_cast<Vertex>(rng.below(n)));
                    return t;
                };
                auto g = random_table(kg), f = random_table(kf);
                auto e = OperationExpr::compose(OperationExpr::leaf(g), OperationExpr::leaf(f));
                CHECK(e.arity() == kg * kf);
                auto table = e.materialize();
                std::vector<Vertex> args(kg * kf, 0);
                for (std::size_t idx = 0; idx < table.size(); ++idx) {
                    auto rest = idx;
                    for (std::size_t i = args.size(); i-- > 0;) {
                        args[i] = static_cast<Vertex>(rest % n);
                        rest /= n;
                    }
                    std::vector<Vertex> inner(kg);
                    for (unsigned b = 0; b < kg; ++b)
                        inner[b] = f(std::span<const Vertex>(args).subspan(b * kf, kf));
                    auto expected = g(inner);
                    CHECK(e.evaluate(args) == expected);
                    CHECK(table.at(idx) == expected);
                }
            }
}

TEST_CASE("arity budget on expressions")
{
    auto e = OperationExpr::leaf(boolean_majority());
    for (int i = 0; i < 10; ++i)
        e = OperationExpr::compose(e, OperationExpr::leaf(boolean_majority()));
    std::vector<Vertex> args(3, 0);
    CHECK_THROWS_AS(e.evaluate(args, 100), ArityBudgetExceeded);
}

TEST_CASE("binary polymer")
{
    CHECK(binary_polymer(boolean_majority()) == OperationTable::projection(2, 2, 0));
    CHECK_THROWS_AS(binary_polymer(OperationTable::projection(2, 3, 0)), NotWNU);
    for (auto & [h, w] : random_wnus(3, 6)) {
        auto p = binary_polymer(w);
        CHECK(is_idempotent(p));
        CHECK(is_polymorphism(h, p));
        for (Vertex x = 0; x < 4; ++x)
            for (Vertex y = 0; y < 4; ++y) {
                CHECK(w(x, x, y) == p(x, y));
                CHECK(w(x, y, x) == p(x, y));
                CHECK(w(y, x, x) == p(x, y));
            }
    }
}

TEST_CASE("special polymers")
{
    auto maj = make_special(boolean_majority());
    CHECK(maj.copies == 1);
    CHECK(maj.polymer == OperationTable::projection(2, 2, 0));
    CHECK(is_special_polymer(maj.polymer));

    for (auto & [h, w] : random_wnus(5, 8)) {
        auto s = make_special(w);
        CHECK(is_special_polymer(s.polymer));
        CHECK(is_polymorphism(h, s.polymer));
        for (Vertex x = 0; x < 4; ++x)
            for (Vertex y = 0; y < 4; ++y)
                CHECK(s.base_polymer(x, s.polymer(x, y)) == s.polymer(x, y));
        CHECK(s.wnu.arity() == [&] {
            std::uint64_t a = 1;
            for (std::size_t i = 0; i < s.copies; ++i)
                a *= 3;
            return a;
        }());
        if (s.wnu.arity() <= 81)
            for (Vertex x = 0; x < 4; ++x)
                for (Vertex y = 0; y < 4; ++y) {
                    std::vector<Vertex> args(s.wnu.arity(), x);
                    args.back() = y;
                    CHECK(s.wnu.evaluate(args) == s.polymer(x, y));
                }
        if (s.copies == 1)
            CHECK(s.polymer == binary_polymer(w));
    }
}

TEST_CASE("star")
{
    CHECK(star(OperationTable::projection(3, 2, 0), 3) == OperationTable::projection(3, 2, 0));
    auto second = OperationTable::projection(3, 2, 1);
    CHECK(star(second, 3) == second);
    for (auto & [h, w] : random_wnus(9, 4)) {
        auto t = star(make_special(w).polymer, 4);
        CHECK(is_idempotent(t));
        CHECK(is_polymorphism(h, t));
    }
}

TEST_CASE("closure")
{
    std::vector<OperationExpr> ops = {OperationExpr::leaf(boolean_majority())};
    CHECK(closure(VertexSet::from_members(2, {1}), ops) == VertexSet::from_members(2, {1}));
    CHECK(closure(full(2), ops) == full(2));

    // meet semilattice: 0 below the incomparable 1 and 2
    auto m = OperationTable::from_function(3, 2, [](std::span<const Vertex> a) {
        return a[0] == a[1] ? a[0] : Vertex{0};
    });
    auto c = closure(VertexSet::from_members(3, {1, 2}), {OperationExpr::leaf(m)});
    CHECK(c == full(3));
    CHECK(is_closed_under(c, m));
}

TEST_CASE("S-sets")
{
    auto first = OperationTable::projection(3, 2, 0);
    auto s = s_set(0, 2, first);
    CHECK(s.elements == VertexSet::from_members(3, {0, 2}));
    for (auto & [v, term] : s.terms) {
        CHECK(term.contains_x());
        CHECK(term.contains_y());
        CHECK(term.evaluate(first, 0, 2) == v);
    }

    for (auto & [h, w] : random_wnus(21, 5)) {
        auto t = star(make_special(w).polymer, 4);
        for (Vertex c = 0; c < 4; ++c) {
            CHECK(s_set(c, c, t).elements == VertexSet::from_members(4, {c}));
            for (Vertex d = 0; d < 4; ++d) {
                auto sc = s_set(c, d, t);
                CHECK(sc.elements == s_set(d, c, t).elements);
                auto with_ends = sc.elements;
                with_ends.set(c);
                with_ends.set(d);
                CHECK(is_closed_under(sc.elements, t));
                CHECK(is_closed_under(with_ends, t));
                CHECK(sc.terms.size() == sc.elements.count());
                for (auto & [v, term] : sc.terms)
                    CHECK(term.to_table(t)(c, d) == v);
            }
        }
    }
}

TEST_CASE("absorption")
{
    auto a = full(2);
    auto op = OperationExpr::leaf(meet(2));
    CHECK(verify_absorption({a, a, op}));
    CHECK(verify_absorption({a, VertexSet::from_members(2, {0}), op}));
    CHECK(! verify_absorption({a, VertexSet::from_members(2, {1}), op}));
    CHECK(! verify_absorption({a, VertexSet(2), op}));
}

TEST_CASE("property: singleton absorption through the polymer matches the full check")
{
    for (auto & [h, w] : random_wnus(44, 10)) {
        auto p = binary_polymer(w);
        Rng rng(h.edge_count());
        for (int t = 0; t < 6; ++t) {
            auto o = static_cast<Vertex>(rng.below(4));
            auto sup = VertexSet::from_members(4, {o});
            for (Vertex v = 0; v < 4; ++v)
                if (rng.chance(0.5))
                    sup.set(v);
            auto closed = closure(sup, {OperationExpr::leaf(w)});
            CHECK(singleton_absorbs_via_wnu(p, o, closed)
                == verify_absorption({closed, VertexSet::from_members(4, {o}), OperationExpr::leaf(w)}));
        }
    }
}

TEST_CASE("weak pointing examples")
{
    WeakPointingCertificate single;
    single.op = OperationExpr::leaf(boolean_majority());
    single.x = single.y = VertexSet::from_members(2, {1});
    single.witnesses = {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}};
    CHECK(verify_weak_pointing(single));

    WeakPointingCertificate m;
    m.op = OperationExpr::leaf(meet(2));
    m.x = full(2);
    m.y = VertexSet::from_members(2, {0});
    m.witnesses = {{1, 0}, {0, 1}};
    CHECK(verify_weak_pointing(m));

    auto proj = m;
    proj.op = OperationExpr::leaf(OperationTable::projection(2, 2, 0));
    CHECK(! verify_weak_pointing(proj));

    auto id = identity_pointing(2, 0, full(2));
    CHECK(verify_weak_pointing(id));
}

TEST_CASE("composing pointing certificates")
{
    WeakPointingCertificate m;
    m.op = OperationExpr::leaf(meet(2));
    m.x = full(2);
    m.y = VertexSet::from_members(2, {0});
    m.witnesses = {{1, 0}, {0, 1}};

    WeakPointingCertificate m0 = m;
    m0.x = VertexSet::from_members(2, {0});

    auto chained = compose_pointing(m, m0);
    CHECK(chained.x == full(2));
    CHECK(chained.y == VertexSet::from_members(2, {0}));
    CHECK(chained.op.arity() == 4);
    CHECK(verify_weak_pointing(chained));

    auto id = identity_pointing(2, 0, VertexSet::from_members(2, {0}));
    auto kept = compose_pointing(id, m0);
    CHECK(verify_weak_pointing(kept));
    CHECK(kept.x == VertexSet::from_members(2, {0}));

    auto bad = m;
    bad.witnesses = {{1, 1}, {1, 1}};
    CHECK_THROWS_AS(compose_pointing(bad, m0), PreconditionViolated);
    CHECK_THROWS_AS(compose_pointing(m, m0, 2), ArityBudgetExceeded);
}

TEST_CASE("property: composed meet certificates on chains verify")
{
    // meet on a 4-chain points any set to its minimum
    for (unsigned mask = 3; mask < 16; ++mask) {
        if (__builtin_popcount(mask) < 2)
            continue;
        auto x = VertexSet(4);
        for (Vertex v = 0; v < 4; ++v)
            if (mask >> v & 1)
                x.set(v);
        auto low = static_cast<Vertex>(x.find_first());
        WeakPointingCertificate f;
        f.op = OperationExpr::leaf(meet(4));
        f.x = x;
        f.y = VertexSet::from_members(4, {low});
        f.witnesses = {{3, low}, {low, 3}};
        REQUIRE(verify_weak_pointing(f));
        WeakPointingCertificate g = f;
        g.x = f.y;
        auto c = compose_pointing(f, g);
        CHECK(verify_weak_pointing(c));
        CHECK(c.witnesses.size() == 4);
    }
}
