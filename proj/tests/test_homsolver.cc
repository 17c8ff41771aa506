#include <doctest.h>

#include "oracle.hh"

#include <treecsp/errors.hh>
#include <treecsp/generate.hh>
#include <treecsp/homsolver.hh>
#include <treecsp/minpath.hh>
#include <treecsp/polysearch.hh>
#include <treecsp/spectree.hh>

#include <algorithm>

using namespace treecsp;

namespace
{
    auto edge() -> Digraph
    {
        return Digraph(2, {{0, 1}});
    }

    auto path(const char * s) -> Digraph
    {
        return OrientedPath(s).to_digraph();
    }

    // every map in lexicographic order (first vertex most significant)
    auto brute_all(const Digraph & x, const Digraph & h) -> std::vector<Homomorphism>
    {
        std::vector<Homomorphism> out;
        const auto nx = x.vertex_count(), nh = h.vertex_count();
        auto adj = oracle::matrix(h);
        Homomorphism m(nx, 0);
        while (true) {
            bool ok = true;
            for (auto [u, v] : x.edges())
                ok = ok && adj[m[u] * nh + m[v]];
            if (ok)
                out.push_back(m);
            std::size_t i = nx;
            while (i > 0 && ++m[i - 1] == nh)
                m[--i] = 0;
            if (i == 0)
                return out;
        }
    }
}

TEST_CASE("building instances")
{
    auto inst = build_instance(edge(), edge());
    CHECK(inst.var_count() == 2);
    CHECK(inst.constraints().size() == 1);

    auto sample = path("110110110001111");
    SpecialTree triad(canned_triad());
    auto big = build_instance(sample, triad.digraph());
    CHECK(big.var_count() == 16);
    CHECK(big.domain_size() == 39);

    auto pinned = build_instance(sample, triad.digraph(), {{0, 3}});
    CHECK(pinned.domain_count(0) == 1);
    CHECK(pinned.domain(0).test(3));
    CHECK_THROWS_AS(build_instance(edge(), edge(), {{0, 5}}), InvalidPin);
    CHECK_THROWS_AS(build_instance(edge(), edge(), {{4, 0}}), InvalidPin);
}

TEST_CASE("arc consistency examples")
{
    auto solved = build_instance(edge(), edge(), {{0, 0}, {1, 1}});
    auto ac = arc_consistency(solved);
    REQUIRE(ac);
    CHECK(ac->all_domains() == solved.all_domains());

    CHECK(! arc_consistency(build_instance(path("11"), edge())));
}

TEST_CASE("(2,3)-consistency examples")
{
    CHECK(consistency_23(build_instance(edge(), edge(), {{0, 0}, {1, 1}})));
    // directed triangle into a transitive tournament: AC cannot see it
    Digraph cyc(3, {{0, 1}, {1, 2}, {2, 0}});
    Digraph tt(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(! consistency_23(build_instance(cyc, tt)));
}

TEST_CASE("solver examples")
{
    auto id = solve_hom(edge(), edge());
    REQUIRE(id);
    CHECK(*id == Homomorphism{0, 1});
    CHECK(! solve_hom(path("11"), edge()));
    CHECK(! solve_hom(path("110110110001111"), SpecialTree(canned_triad()).digraph()));
    CHECK(solve_hom(Digraph(0, {}), edge()));
    CHECK(! solve_hom(Digraph(1, {}), Digraph(0, {})));

    // "10" is 0 -> 1 <- 2, so vertex 1 must land on the head
    auto pinned = solve_hom(path("10"), edge(), {{0, 0}});
    REQUIRE(pinned);
    CHECK(*pinned == Homomorphism{0, 1, 0});
    CHECK(! solve_hom(path("10"), edge(), {{1, 0}}));
    CHECK(! solve_hom(path("1"), edge(), {{0, 1}}));
}

TEST_CASE("node budget")
{
    Rng rng(1);
    auto x = random_digraph(rng, 12, 0.5);
    Digraph k4(4, {{0, 1}, {1, 0}, {0, 2}, {2, 0}, {0, 3}, {3, 0}, {1, 2}, {2, 1}, {1, 3}, {3, 1}, {2, 3}, {3, 2}});
    SearchOptions options;
    options.node_budget = 2;
    CHECK_THROWS_AS(solve_hom(x, k4, {}, options), BudgetExceeded);
}

TEST_CASE("enumeration examples")
{
    CHECK(enumerate_homs(edge(), edge()).size() == 1);
    auto h = path("1101");
    CHECK(enumerate_homs(Digraph(1, {}), h).size() == h.vertex_count());
    CHECK(enumerate_homs(path("10"), edge()) == brute_all(path("10"), edge()));
    CHECK(enumerate_homs(path("10"), edge(), 1).size() == 1);
}

TEST_CASE("property: solver, enumeration and brute force agree")
{
    Rng rng(1234);
    for (int t = 0; t < 200; ++t) {
        auto x = random_digraph(rng, 1 + rng.below(6), 0.15 + 0.1 * static_cast<double>(rng.below(4)), rng.chance(0.2));
        auto h = random_digraph(rng, 1 + rng.below(5), 0.2 + 0.15 * static_cast<double>(rng.below(4)), rng.chance(0.3));
        auto hom = solve_hom(x, h);
        auto all = enumerate_homs(x, h);
        CHECK(hom.has_value() == ! all.empty());
        CHECK(all == brute_all(x, h));
        if (hom) {
            CHECK(is_homomorphism(x, h, *hom));
            // the first in value order under the solver's variable order is
            // not necessarily lexicographically first, but must be listed
            CHECK(std::find(all.begin(), all.end(), *hom) != all.end());
        }
    }
}

TEST_CASE("property: arc consistency keeps every solution")
{
    Rng rng(77);
    for (int t = 0; t < 100; ++t) {
        auto x = random_digraph(rng, 2 + rng.below(5), 0.3);
        auto h = random_digraph(rng, 2 + rng.below(5), 0.4);
        auto inst = build_instance(x, h);
        auto ac = arc_consistency(inst);
        auto pair = consistency_23(inst);
        for (auto & m : enumerate_homs(x, h)) {
            REQUIRE(ac);
            REQUIRE(pair);
            for (Vertex v = 0; v < x.vertex_count(); ++v) {
                CHECK(ac->domain(v).test(m[v]));
                CHECK(pair->domain(v).test(m[v]));
                for (Vertex u = 0; u < x.vertex_count(); ++u)
                    if (u != v)
                        CHECK(pair->allowed(u, m[u], v, m[v]));
            }
        }
        if (! pair)
            CHECK(! solve_hom(x, h));
    }
}

TEST_CASE("property: (2,3)-consistency decides majority targets")
{
    Rng rng(4242);
    int targets = 0, empty = 0;
    for (int t = 0; t < 40 && targets < 10; ++t) {
        auto h = random_digraph(rng, 3 + rng.below(3), 0.35);
        if (! find_majority(h))
            continue;
        ++targets;
        for (int i = 0; i < 10; ++i) {
            auto x = random_digraph(rng, 3 + rng.below(5), 0.3);
            bool consistent = consistency_23(build_instance(x, h)).has_value();
            CHECK(consistent == solve_hom(x, h).has_value());
            empty += ! consistent;
        }
    }
    CHECK(targets == 10);
    CHECK(empty > 0);
}

TEST_CASE("determinism: repeated solves return the same witness")
{
    Rng rng(9);
    for (int t = 0; t < 30; ++t) {
        auto x = random_digraph(rng, 6, 0.3);
        auto h = random_digraph(rng, 6, 0.4);
        CHECK(solve_hom(x, h) == solve_hom(x, h));
        SearchOptions whole;
        whole.decompose = false;
        CHECK(solve_hom(x, h).has_value() == solve_hom(x, h, {}, whole).has_value());
    }
}
