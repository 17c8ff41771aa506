#include <doctest.h>

#include <treecsp/errors.hh>
#include <treecsp/generate.hh>
#include <treecsp/lemma_suite.hh>
#include <treecsp/lemmas.hh>
#include <treecsp/pointing.hh>
#include <treecsp/polysearch.hh>

#include <json.hpp>

#include <functional>
#include <optional>

using namespace treecsp;

namespace
{
    struct Setup
    {
        SpecialTreeSpec spec;
        OperationTable omega;
    };

    // small special trees with a WNU polymorphism on the whole tree
    auto setups(std::size_t count) -> std::vector<Setup>
    {
        std::vector<Setup> out;
        for (std::uint64_t seed = 1; seed < 200 && out.size() < count; ++seed) {
            auto spec = gen_random_special_tree(seed, 2 + seed % 3, 2 + seed / 3 % 3, 1 + static_cast<int>(seed % 2), 4);
            SpecialTree tree(spec);
            if (tree.vertex_count() > 20)
                continue;
            auto tau = find_wnu_on(tree.digraph(), 3, {tree.a_set(), tree.b_set()});
            if (! tau)
                continue;
            out.push_back({spec, extend_wnu(tree, *tau)});
        }
        return out;
    }

    // all tuples of {0..n-1}^k reachable from the diagonal in the underlying
    // graph of H^k, by a plain BFS over tuples
    auto bfs_delta(const Digraph & h, unsigned k) -> std::vector<char>
    {
        const auto n = h.vertex_count();
        std::size_t total = 1;
        for (unsigned i = 0; i < k; ++i)
            total *= n;
        std::vector<std::vector<Vertex>> adj(n);
        for (auto [u, v] : h.edges()) {
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
        auto up = [&](Vertex u, Vertex v) {
            for (auto [a, b] : h.edges())
                if (a == u && b == v)
                    return true;
            return false;
        };
        std::vector<char> seen(total, 0);
        std::vector<std::size_t> queue;
        for (Vertex x = 0; x < n; ++x) {
            std::size_t idx = 0;
            for (unsigned i = 0; i < k; ++i)
                idx = idx * n + x;
            seen[idx] = 1;
            queue.push_back(idx);
        }
        std::vector<Vertex> t(k), s(k);
        for (std::size_t q = 0; q < queue.size(); ++q) {
            auto rest = queue[q];
            for (unsigned i = k; i-- > 0;) {
                t[i] = static_cast<Vertex>(rest % n);
                rest /= n;
            }
            // neighbours: every coordinate steps the same way along an edge
            for (int forward = 0; forward < 2; ++forward) {
                std::function<void(unsigned, std::size_t)> walk = [&](unsigned i, std::size_t idx) {
                    if (i == k) {
                        if (! seen[idx]) {
                            seen[idx] = 1;
                            queue.push_back(idx);
                        }
                        return;
                    }
                    for (auto w : adj[t[i]])
                        if (forward ? up(t[i], w) : up(w, t[i]))
                            walk(i + 1, idx * n + w);
                };
                walk(0, 0);
            }
        }
        return seen;
    }
}

TEST_CASE("diagonal component of powers")
{
    SpecialTree edge(SpecialTreeSpec{1, 1, 1, {{0, 0, OrientedPath("1")}}});
    CHECK(delta_n(edge, 1).count() == 2);
    CHECK(delta_n(edge, 2).count() == 2);

    SpecialTree triad(canned_triad());
    CHECK(delta_n(triad, 1).count() == 39);
    for (unsigned n = 1; n <= 3; ++n)
        CHECK(top_bottom_in_delta(triad, n));
}

TEST_CASE("property: diagonal component matches a tuple BFS")
{
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        SpecialTree tree(gen_random_special_tree(seed, 2, 2, 2, 4));
        if (tree.vertex_count() > 14)
            continue;
        for (unsigned k = 1; k <= 2; ++k) {
            auto d = delta_n(tree, k);
            auto expected = bfs_delta(tree.digraph(), k);
            for (std::size_t i = 0; i < expected.size(); ++i)
                CHECK(d.test(i) == static_cast<bool>(expected[i]));
        }
    }
}

TEST_CASE("extending a WNU from the top and bottom")
{
    auto s = setups(6);
    REQUIRE(s.size() >= 3);
    for (auto & [spec, omega] : s) {
        SpecialTree tree(spec);
        CHECK(is_polymorphism(tree.digraph(), omega));
        CHECK(satisfies_wnu(omega));
        CHECK(is_idempotent(omega));
    }

    SpecialTree tree(s.front().spec);
    auto proj = OperationTable::projection(tree.vertex_count(), 3, 0);
    CHECK_THROWS_AS(extend_wnu(tree, proj), PreconditionViolated);
}

TEST_CASE("singleton absorber and order absorption")
{
    for (auto & [spec, omega] : setups(6)) {
        SpecialTree tree(spec);
        auto special = make_special(omega);
        auto o = find_singleton_absorber(tree, special.polymer);
        const auto n = tree.vertex_count();
        CHECK(o < spec.a_count + spec.b_count);
        auto e2 = e_neighborhood(tree, VertexSet::from_members(n, {o}), 2);
        e2.for_each([&](Vertex w) { CHECK(special.polymer(o, w) == o); });
        CHECK(verify_preceq_absorption(tree, o, special.polymer));
    }
}

TEST_CASE("commutative choices stay in S-sets")
{
    for (auto & [spec, omega] : setups(4)) {
        SpecialTree tree(spec);
        const auto n = tree.vertex_count();
        auto t = star(make_special(omega).polymer, n);
        auto gamma = commutative_choice(tree.a_set(), t);
        for (auto [pair, v] : gamma) {
            auto [c, d] = pair;
            CHECK(gamma.at({d, c}) == v);
            CHECK(s_set(c, d, t).elements.test(v));
        }
    }
}

TEST_CASE("binary extension and pointing certificates")
{
    std::size_t built = 0, pointed = 0;
    for (auto & [spec, omega] : setups(8)) {
        SpecialTree tree(spec);
        auto ctx = make_pointing_context(tree, omega);
        CHECK(is_special_polymer(ctx.special.polymer));
        for (Vertex hub = 0; hub < spec.a_count + spec.b_count; ++hub) {
            auto up = e_neighborhood(tree, VertexSet::from_members(tree.vertex_count(), {hub}), 1);
            VertexSet c(tree.vertex_count());
            up.for_each([&](Vertex v) {
                if (ctx.order.precedes(hub, v))
                    c.set(v);
            });
            if (c.count() < 2 || ! is_relative_subuniverse(ctx, c))
                continue;
            try {
                auto gamma = commutative_choice(c, ctx.star_table);
                auto b = extend_binary(tree, ctx.order, hub, c, gamma, ctx.star_table);
                CHECK(is_polymorphism(tree.digraph(), b));
                CHECK(is_idempotent(b));
                for (auto [pair, v] : gamma)
                    CHECK(b(pair.first, pair.second) == v);
                ++built;
            }
            catch (const ConstructionStuck &) {
            }
            try {
                auto cert = point_to_singleton_hub(ctx, hub, c);
                CHECK(verify_weak_pointing(cert));
                CHECK(cert.x == c);
                CHECK(cert.y.count() == 1);
                CHECK(is_polymorphism(tree.digraph(), cert.op));
                ++pointed;
            }
            catch (const ConstructionStuck &) {
            }
            catch (const ArityBudgetExceeded &) {
            }
        }
    }
    MESSAGE("binary extensions " << built << ", pointings " << pointed);
}

TEST_CASE("lemma suite reports")
{
    auto broken = canned_triad();
    broken.edges.pop_back();
    auto bad = verify_lemma_suite(broken, 3);
    CHECK(! bad.passed());
    REQUIRE(bad.find("spec"));

    auto report = verify_lemma_suite(setups(1).front().spec, 3);
    REQUIRE(report.find("top_bottom_in_diagonal_component"));
    CHECK(report.find("top_bottom_in_diagonal_component")->status == "pass");

    auto j = nlohmann::json::parse(report.to_json());
    CHECK(j["format_version"] == 1);
    CHECK(j["checks"].size() == report.checks.size());

    for (auto & [spec, omega] : setups(5)) {
        auto r = verify_lemma_suite(spec, 17);
        CHECK(r.wnu_found);
        CHECK(r.passed());
        for (auto & c : r.checks)
            CHECK_MESSAGE(c.status != "fail", c.name << ": " << c.detail);
        CHECK(r.to_json() == verify_lemma_suite(spec, 17).to_json());
    }
}
