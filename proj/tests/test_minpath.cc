#include <doctest.h>

#include <treecsp/errors.hh>
#include <treecsp/generate.hh>
#include <treecsp/minpath.hh>

#include <algorithm>
#include <optional>

using namespace treecsp;

namespace
{
    // edge between positions u and w of p, oriented u -> w
    auto has_arc(const OrientedPath & p, std::size_t u, std::size_t w) -> bool
    {
        if (w == u + 1)
            return p.forward(u);
        if (u == w + 1)
            return ! p.forward(w);
        return false;
    }

    // all position maps, endpoint preserving and onto
    auto brute_onto(const OrientedPath & q, const OrientedPath & p) -> bool
    {
        const auto nq = q.vertex_count(), np = p.vertex_count();
        std::vector<std::size_t> m(nq, 0);
        while (true) {
            bool ok = m.front() == 0 && m.back() == np - 1;
            for (std::size_t i = 0; ok && i + 1 < nq; ++i)
                ok = q.forward(i) ? has_arc(p, m[i], m[i + 1]) : has_arc(p, m[i + 1], m[i]);
            if (ok) {
                std::vector<char> hit(np, 0);
                for (auto v : m)
                    hit[v] = 1;
                if (std::find(hit.begin(), hit.end(), 0) == hit.end())
                    return true;
            }
            std::size_t i = 0;
            while (i < nq && ++m[i] == np)
                m[i++] = 0;
            if (i == nq)
                return false;
        }
    }

    auto random_path(Rng & rng, std::size_t max_len) -> OrientedPath
    {
        auto len = 1 + rng.below(max_len);
        std::string s;
        for (std::size_t i = 0; i < len; ++i)
            s += rng.chance(0.6) ? '1' : '0';
        return OrientedPath(s);
    }
}

TEST_CASE("minimality examples")
{
    CHECK(is_minimal(OrientedPath("1")));
    OrientedPath sample("110110110001111");
    CHECK(is_minimal(sample));
    CHECK(sample.height() == 5);
    CHECK(! is_minimal(OrientedPath("101")));
    CHECK(! is_minimal(OrientedPath("0")));
    CHECK_THROWS_AS(OrientedPath("12"), ParseError);
}

TEST_CASE("net length")
{
    CHECK(net_length(OrientedPath("1")) == 1);
    CHECK(net_length(OrientedPath("110110110001111")) == 5);
    CHECK(net_length(OrientedPath("10")) == 0);
}

TEST_CASE("onto homomorphisms between paths")
{
    OrientedPath p("11011");
    auto id = path_onto_hom(p, p);
    REQUIRE(id);
    CHECK(*id == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});
    CHECK(! path_onto_hom(OrientedPath("11"), OrientedPath("1")));
    CHECK(is_onto_hom(p, p, *id));
    CHECK(! is_onto_hom(p, p, {0, 1, 2, 3, 4, 4}));
}

TEST_CASE("property: onto check agrees with enumeration of position maps")
{
    Rng rng(2);
    int found = 0;
    for (int t = 0; t < 300; ++t) {
        auto q = random_path(rng, 7);
        auto p = random_path(rng, t % 2 ? 4 : 3);
        auto m = path_onto_hom(q, p);
        bool expected = brute_onto(q, p);
        CHECK(m.has_value() == expected);
        if (m) {
            CHECK(is_onto_hom(q, p, *m));
            ++found;
        }
    }
    CHECK(found > 0);
}

TEST_CASE("common onto path examples")
{
    OrientedPath p("11011");
    CHECK(common_onto_minimal_path({p}) == p);
    CHECK(common_onto_minimal_path({p, p}) == p);

    OrientedPath r("1101011");
    auto q = common_onto_minimal_path({p, r});
    CHECK(is_minimal(q));
    CHECK(q.height() == 3);
    CHECK(path_onto_hom(q, p));
    CHECK(path_onto_hom(q, r));

    CHECK_THROWS_AS(common_onto_minimal_path({p, OrientedPath("1")}), HeightMismatch);
    CHECK_THROWS_AS(common_onto_minimal_path({OrientedPath("11101")}), NotMinimal);
}

TEST_CASE("property: minimal paths dominate their subpaths")
{
    Rng rng(8);
    for (int t = 0; t < 100; ++t) {
        auto h = 1 + static_cast<int>(rng.below(4));
        auto p = random_minimal_path(rng, h, 12);
        REQUIRE(is_minimal(p));
        CHECK(net_length(p) == p.height());
        const auto & d = p.directions();
        for (std::size_t i = 0; i < d.size(); ++i)
            for (std::size_t j = i + 1; j <= d.size(); ++j) {
                if (i == 0 && j == d.size())
                    continue;
                CHECK(net_length(OrientedPath(d.substr(i, j - i))) < net_length(p));
            }
    }
}

TEST_CASE("property: common onto path on random families")
{
    Rng rng(21);
    for (int t = 0; t < 100; ++t) {
        auto h = 1 + static_cast<int>(rng.below(4));
        std::vector<OrientedPath> family;
        auto size = 1 + rng.below(3);
        for (std::size_t i = 0; i < size; ++i)
            family.push_back(random_minimal_path(rng, h, 9));
        auto q = common_onto_minimal_path(family);
        CHECK(is_minimal(q));
        CHECK(q.height() == h);
        for (auto & p : family) {
            auto m = path_onto_hom(q, p);
            REQUIRE(m);
            CHECK(is_onto_hom(q, p, *m));
        }
    }
}

TEST_CASE("minimal path counts match enumeration")
{
    for (int h = 1; h <= 3; ++h)
        for (std::size_t len = 1; len <= 9; ++len) {
            std::uint64_t count = 0;
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << len); ++mask) {
                std::string s;
                for (std::size_t i = 0; i < len; ++i)
                    s += (mask >> i & 1) ? '1' : '0';
                OrientedPath p(s);
                count += is_minimal(p) && p.height() == h;
            }
            CHECK(count_minimal_paths(h, len) == count);
        }
}
