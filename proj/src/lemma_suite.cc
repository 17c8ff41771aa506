#include <treecsp/lemma_suite.hh>
#include <treecsp/errors.hh>
#include <treecsp/generate.hh>
#include <treecsp/lemmas.hh>
#include <treecsp/pointing.hh>
#include <treecsp/polysearch.hh>

#include <json.hpp>

#include <algorithm>
#include <set>

using namespace treecsp;

using std::size_t;
using std::string;
using std::to_string;
using std::uint64_t;
using std::vector;

auto LemmaSuiteReport::passed() const -> bool
{
    return std::none_of(checks.begin(), checks.end(), [](const LemmaCheck & c) { return c.status == "fail"; });
}

auto LemmaSuiteReport::find(const string & name) const -> const LemmaCheck *
{
    for (auto & c : checks)
        if (c.name == name)
            return &c;
    return nullptr;
}

auto LemmaSuiteReport::to_json() const -> string
{
    nlohmann::ordered_json j;
    j["format_version"] = 1;
    j["seed"] = seed;
    j["wnu_found"] = wnu_found;
    auto arr = nlohmann::ordered_json::array();
    for (auto & c : checks)
        arr.push_back({{"name", c.name}, {"status", c.status}, {"instances", c.instances}, {"detail", c.detail}});
    j["checks"] = arr;
    j["passed"] = passed();
    return j.dump(2);
}

namespace
{
    // Tallies one kind of check.
    class Tally
    {
        private:
            LemmaCheck _check;
            size_t _fail = 0, _inconclusive = 0;
            string _first_failure;

        public:
            explicit Tally(string name)
            {
                _check.name = std::move(name);
            }

            auto pass() -> void { ++_check.instances; }

            auto fail(const string & why) -> void
            {
                ++_check.instances;
                if (_fail++ == 0)
                    _first_failure = why;
            }

            // a construction ran out of budget; neither pass nor fail
            auto inconclusive() -> void { ++_inconclusive; }

            auto result() -> LemmaCheck
            {
                if (_fail > 0) {
                    _check.status = "fail";
                    _check.detail = to_string(_fail) + " of " + to_string(_check.instances) + " failed; first: " + _first_failure;
                }
                else if (_check.instances == 0) {
                    _check.status = "skipped";
                    _check.detail = _inconclusive > 0 ? to_string(_inconclusive) + " over budget" : "no applicable instance";
                }
                else {
                    _check.status = "pass";
                    _check.detail = to_string(_check.instances) + " instances";
                    if (_inconclusive > 0)
                        _check.detail += ", " + to_string(_inconclusive) + " over budget";
                }
                return _check;
            }
    };

    auto skipped(const string & name, const string & why) -> LemmaCheck
    {
        return {name, "skipped", why, 0};
    }

    auto side_of(const SpecialTree & tree, Vertex v) -> VertexSet
    {
        return tree.is_a(v) ? tree.a_set() : tree.b_set();
    }

    auto set_name(const VertexSet & s) -> string
    {
        return s.to_string();
    }

    struct Candidate
    {
        Vertex hub;
        VertexSet set;
        // no relative absorption into a proper subset
        bool absorption_free;
    };

    // relative subuniverses of E_1(hub) above hub with at least two members
    auto neighbourhood_candidates(const PointingContext & ctx, Vertex hub, Rng & rng) -> vector<Candidate>
    {
        auto & tree = *ctx.tree;
        const size_t n = tree.vertex_count();
        vector<Vertex> up;
        for (auto c : tree.template_neighbours(hub))
            if (ctx.order.precedes(hub, c))
                up.push_back(c);
        if (up.size() < 2)
            return {};

        std::set<VertexSet> seen;
        vector<Candidate> result;
        auto consider = [&](VertexSet s) {
            s = closure(s, ctx.known_ops());
            bool inside = true;
            s.for_each([&](size_t v) {
                if (std::find(up.begin(), up.end(), static_cast<Vertex>(v)) == up.end())
                    inside = false;
            });
            if (! inside || s.count() < 2 || ! seen.insert(s).second)
                return;
            bool af = ! find_relative_absorption(ctx, s);
            result.push_back({hub, std::move(s), af});
        };

        if (up.size() <= 8)
            for (uint64_t mask = 1; mask < (uint64_t{1} << up.size()); ++mask) {
                if (__builtin_popcountll(mask) < 2)
                    continue;
                VertexSet s(n);
                for (size_t i = 0; i < up.size(); ++i)
                    if (mask >> i & 1)
                        s.set(up[i]);
                consider(std::move(s));
            }
        else {
            consider(VertexSet::from_members(n, up));
            for (size_t t = 0; t < 16; ++t) {
                auto i = rng.below(up.size()), j = rng.below(up.size());
                if (i != j)
                    consider(VertexSet::from_members(n, {up[i], up[j]}));
            }
        }
        return result;
    }

    auto shuffle_take(vector<Candidate> items, size_t limit, Rng & rng) -> vector<Candidate>
    {
        for (size_t i = items.size(); i > 1; --i)
            std::swap(items[i - 1], items[rng.below(i)]);
        if (items.size() > limit)
            items.resize(limit);
        return items;
    }
}

auto treecsp::verify_lemma_suite(const SpecialTreeSpec & spec, uint64_t seed, const LemmaSuiteOptions & options)
    -> LemmaSuiteReport
{
    LemmaSuiteReport report;
    report.seed = seed;
    Rng rng(seed);

    std::optional<SpecialTree> maybe_tree;
    try {
        maybe_tree.emplace(spec);
    }
    catch (const Error & e) {
        report.checks.push_back({"spec", "fail", e.what(), 1});
        return report;
    }
    const auto & tree = *maybe_tree;
    const auto & h = tree.digraph();
    const size_t n = tree.vertex_count();

    {
        Tally t("top_bottom_in_diagonal_component");
        for (unsigned k = 1; k <= 3; ++k) {
            try {
                if (top_bottom_in_delta(tree, k))
                    t.pass();
                else
                    t.fail("arity " + to_string(k));
            }
            catch (const BudgetExceeded &) {
                t.inconclusive();
            }
        }
        report.checks.push_back(t.result());
    }

    const vector<string> dependent = {"wnu_extension", "special_polymer", "singleton_absorber", "order_absorption",
        "s_set_identities", "star_absorbs", "terms_absorb", "binary_extension", "neighbourhood_pointing",
        "distance_pointing"};
    auto skip_rest = [&](size_t from, const string & why) {
        for (size_t i = from; i < dependent.size(); ++i)
            report.checks.push_back(skipped(dependent[i], why));
    };

    PolySearchOptions poly;
    poly.search.node_budget = options.node_budget;
    std::optional<OperationTable> tau;
    try {
        tau = find_wnu_on(h, 3, {tree.a_set(), tree.b_set()}, poly);
    }
    catch (const BudgetExceeded &) {
        skip_rest(0, "WNU search over budget");
        return report;
    }
    if (! tau) {
        skip_rest(0, "no idempotent polymorphism that is a WNU on A and B");
        return report;
    }
    report.wnu_found = true;

    OperationTable omega;
    {
        Tally t("wnu_extension");
        try {
            omega = extend_wnu(tree, *tau);
            // independent re-check
            if (is_polymorphism(h, omega) && satisfies_wnu(omega))
                t.pass();
            else
                t.fail("extended operation is not a WNU polymorphism");
        }
        catch (const Error & e) {
            t.fail(e.what());
        }
        report.checks.push_back(t.result());
        if (report.checks.back().status != "pass") {
            skip_rest(1, "no WNU on the whole tree");
            return report;
        }
    }

    SpecialWnu special;
    {
        Tally t("special_polymer");
        try {
            special = make_special(omega);
            auto & p = special.polymer;
            bool ok = true;
            for (Vertex x = 0; x < n && ok; ++x)
                for (Vertex y = 0; y < n && ok; ++y)
                    if (special.base_polymer(x, p(x, y)) != p(x, y) || p(x, p(x, y)) != p(x, y))
                        ok = false;
            if (ok && is_polymorphism(h, p) && is_idempotent(p))
                t.pass();
            else
                t.fail("polymer is not special or not a polymorphism");
        }
        catch (const Error & e) {
            t.fail(e.what());
        }
        report.checks.push_back(t.result());
        if (report.checks.back().status != "pass") {
            skip_rest(2, "no special polymer");
            return report;
        }
    }
    const auto & p = special.polymer;

    Vertex o = 0;
    {
        Tally t("singleton_absorber");
        try {
            o = find_singleton_absorber(tree, p);
            VertexSet single(n);
            single.set(o);
            bool ok = true;
            e_neighborhood(tree, single, 2).for_each([&](size_t w) {
                if (p(o, static_cast<Vertex>(w)) != o)
                    ok = false;
            });
            if (ok)
                t.pass();
            else
                t.fail("o does not absorb its second neighbourhood");
        }
        catch (const Error & e) {
            t.fail(e.what());
        }
        report.checks.push_back(t.result());
        if (report.checks.back().status != "pass") {
            skip_rest(3, "no absorbing vertex");
            return report;
        }
    }

    {
        Tally t("order_absorption");
        if (verify_preceq_absorption(tree, o, p))
            t.pass();
        else
            t.fail("some comparable pair a <= a' has a p a' != a");
        bool level_ok = true;
        side_of(tree, o).for_each([&](size_t x) {
            if (p(o, static_cast<Vertex>(x)) != o)
                level_ok = false;
        });
        if (level_ok)
            t.pass();
        else
            t.fail("o p x != o for some x on o's level");
        report.checks.push_back(t.result());
    }

    auto star_table = star(p, n);
    {
        Tally t("s_set_identities");
        for (auto side : {tree.a_set(), tree.b_set()}) {
            auto members = side.members();
            for (auto c : members)
                for (auto c2 : members) {
                    auto s = s_set(c, c2, star_table);
                    auto s_rev = s_set(c2, c, star_table);
                    bool ok = s.elements == s_rev.elements;
                    if (c == c2)
                        ok = ok && s.elements.count() == 1 && s.elements.test(c);
                    auto with_ends = s.elements;
                    with_ends.set(c);
                    with_ends.set(c2);
                    ok = ok && is_closed_under(s.elements, star_table) && is_closed_under(with_ends, star_table);
                    for (auto & [value, term] : s.terms)
                        ok = ok && term.contains_x() && term.contains_y() && term.evaluate(star_table, c, c2) == value;
                    if (ok)
                        t.pass();
                    else
                        t.fail("pair (" + to_string(c) + ", " + to_string(c2) + ")");
                }
        }
        report.checks.push_back(t.result());
    }

    PointingContext ctx;
    ctx.tree = &tree;
    ctx.omega = omega;
    ctx.special = special;
    ctx.star_table = star_table;
    ctx.o = o;
    ctx.order = RootedOrder(h, o);
    ctx.arity_budget = options.arity_budget;

    vector<Candidate> candidates;
    const size_t top = tree.spec().a_count + tree.spec().b_count;
    for (Vertex hub = 0; hub < top; ++hub)
        for (auto & c : neighbourhood_candidates(ctx, hub, rng))
            candidates.push_back(std::move(c));
    auto all_candidates = candidates;
    candidates = shuffle_take(std::move(candidates), options.max_candidates, rng);

    {
        Tally star_tally("star_absorbs"), terms_tally("terms_absorb");
        for (auto & [hub, c, af] : all_candidates) {
            string where = "hub " + to_string(hub) + " set " + set_name(c);
            if (verify_star_absorbs(tree, ctx.order, hub, c, star_table))
                star_tally.pass();
            else
                star_tally.fail(where);
            if (verify_terms_absorb(tree, ctx.order, hub, c, star_table))
                terms_tally.pass();
            else
                terms_tally.fail(where);
        }
        report.checks.push_back(star_tally.result());
        report.checks.push_back(terms_tally.result());
    }

    if (! options.pointing) {
        for (auto name : {"binary_extension", "neighbourhood_pointing", "distance_pointing"})
            report.checks.push_back(skipped(name, "pointing checks disabled"));
        return report;
    }

    {
        Tally t("binary_extension");
        for (auto & [hub, c, af] : candidates) {
            string where = "hub " + to_string(hub) + " set " + set_name(c);
            try {
                auto gamma = commutative_choice(c, star_table);
                auto tau2 = extend_binary(tree, ctx.order, hub, c, gamma, star_table);
                if (is_polymorphism(h, tau2) && is_idempotent(tau2) && is_commutative_on(tau2, c))
                    t.pass();
                else
                    t.fail(where + ": not a commutative idempotent polymorphism on the set");
            }
            catch (const Error & e) {
                t.fail(where + ": " + e.what());
            }
        }
        report.checks.push_back(t.result());
    }

    {
        Tally t("neighbourhood_pointing");
        for (auto & [hub, c, af] : candidates) {
            string where = "hub " + to_string(hub) + " set " + set_name(c);
            try {
                auto cert = af ? build_pointing_for_neighborhood(ctx, hub, c) : point_to_singleton_hub(ctx, hub, c);
                if (cert.x == c && cert.y.count() == 1 && verify_weak_pointing(cert, ctx.arity_budget)
                    && is_polymorphism(h, cert.op))
                    t.pass();
                else
                    t.fail(where + ": certificate does not verify");
            }
            catch (const ArityBudgetExceeded &) {
                t.inconclusive();
            }
            catch (const Error & e) {
                t.fail(where + ": " + e.what());
            }
        }
        report.checks.push_back(t.result());
    }

    {
        Tally t("distance_pointing");
        auto dist = tree.template_distances(o);
        vector<Candidate> far;
        std::set<VertexSet> seen;
        for (auto side : {tree.a_set(), tree.b_set()}) {
            auto members = side.members();
            for (size_t i = 0; i < members.size(); ++i)
                for (size_t j = i + 1; j < members.size(); ++j) {
                    Vertex x = members[i], y = members[j];
                    if (dist[x] != dist[y] || dist[x] < 2)
                        continue;
                    auto c = closure(VertexSet::from_members(n, {x, y}), ctx.known_ops());
                    bool uniform = true;
                    c.for_each([&](size_t v) {
                        if (dist[v] != dist[x])
                            uniform = false;
                    });
                    if (uniform && c.count() >= 2 && seen.insert(c).second)
                        far.push_back({o, c, ! find_relative_absorption(ctx, c)});
                }
        }
        for (auto & [root, c, af] : shuffle_take(std::move(far), options.max_candidates, rng)) {
            string where = "set " + set_name(c);
            try {
                auto cert = af ? build_pointing_for_af(ctx, c) : point_to_singleton(ctx, c);
                if (cert.x == c && cert.y.count() == 1 && verify_weak_pointing(cert, ctx.arity_budget)
                    && is_polymorphism(h, cert.op))
                    t.pass();
                else
                    t.fail(where + ": certificate does not verify");
            }
            catch (const ArityBudgetExceeded &) {
                t.inconclusive();
            }
            catch (const Error & e) {
                t.fail(where + ": " + e.what());
            }
        }
        report.checks.push_back(t.result());
    }
    return report;
}
