#include <treecsp/polysearch.hh>
#include <treecsp/errors.hh>

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_set>

using namespace treecsp;

using std::size_t;
using std::string;
using std::to_string;
using std::uint32_t;
using std::uint64_t;
using std::vector;

namespace
{
    auto check_rule(unsigned arity, unsigned variables, const vector<Pattern> & patterns,
        const vector<VertexSet> & domains) -> void
    {
        if (variables == 0)
            throw InvalidParams("identity rule needs at least one variable");
        if (! domains.empty() && domains.size() != variables)
            throw InvalidParams("identity rule needs one domain per variable");
        for (auto & p : patterns) {
            if (p.size() != arity)
                throw InvalidParams("pattern length " + to_string(p.size()) + " differs from arity " + to_string(arity));
            for (auto v : p)
                if (v >= variables)
                    throw InvalidParams("pattern variable out of range");
        }
    }

    // Calls f(assignment) for every assignment of the rule's variables.
    template <typename F>
    auto for_each_assignment(size_t n, unsigned variables, const vector<VertexSet> & domains, F && f) -> void
    {
        vector<vector<Vertex>> values(variables);
        for (unsigned i = 0; i < variables; ++i) {
            if (domains.empty())
                for (Vertex v = 0; v < n; ++v)
                    values[i].push_back(v);
            else
                for (auto v : domains[i].members())
                    values[i].push_back(static_cast<Vertex>(v));
            if (values[i].empty())
                return;
        }
        vector<size_t> pos(variables, 0);
        vector<Vertex> assignment(variables);
        while (true) {
            for (unsigned i = 0; i < variables; ++i)
                assignment[i] = values[i][pos[i]];
            f(assignment);
            unsigned i = variables;
            while (i > 0 && ++pos[i - 1] == values[i - 1].size())
                pos[--i] = 0;
            if (i == 0)
                return;
        }
    }

    auto instantiate(const Pattern & p, const vector<Vertex> & assignment, size_t n) -> uint64_t
    {
        uint64_t idx = 0;
        for (auto v : p)
            idx = idx * n + assignment[v];
        return idx;
    }

    class UnionFind
    {
        private:
            vector<uint32_t> _parent;

        public:
            explicit UnionFind(size_t n) :
                _parent(n)
            {
                std::iota(_parent.begin(), _parent.end(), 0u);
            }

            auto find(uint32_t x) -> uint32_t
            {
                while (_parent[x] != x) {
                    _parent[x] = _parent[_parent[x]];
                    x = _parent[x];
                }
                return x;
            }

            // the smaller index stays the root
            auto unite(uint32_t a, uint32_t b) -> void
            {
                a = find(a);
                b = find(b);
                if (a != b)
                    _parent[std::max(a, b)] = std::min(a, b);
            }
    };

    auto all_of_one_var(unsigned k) -> Pattern
    {
        return Pattern(k, 0);
    }

    auto add_idempotency(IdentitySystem & sys, unsigned k) -> void
    {
        sys.add_pin({1, all_of_one_var(k), 0, {}});
    }

    auto wnu_rule(unsigned k, vector<VertexSet> domains) -> MergeRule
    {
        MergeRule rule{2, {}, std::move(domains)};
        for (unsigned i = 0; i < k; ++i) {
            Pattern p(k, 0);
            p[i] = 1;
            rule.patterns.push_back(p);
        }
        return rule;
    }

    // The defining rules, checked directly on a table.
    auto satisfies_system(const OperationTable & f, const IdentitySystem & sys) -> bool
    {
        const size_t n = f.base_size();
        bool ok = true;
        for (auto & rule : sys.merges())
            for_each_assignment(n, rule.variables, rule.domains, [&](const vector<Vertex> & a) {
                Vertex first = f.at(instantiate(rule.patterns.front(), a, n));
                for (auto & p : rule.patterns)
                    if (f.at(instantiate(p, a, n)) != first)
                        ok = false;
            });
        for (auto & rule : sys.pins())
            for_each_assignment(n, rule.variables, rule.domains, [&](const vector<Vertex> & a) {
                if (f.at(instantiate(rule.pattern, a, n)) != a[rule.target])
                    ok = false;
            });
        if (ok && sys.is_set_symmetric())
            ok = is_tsi(f);
        return ok;
    }
}

IdentitySystem::IdentitySystem(unsigned arity, string name) :
    _arity(arity),
    _name(std::move(name))
{
    if (arity == 0)
        throw InvalidParams("identity system arity must be positive");
}

auto IdentitySystem::add_merge(MergeRule rule) -> void
{
    check_rule(_arity, rule.variables, rule.patterns, rule.domains);
    if (rule.patterns.empty())
        throw InvalidParams("merge rule needs a pattern");
    _merges.push_back(std::move(rule));
}

auto IdentitySystem::add_pin(PinRule rule) -> void
{
    check_rule(_arity, rule.variables, {rule.pattern}, rule.domains);
    if (std::find(rule.pattern.begin(), rule.pattern.end(), rule.target) == rule.pattern.end())
        throw InvalidParams("pin target must occur in its pattern");
    _pins.push_back(std::move(rule));
}

auto IdentitySystem::idempotent(unsigned k) -> IdentitySystem
{
    IdentitySystem sys(k, "idempotent");
    add_idempotency(sys, k);
    return sys;
}

auto IdentitySystem::wnu(unsigned k) -> IdentitySystem
{
    if (k < 2)
        throw InvalidParams("WNU arity must be at least 2");
    IdentitySystem sys(k, "wnu");
    add_idempotency(sys, k);
    sys.add_merge(wnu_rule(k, {}));
    return sys;
}

auto IdentitySystem::wnu_on_subsets(unsigned k, const vector<VertexSet> & subsets) -> IdentitySystem
{
    if (k < 2)
        throw InvalidParams("WNU arity must be at least 2");
    IdentitySystem sys(k, "wnu-on-subsets");
    add_idempotency(sys, k);
    for (auto & s : subsets)
        sys.add_merge(wnu_rule(k, {s, s}));
    return sys;
}

auto IdentitySystem::majority() -> IdentitySystem
{
    IdentitySystem sys(3, "majority");
    add_idempotency(sys, 3);
    for (unsigned i = 0; i < 3; ++i) {
        Pattern p(3, 0);
        p[i] = 1;
        sys.add_pin({2, p, 0, {}});
    }
    return sys;
}

auto IdentitySystem::tsi(unsigned k) -> IdentitySystem
{
    IdentitySystem sys(k, "tsi");
    add_idempotency(sys, k);
    sys.set_symmetric(true);
    return sys;
}

auto IdentitySystem::siggers() -> IdentitySystem
{
    IdentitySystem sys(4, "siggers");
    add_idempotency(sys, 4);
    // variables a = 0, r = 1, e = 2
    sys.add_merge({3, {{0, 1, 2, 0}, {1, 0, 1, 2}}, {}});
    return sys;
}

auto Indicator::decode(const vector<Vertex> & solution) const -> OperationTable
{
    vector<Vertex> values(class_of.size());
    for (size_t t = 0; t < class_of.size(); ++t)
        values[t] = solution[class_of[t]];
    return OperationTable(base_size, arity, std::move(values));
}

auto treecsp::indicator(const Digraph & h, const IdentitySystem & sys, uint64_t budget) -> Indicator
{
    const size_t n = h.vertex_count();
    const unsigned k = sys.arity();
    auto tuple_count = checked_power(n, k, budget);
    if (! tuple_count)
        throw BudgetExceeded("indicator over " + to_string(n) + "^" + to_string(k) + " tuples exceeds the budget");
    const auto & edges = h.edges();
    auto edge_tuples = checked_power(edges.size(), k, std::max<uint64_t>(budget, 1) * 8);
    if (! edge_tuples)
        throw BudgetExceeded("indicator over |E|^" + to_string(k) + " edge tuples exceeds the budget");

    const size_t total = *tuple_count;
    UnionFind uf(total);
    for (auto & rule : sys.merges())
        for_each_assignment(n, rule.variables, rule.domains, [&](const vector<Vertex> & a) {
            auto first = static_cast<uint32_t>(instantiate(rule.patterns.front(), a, n));
            for (size_t i = 1; i < rule.patterns.size(); ++i)
                uf.unite(first, static_cast<uint32_t>(instantiate(rule.patterns[i], a, n)));
        });

    if (sys.is_set_symmetric()) {
        std::map<vector<Vertex>, uint32_t> first_with_set;
        vector<Vertex> args(k, 0);
        for (size_t t = 0; t < total; ++t) {
            vector<Vertex> key = args;
            std::sort(key.begin(), key.end());
            key.erase(std::unique(key.begin(), key.end()), key.end());
            auto [it, inserted] = first_with_set.emplace(std::move(key), static_cast<uint32_t>(t));
            if (! inserted)
                uf.unite(it->second, static_cast<uint32_t>(t));
            for (unsigned i = k; i-- > 0;) {
                if (++args[i] < n)
                    break;
                args[i] = 0;
            }
        }
    }

    // variables numbered by first tuple
    Indicator result{CspInstance(0, n), vector<uint32_t>(total), k, n};
    vector<uint32_t> var_of_root(total, UINT32_MAX);
    uint32_t vars = 0;
    for (size_t t = 0; t < total; ++t) {
        auto root = uf.find(static_cast<uint32_t>(t));
        if (var_of_root[root] == UINT32_MAX)
            var_of_root[root] = vars++;
        result.class_of[t] = var_of_root[root];
    }
    var_of_root.clear();
    var_of_root.shrink_to_fit();

    vector<std::optional<Vertex>> forced(vars);
    for (auto & rule : sys.pins())
        for_each_assignment(n, rule.variables, rule.domains, [&](const vector<Vertex> & a) {
            auto var = result.class_of[instantiate(rule.pattern, a, n)];
            Vertex value = a[rule.target];
            if (forced[var] && *forced[var] != value)
                throw InconsistentPins("identity pins force both " + to_string(*forced[var]) + " and " + to_string(value)
                    + " on one tuple class");
            forced[var] = value;
        });

    CspInstance inst(vars, n);
    for (uint32_t v = 0; v < vars; ++v)
        if (forced[v])
            inst.pin(v, *forced[v]);
    auto rel = inst.add_relation(Relation::from_digraph(h));

    std::unordered_set<uint64_t> seen;
    if (! edges.empty()) {
        vector<size_t> pos(k, 0);
        while (true) {
            uint64_t s = 0, d = 0;
            for (unsigned i = 0; i < k; ++i) {
                s = s * n + edges[pos[i]].first;
                d = d * n + edges[pos[i]].second;
            }
            uint64_t cu = result.class_of[s], cv = result.class_of[d];
            if (seen.insert(cu * vars + cv).second)
                inst.add_constraint(cu, cv, rel);
            unsigned i = k;
            while (i > 0 && ++pos[i - 1] == edges.size())
                pos[--i] = 0;
            if (i == 0)
                break;
        }
    }
    result.instance = std::move(inst);
    return result;
}

auto treecsp::find_polymorphism(const Digraph & h, const IdentitySystem & sys, const PolySearchOptions & options,
    SearchStats * stats) -> std::optional<OperationTable>
{
    std::optional<Indicator> ind;
    try {
        ind = indicator(h, sys, options.budget);
    }
    catch (const InconsistentPins &) {
        return std::nullopt;
    }
    auto solution = solve(ind->instance, options.search, stats);
    if (! solution)
        return std::nullopt;
    auto table = ind->decode(*solution);
    if (! is_polymorphism(h, table) || ! satisfies_system(table, sys))
        throw Error("internal: indicator solution fails the " + sys.name() + " identities");
    return table;
}

namespace
{
    auto checked(std::optional<OperationTable> t, bool (*predicate)(const OperationTable &), const char * what)
        -> std::optional<OperationTable>
    {
        if (t && ! predicate(*t))
            throw Error(string("internal: search result is not ") + what);
        return t;
    }
}

auto treecsp::find_wnu(const Digraph & h, unsigned k, const PolySearchOptions & options) -> std::optional<OperationTable>
{
    return checked(find_polymorphism(h, IdentitySystem::wnu(k), options), satisfies_wnu, "a WNU");
}

auto treecsp::find_wnu_on(const Digraph & h, unsigned k, const vector<VertexSet> & subsets,
    const PolySearchOptions & options) -> std::optional<OperationTable>
{
    auto t = find_polymorphism(h, IdentitySystem::wnu_on_subsets(k, subsets), options);
    if (t) {
        if (! is_idempotent(*t))
            throw Error("internal: search result is not idempotent");
        for (auto & s : subsets)
            if (! satisfies_wnu_on(*t, s))
                throw Error("internal: search result is not a WNU on a requested subset");
    }
    return t;
}

auto treecsp::find_majority(const Digraph & h, const PolySearchOptions & options) -> std::optional<OperationTable>
{
    return checked(find_polymorphism(h, IdentitySystem::majority(), options), is_majority, "a majority");
}

auto treecsp::find_tsi(const Digraph & h, unsigned k, const PolySearchOptions & options) -> std::optional<OperationTable>
{
    return checked(find_polymorphism(h, IdentitySystem::tsi(k), options), is_tsi, "totally symmetric");
}

auto treecsp::find_siggers(const Digraph & h, const PolySearchOptions & options) -> std::optional<OperationTable>
{
    return checked(find_polymorphism(h, IdentitySystem::siggers(), options), is_siggers, "a Siggers operation");
}
