#include <treecsp/algebra.hh>
#include <treecsp/errors.hh>

#include <algorithm>
#include <atomic>
#include <deque>
#include <limits>
#include <set>
#include <thread>

using namespace treecsp;

using std::size_t;
using std::string;
using std::to_string;
using std::uint64_t;
using std::vector;

namespace
{
    constexpr uint64_t saturated = std::numeric_limits<uint64_t>::max();

    std::atomic<unsigned> worker_threads{0};

    auto saturating_mul(uint64_t a, uint64_t b) -> uint64_t
    {
        if (a != 0 && b > saturated / a)
            return saturated;
        return a * b;
    }

    // Runs f(begin, end) over [0, count) split across hardware threads.
    template <typename F>
    auto parallel_blocks(uint64_t count, F && f) -> void
    {
        unsigned threads = worker_threads.load();
        if (threads == 0)
            threads = std::max(1u, std::thread::hardware_concurrency());
        if (threads == 1 || count < (1u << 16)) {
            f(uint64_t{0}, count);
            return;
        }
        vector<std::thread> pool;
        uint64_t chunk = (count + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            uint64_t begin = t * chunk, end = std::min(count, begin + chunk);
            if (begin >= end)
                break;
            pool.emplace_back([&f, begin, end] { f(begin, end); });
        }
        for (auto & th : pool)
            th.join();
    }
}

auto treecsp::set_worker_threads(unsigned count) -> void
{
    worker_threads.store(count);
}

OperationTable::OperationTable(size_t n, unsigned k) :
    _n(n),
    _k(k)
{
    auto size = checked_power(n, k, default_table_budget);
    if (! size)
        throw BudgetExceeded("operation table " + to_string(n) + "^" + to_string(k) + " exceeds the table budget");
    _values.assign(*size, 0);
}

OperationTable::OperationTable(size_t n, unsigned k, vector<Vertex> values) :
    _n(n),
    _k(k),
    _values(std::move(values))
{
    auto size = checked_power(n, k, std::numeric_limits<uint64_t>::max() / 2);
    if (! size || *size != _values.size())
        throw InvalidParams("operation table needs n^k = " + (size ? to_string(*size) : string("?")) + " values");
    for (auto v : _values)
        if (v >= n)
            throw InvalidParams("operation table value " + to_string(v) + " out of range");
}

auto OperationTable::projection(size_t n, unsigned k, unsigned i) -> OperationTable
{
    if (i >= k)
        throw InvalidParams("projection coordinate out of range");
    return from_function(n, k, [i](std::span<const Vertex> args) { return args[i]; });
}

struct OperationExpr::Node
{
    std::optional<OperationTable> table;
    std::optional<OperationExpr> g, f;
    size_t base = 0;
    uint64_t arity = 0, leaves = 0;
};

OperationExpr::OperationExpr(std::shared_ptr<const Node> node) :
    _node(std::move(node))
{
}

OperationExpr::OperationExpr() :
    OperationExpr(leaf(OperationTable(0, 1, {})))
{
}

auto OperationExpr::leaf(OperationTable table) -> OperationExpr
{
    auto node = std::make_shared<Node>();
    node->base = table.base_size();
    node->arity = table.arity();
    node->leaves = 1;
    node->table = std::move(table);
    return OperationExpr(node);
}

auto OperationExpr::compose(const OperationExpr & g, const OperationExpr & f) -> OperationExpr
{
    if (g.base_size() != f.base_size())
        throw InvalidParams("composed operations have different base sizes");
    auto node = std::make_shared<Node>();
    node->base = g.base_size();
    node->arity = saturating_mul(g.arity(), f.arity());
    node->leaves = g.leaf_count() > saturated - f.leaf_count() ? saturated : g.leaf_count() + f.leaf_count();
    node->g = g;
    node->f = f;
    return OperationExpr(node);
}

auto OperationExpr::is_leaf() const -> bool
{
    return _node->table.has_value();
}

auto OperationExpr::table() const -> const OperationTable &
{
    if (! is_leaf())
        throw InvalidParams("not a table expression");
    return *_node->table;
}

auto OperationExpr::outer() const -> const OperationExpr &
{
    if (is_leaf())
        throw InvalidParams("a table expression has no outer part");
    return *_node->g;
}

auto OperationExpr::inner() const -> const OperationExpr &
{
    if (is_leaf())
        throw InvalidParams("a table expression has no inner part");
    return *_node->f;
}

auto OperationExpr::base_size() const -> size_t
{
    return _node->base;
}

auto OperationExpr::arity() const -> uint64_t
{
    return _node->arity;
}

auto OperationExpr::leaf_count() const -> uint64_t
{
    return _node->leaves;
}

namespace
{
    auto eval_node(const OperationExpr & e, std::span<const Vertex> args) -> Vertex
    {
        if (e.is_leaf())
            return e.table()(args);
        auto & f = e.inner();
        auto k = static_cast<size_t>(f.arity());
        auto n = static_cast<size_t>(e.outer().arity());
        vector<Vertex> inner(n);
        for (size_t i = 0; i < n; ++i)
            inner[i] = eval_node(f, args.subspan(i * k, k));
        return eval_node(e.outer(), inner);
    }
}

auto OperationExpr::evaluate(std::span<const Vertex> args, uint64_t budget) const -> Vertex
{
    if (arity() > budget)
        throw ArityBudgetExceeded("operation of arity " + (arity() == saturated ? string("> 2^64") : to_string(arity()))
            + " exceeds the arity budget " + to_string(budget));
    if (args.size() != arity())
        throw InvalidParams("expected " + to_string(arity()) + " arguments, got " + to_string(args.size()));
    return eval_node(*this, args);
}

auto OperationExpr::materialize(uint64_t budget) const -> OperationTable
{
    if (is_leaf())
        return table();
    if (arity() > 64)
        throw BudgetExceeded("operation of arity " + to_string(arity()) + " is too large to tabulate");
    auto k = static_cast<unsigned>(arity());
    if (! checked_power(base_size(), k, budget))
        throw BudgetExceeded("tabulating an operation of arity " + to_string(k) + " exceeds the budget");
    return OperationTable::from_function(base_size(), k, [&](std::span<const Vertex> args) {
        return eval_node(*this, args);
    });
}

auto OperationExpr::describe() const -> string
{
    if (is_leaf())
        return "t" + to_string(table().arity());
    return "(" + outer().describe() + " <- " + inner().describe() + ")";
}

auto treecsp::is_polymorphism(const Digraph & h, const OperationTable & f, uint64_t budget) -> bool
{
    if (f.base_size() != h.vertex_count())
        throw InvalidParams("operation base size differs from the digraph");
    const unsigned k = f.arity();
    const auto & edges = h.edges();
    const size_t m = edges.size(), n = h.vertex_count();
    if (k == 0 || m == 0)
        return true;
    auto total = checked_power(m, k, budget);
    if (! total)
        throw BudgetExceeded("polymorphism check over |E|^" + to_string(k) + " edge tuples exceeds the budget");

    std::atomic<bool> ok{true};
    // split on the leading coordinate's edge
    parallel_blocks(*total, [&](uint64_t begin, uint64_t end) {
        vector<size_t> pos(k, 0);
        uint64_t rest = begin;
        for (unsigned i = k; i-- > 0;) {
            pos[i] = rest % m;
            rest /= m;
        }
        for (uint64_t t = begin; t < end && ok.load(std::memory_order_relaxed); ++t) {
            uint64_t s = 0, d = 0;
            for (unsigned i = 0; i < k; ++i) {
                s = s * n + edges[pos[i]].first;
                d = d * n + edges[pos[i]].second;
            }
            if (! h.has_edge(f.at(s), f.at(d))) {
                ok = false;
                return;
            }
            for (unsigned i = k; i-- > 0;) {
                if (++pos[i] < m)
                    break;
                pos[i] = 0;
            }
        }
    });
    return ok;
}

auto treecsp::is_polymorphism(const Digraph & h, const OperationExpr & f, uint64_t budget) -> bool
{
    if (f.is_leaf())
        return is_polymorphism(h, f.table(), budget);
    if (is_polymorphism(h, f.outer(), budget) && is_polymorphism(h, f.inner(), budget))
        return true;
    return is_polymorphism(h, f.materialize(), budget);
}

auto treecsp::is_idempotent(const OperationTable & f) -> bool
{
    vector<Vertex> args(f.arity());
    for (Vertex x = 0; x < f.base_size(); ++x) {
        std::fill(args.begin(), args.end(), x);
        if (f(args) != x)
            return false;
    }
    return true;
}

auto treecsp::is_idempotent(const OperationExpr & f) -> bool
{
    if (f.is_leaf())
        return is_idempotent(f.table());
    if (is_idempotent(f.outer()) && is_idempotent(f.inner()))
        return true;
    vector<Vertex> args(static_cast<size_t>(std::min<uint64_t>(f.arity(), default_arity_budget)));
    for (Vertex x = 0; x < f.base_size(); ++x) {
        std::fill(args.begin(), args.end(), x);
        if (f.evaluate(args) != x)
            return false;
    }
    return true;
}

auto treecsp::satisfies_wnu_on(const OperationTable & f, const VertexSet & s) -> bool
{
    const unsigned k = f.arity();
    if (k < 2)
        return false;
    auto members = s.members();
    vector<Vertex> args(k);
    for (auto x : members) {
        std::fill(args.begin(), args.end(), x);
        if (f(args) != x)
            return false;
        for (auto y : members) {
            std::fill(args.begin(), args.end(), x);
            args[0] = y;
            Vertex first = f(args);
            for (unsigned i = 1; i < k; ++i) {
                std::fill(args.begin(), args.end(), x);
                args[i] = y;
                if (f(args) != first)
                    return false;
            }
        }
    }
    return true;
}

auto treecsp::satisfies_wnu(const OperationTable & f) -> bool
{
    return satisfies_wnu_on(f, VertexSet(f.base_size(), true));
}

auto treecsp::is_majority(const OperationTable & f) -> bool
{
    if (f.arity() != 3)
        return false;
    for (Vertex x = 0; x < f.base_size(); ++x)
        for (Vertex y = 0; y < f.base_size(); ++y)
            if (f(y, x, x) != x || f(x, y, x) != x || f(x, x, y) != x)
                return false;
    return true;
}

auto treecsp::is_tsi(const OperationTable & f) -> bool
{
    if (! is_idempotent(f))
        return false;
    std::map<vector<Vertex>, Vertex> by_set;
    vector<Vertex> args(f.arity(), 0);
    for (size_t idx = 0; idx < f.size(); ++idx) {
        vector<Vertex> key = args;
        std::sort(key.begin(), key.end());
        key.erase(std::unique(key.begin(), key.end()), key.end());
        auto [it, inserted] = by_set.emplace(key, f.at(idx));
        if (! inserted && it->second != f.at(idx))
            return false;
        for (unsigned i = f.arity(); i-- > 0;) {
            if (++args[i] < f.base_size())
                break;
            args[i] = 0;
        }
    }
    return true;
}

auto treecsp::is_siggers(const OperationTable & f) -> bool
{
    if (f.arity() != 4 || ! is_idempotent(f))
        return false;
    const size_t n = f.base_size();
    for (Vertex a = 0; a < n; ++a)
        for (Vertex r = 0; r < n; ++r)
            for (Vertex e = 0; e < n; ++e) {
                Vertex lhs[] = {a, r, e, a}, rhs[] = {r, a, r, e};
                if (f(lhs) != f(rhs))
                    return false;
            }
    return true;
}

auto treecsp::is_commutative_on(const OperationTable & f, const VertexSet & s) -> bool
{
    if (f.arity() != 2)
        return false;
    auto members = s.members();
    for (auto x : members)
        for (auto y : members)
            if (f(x, y) != f(y, x))
                return false;
    return true;
}

auto treecsp::is_closed_under(const VertexSet & s, const OperationTable & f) -> bool
{
    auto members = s.members();
    if (members.empty())
        return true;
    const unsigned k = f.arity();
    vector<size_t> pos(k, 0);
    vector<Vertex> args(k);
    while (true) {
        for (unsigned i = 0; i < k; ++i)
            args[i] = members[pos[i]];
        if (! s.test(f(args)))
            return false;
        unsigned i = k;
        while (i > 0 && ++pos[i - 1] == members.size())
            pos[--i] = 0;
        if (i == 0)
            return true;
    }
}

auto treecsp::binary_polymer(const OperationTable & w) -> OperationTable
{
    if (! satisfies_wnu(w))
        throw NotWNU("binary polymer needs a WNU operation");
    const unsigned k = w.arity();
    return OperationTable::from_function(w.base_size(), 2, [&](std::span<const Vertex> xy) {
        vector<Vertex> args(k, xy[0]);
        args[k - 1] = xy[1];
        return w(args);
    });
}

auto treecsp::is_special_polymer(const OperationTable & p) -> bool
{
    for (Vertex x = 0; x < p.base_size(); ++x)
        for (Vertex y = 0; y < p.base_size(); ++y)
            if (p(x, p(x, y)) != p(x, y))
                return false;
    return true;
}

auto treecsp::make_special(const OperationTable & w, size_t max_copies) -> SpecialWnu
{
    SpecialWnu result;
    result.base_polymer = binary_polymer(w);
    result.polymer = result.base_polymer;
    result.wnu = OperationExpr::leaf(w);
    result.copies = 1;
    const auto & o = result.base_polymer;
    const size_t n = w.base_size();

    while (! is_special_polymer(result.polymer)) {
        if (result.copies >= max_copies)
            throw SearchExhausted("polymer did not become special within " + to_string(max_copies) + " compositions");
        auto next = OperationTable::from_function(n, 2, [&](std::span<const Vertex> xy) {
            return o(xy[0], result.polymer(xy[0], xy[1]));
        });
        result.polymer = std::move(next);
        result.wnu = OperationExpr::compose(OperationExpr::leaf(w), result.wnu);
        ++result.copies;
    }

    // the polymer of the composed expression must match the recurrence
    if (result.wnu.arity() <= 729) {
        auto k = static_cast<size_t>(result.wnu.arity());
        vector<Vertex> args(k);
        for (Vertex x = 0; x < n; ++x)
            for (Vertex y = 0; y < n; ++y) {
                std::fill(args.begin(), args.end(), x);
                args[k - 1] = y;
                Vertex last = result.wnu.evaluate(args);
                std::fill(args.begin(), args.end(), x);
                args[0] = y;
                Vertex first = result.wnu.evaluate(args);
                if (last != result.polymer(x, y) || first != last)
                    throw Error("internal: composed WNU disagrees with its polymer recurrence");
            }
    }
    return result;
}

auto treecsp::star(const OperationTable & polymer, size_t hsize) -> OperationTable
{
    if (polymer.arity() != 2)
        throw InvalidParams("star needs a binary operation");
    return OperationTable::from_function(polymer.base_size(), 2, [&](std::span<const Vertex> xy) {
        Vertex v = xy[0];
        for (size_t i = 0; i < hsize; ++i)
            v = polymer(v, xy[1]);
        return v;
    });
}

auto treecsp::closure(const VertexSet & s, const vector<OperationExpr> & ops, uint64_t budget) -> VertexSet
{
    VertexSet result = s;
    uint64_t work = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto & op : ops) {
            if (op.base_size() != s.size())
                throw InvalidParams("closure operation base size differs from the set");
            auto members = result.members();
            if (members.empty())
                return result;
            if (op.arity() > 64)
                throw BudgetExceeded("closure under an operation of arity " + to_string(op.arity()));
            auto k = static_cast<unsigned>(op.arity());
            auto count = checked_power(members.size(), k, budget);
            if (! count || (work += *count) > budget)
                throw BudgetExceeded("closure exceeds its evaluation budget");
            vector<size_t> pos(k, 0);
            vector<Vertex> args(k);
            while (true) {
                for (unsigned i = 0; i < k; ++i)
                    args[i] = members[pos[i]];
                auto v = op.is_leaf() ? op.table()(args) : op.evaluate(args);
                if (! result.test(v)) {
                    result.set(v);
                    changed = true;
                }
                unsigned i = k;
                while (i > 0 && ++pos[i - 1] == members.size())
                    pos[--i] = 0;
                if (i == 0)
                    break;
            }
        }
    }
    return result;
}

struct BinaryTerm::Node
{
    enum class Kind
    {
        X,
        Y,
        Star
    } kind;
    BinaryTerm * unused = nullptr;
    std::shared_ptr<const Node> left, right;
    bool has_x = false, has_y = false;
};

BinaryTerm::BinaryTerm(std::shared_ptr<const Node> node) :
    _node(std::move(node))
{
}

auto BinaryTerm::x() -> BinaryTerm
{
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::X;
    n->has_x = true;
    return BinaryTerm(n);
}

auto BinaryTerm::y() -> BinaryTerm
{
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Y;
    n->has_y = true;
    return BinaryTerm(n);
}

auto BinaryTerm::star(const BinaryTerm & left, const BinaryTerm & right) -> BinaryTerm
{
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Star;
    n->left = left._node;
    n->right = right._node;
    n->has_x = left._node->has_x || right._node->has_x;
    n->has_y = left._node->has_y || right._node->has_y;
    return BinaryTerm(n);
}

namespace
{
    template <typename Node>
    auto eval_term(const Node & n, const OperationTable & t, Vertex x, Vertex y) -> Vertex
    {
        switch (n.kind) {
            case Node::Kind::X: return x;
            case Node::Kind::Y: return y;
            case Node::Kind::Star: return t(eval_term(*n.left, t, x, y), eval_term(*n.right, t, x, y));
        }
        return x;
    }

    template <typename Node>
    auto term_string(const Node & n) -> string
    {
        switch (n.kind) {
            case Node::Kind::X: return "x";
            case Node::Kind::Y: return "y";
            case Node::Kind::Star: return "(" + term_string(*n.left) + "*" + term_string(*n.right) + ")";
        }
        return "?";
    }
}

auto BinaryTerm::evaluate(const OperationTable & star_table, Vertex x, Vertex y) const -> Vertex
{
    return eval_term(*_node, star_table, x, y);
}

auto BinaryTerm::to_table(const OperationTable & star_table) const -> OperationTable
{
    return OperationTable::from_function(star_table.base_size(), 2, [&](std::span<const Vertex> xy) {
        return evaluate(star_table, xy[0], xy[1]);
    });
}

auto BinaryTerm::contains_x() const -> bool
{
    return _node->has_x;
}

auto BinaryTerm::contains_y() const -> bool
{
    return _node->has_y;
}

auto BinaryTerm::to_string() const -> string
{
    return term_string(*_node);
}

auto treecsp::s_set(Vertex c, Vertex c2, const OperationTable & t) -> SSet
{
    SSet result;
    result.c = c;
    result.c2 = c2;
    result.elements = VertexSet(t.base_size());
    vector<Vertex> order;

    auto add = [&](const BinaryTerm & term) {
        Vertex v = term.evaluate(t, c, c2);
        if (! result.elements.test(v)) {
            result.elements.set(v);
            result.terms.emplace(v, term);
            order.push_back(v);
        }
    };

    auto x = BinaryTerm::x(), y = BinaryTerm::y();
    add(BinaryTerm::star(x, y));
    add(BinaryTerm::star(y, x));

    for (size_t head = 0; head < order.size(); ++head) {
        Vertex s = order[head];
        auto term = result.terms.at(s);
        add(BinaryTerm::star(x, term));
        add(BinaryTerm::star(y, term));
        add(BinaryTerm::star(term, x));
        add(BinaryTerm::star(term, y));
        for (size_t j = 0; j <= head; ++j) {
            auto other = result.terms.at(order[j]);
            add(BinaryTerm::star(term, other));
            add(BinaryTerm::star(other, term));
        }
    }
    return result;
}

auto treecsp::verify_absorption(const AbsorptionCertificate & cert, uint64_t budget) -> bool
{
    const auto & a = cert.superset;
    const auto & b = cert.subset;
    if (b.none() || ! b.is_subset_of(a))
        return false;
    if (cert.op.arity() > 64)
        throw BudgetExceeded("absorption check on an operation of arity " + to_string(cert.op.arity()));
    auto k = static_cast<unsigned>(cert.op.arity());
    auto a_members = a.members(), b_members = b.members();

    auto eval = [&](const vector<Vertex> & args) {
        return cert.op.is_leaf() ? cert.op.table()(args) : cert.op.evaluate(args);
    };

    uint64_t work = 0;
    auto charge = [&](uint64_t n) {
        if ((work += n) > budget)
            throw BudgetExceeded("absorption check exceeds its evaluation budget");
    };

    // closure of both sets
    for (auto * set : {&a_members, &b_members}) {
        auto count = checked_power(set->size(), k, budget);
        if (! count)
            throw BudgetExceeded("absorption check exceeds its evaluation budget");
        charge(*count);
        auto & target = set == &a_members ? a : b;
        vector<size_t> pos(k, 0);
        vector<Vertex> args(k);
        while (true) {
            for (unsigned i = 0; i < k; ++i)
                args[i] = (*set)[pos[i]];
            if (! target.test(eval(args)))
                return false;
            unsigned i = k;
            while (i > 0 && ++pos[i - 1] == set->size())
                pos[--i] = 0;
            if (i == 0)
                break;
        }
    }

    // one coordinate from the superset, the rest from the subset
    for (unsigned free = 0; free < k; ++free) {
        auto count = checked_power(b_members.size(), k - 1, budget);
        if (! count)
            throw BudgetExceeded("absorption check exceeds its evaluation budget");
        charge(saturating_mul(*count, a_members.size()));
        vector<size_t> pos(k, 0);
        vector<Vertex> args(k);
        while (true) {
            for (unsigned i = 0; i < k; ++i)
                args[i] = i == free ? a_members[pos[i]] : b_members[pos[i]];
            if (! b.test(eval(args)))
                return false;
            unsigned i = k;
            while (i > 0) {
                size_t limit = (i - 1) == free ? a_members.size() : b_members.size();
                if (++pos[i - 1] < limit)
                    break;
                pos[--i] = 0;
            }
            if (i == 0)
                break;
        }
    }
    return true;
}

auto treecsp::singleton_absorbs_via_wnu(const OperationTable & polymer, Vertex o, const VertexSet & a) -> bool
{
    bool ok = true;
    a.for_each([&](size_t x) {
        if (polymer(o, static_cast<Vertex>(x)) != o)
            ok = false;
    });
    return ok;
}

auto treecsp::verify_weak_pointing(const WeakPointingCertificate & cert, uint64_t budget) -> bool
{
    const auto & op = cert.op;
    if (op.arity() > budget)
        throw ArityBudgetExceeded("pointing certificate of arity " + to_string(op.arity()) + " exceeds the budget");
    auto n = static_cast<size_t>(op.arity());
    if (cert.witnesses.size() != n || cert.x.none() || cert.y.none())
        return false;
    if (! is_idempotent(op))
        return false;
    for (auto & w : cert.witnesses)
        if (w.size() != n || std::any_of(w.begin(), w.end(), [&](Vertex v) { return v >= op.base_size(); }))
            return false;

    for (size_t i = 0; i < n; ++i) {
        vector<Vertex> args = cert.witnesses[i];
        bool ok = true;
        cert.x.for_each([&](size_t x) {
            if (! ok)
                return;
            args[i] = static_cast<Vertex>(x);
            if (! cert.y.test(op.evaluate(args, budget)))
                ok = false;
        });
        if (ok && cert.alpha)
            cert.alpha_domain.for_each([&](size_t u) {
                if (! ok)
                    return;
                args[i] = static_cast<Vertex>(u);
                if (op.evaluate(args, budget) != (*cert.alpha)[u])
                    ok = false;
            });
        if (! ok)
            return false;
    }
    return true;
}

auto treecsp::identity_pointing(size_t n, Vertex x, const VertexSet & alpha_domain) -> WeakPointingCertificate
{
    WeakPointingCertificate cert;
    cert.op = OperationExpr::leaf(OperationTable::identity(n));
    cert.x = VertexSet(n);
    cert.x.set(x);
    cert.y = cert.x;
    cert.witnesses = {{x}};
    vector<Vertex> alpha(n);
    for (Vertex v = 0; v < n; ++v)
        alpha[v] = v;
    cert.alpha = alpha;
    cert.alpha_domain = alpha_domain;
    return cert;
}

auto treecsp::compose_pointing(const WeakPointingCertificate & f_cert, const WeakPointingCertificate & g_cert,
    uint64_t arity_budget) -> WeakPointingCertificate
{
    auto arity = saturating_mul(f_cert.op.arity(), g_cert.op.arity());
    if (arity > arity_budget)
        throw ArityBudgetExceeded("composed pointing operation of arity " + (arity == saturated ? string("> 2^64") : to_string(arity))
            + " exceeds the arity budget " + to_string(arity_budget));
    if (! f_cert.y.is_subset_of(g_cert.x))
        throw PreconditionViolated("composition needs the first target inside the second source");
    if (! verify_weak_pointing(f_cert, arity_budget) || ! verify_weak_pointing(g_cert, arity_budget))
        throw PreconditionViolated("composition inputs do not verify");

    const auto k = static_cast<size_t>(f_cert.op.arity()), n = static_cast<size_t>(g_cert.op.arity());
    WeakPointingCertificate result;
    result.op = OperationExpr::compose(g_cert.op, f_cert.op);
    result.x = f_cert.x;
    result.y = g_cert.y;
    // c^{i,j}: block l holds k copies of b^i_l, except block i which holds a^j
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < k; ++j) {
            vector<Vertex> c;
            c.reserve(n * k);
            for (size_t l = 0; l < n; ++l) {
                if (l == i)
                    c.insert(c.end(), f_cert.witnesses[j].begin(), f_cert.witnesses[j].end());
                else
                    c.insert(c.end(), k, g_cert.witnesses[i][l]);
            }
            result.witnesses.push_back(std::move(c));
        }

    if (f_cert.alpha && g_cert.alpha) {
        bool composable = true;
        f_cert.alpha_domain.for_each([&](size_t u) {
            if (! g_cert.alpha_domain.test((*f_cert.alpha)[u]))
                composable = false;
        });
        if (composable) {
            vector<Vertex> alpha(f_cert.alpha->size());
            for (size_t u = 0; u < alpha.size(); ++u)
                alpha[u] = (*g_cert.alpha)[(*f_cert.alpha)[u]];
            result.alpha = alpha;
            result.alpha_domain = f_cert.alpha_domain;
        }
    }

    if (! verify_weak_pointing(result, arity_budget))
        throw PreconditionViolated("composed pointing certificate failed verification");
    return result;
}
