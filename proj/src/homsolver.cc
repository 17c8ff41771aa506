#include <treecsp/homsolver.hh>
#include <treecsp/errors.hh>

#include <algorithm>
#include <bit>
#include <cstring>

using namespace treecsp;

using std::size_t;
using std::uint64_t;
using std::vector;

Relation::Relation(size_t left, size_t right) :
    _left(left),
    _right(right),
    _left_words(words_for(left)),
    _right_words(words_for(right)),
    _fwd(left * words_for(right), 0),
    _bwd(right * words_for(left), 0)
{
}

auto Relation::from_digraph(const Digraph & h) -> Relation
{
    Relation r(h.vertex_count(), h.vertex_count());
    for (auto & [u, v] : h.edges())
        r.add(u, v);
    return r;
}

auto Relation::add(Vertex a, Vertex b) -> void
{
    _fwd[a * _right_words + (b >> 6)] |= uint64_t{1} << (b & 63);
    _bwd[b * _left_words + (a >> 6)] |= uint64_t{1} << (a & 63);
}

auto Relation::contains(Vertex a, Vertex b) const -> bool
{
    return (_fwd[a * _right_words + (b >> 6)] >> (b & 63)) & 1;
}

CspInstance::CspInstance(size_t var_count, size_t domain_size) :
    _vars(var_count),
    _values(domain_size),
    _words(std::max<size_t>(1, words_for(domain_size))),
    _domains(var_count * std::max<size_t>(1, words_for(domain_size)), 0)
{
    Bitset full(domain_size, true);
    for (size_t v = 0; v < _vars; ++v)
        std::copy(full.data(), full.data() + full.word_count(), domain_data(v));
}

auto CspInstance::domain(size_t var) const -> Bitset
{
    Bitset result(_values);
    std::copy(domain_data(var), domain_data(var) + result.word_count(), result.data());
    return result;
}

auto CspInstance::set_domain(size_t var, const Bitset & values) -> void
{
    if (values.size() != _values)
        throw InvalidParams("domain size mismatch");
    std::fill(domain_data(var), domain_data(var) + _words, 0);
    std::copy(values.data(), values.data() + values.word_count(), domain_data(var));
}

auto CspInstance::restrict_domain(size_t var, const Bitset & values) -> void
{
    if (values.size() != _values)
        throw InvalidParams("domain size mismatch");
    auto d = domain_data(var);
    for (size_t w = 0; w < values.word_count(); ++w)
        d[w] &= values.data()[w];
}

auto CspInstance::pin(size_t var, Vertex value) -> void
{
    auto d = domain_data(var);
    bool present = (d[value >> 6] >> (value & 63)) & 1;
    std::fill(d, d + _words, 0);
    if (present)
        d[value >> 6] = uint64_t{1} << (value & 63);
}

auto CspInstance::domain_count(size_t var) const -> size_t
{
    size_t n = 0;
    for (size_t w = 0; w < _words; ++w)
        n += std::popcount(domain_data(var)[w]);
    return n;
}

auto CspInstance::add_relation(Relation r) -> size_t
{
    if (r.left_size() != _values || r.right_size() != _values)
        throw InvalidParams("relation does not match the domain size");
    _relations.push_back(std::move(r));
    return _relations.size() - 1;
}

auto CspInstance::add_constraint(size_t u, size_t v, size_t relation) -> void
{
    if (u >= _vars || v >= _vars || relation >= _relations.size())
        throw InvalidParams("constraint references a missing variable or relation");
    if (u == v) {
        auto & r = _relations[relation];
        auto d = domain_data(u);
        for (Vertex a = 0; a < _values; ++a)
            if (! r.contains(a, a))
                d[a >> 6] &= ~(uint64_t{1} << (a & 63));
        return;
    }
    _constraints.push_back({u, v, relation});
}

auto CspInstance::set_tag(size_t var, std::string tag) -> void
{
    if (_tags.size() < _vars)
        _tags.resize(_vars);
    _tags[var] = std::move(tag);
}

auto CspInstance::tag(size_t var) const -> std::string
{
    if (var < _tags.size() && ! _tags[var].empty())
        return _tags[var];
    return "v" + std::to_string(var);
}

auto treecsp::build_instance(const Digraph & x, const Digraph & h, const Pins & pins) -> CspInstance
{
    CspInstance inst(x.vertex_count(), h.vertex_count());
    for (auto & [v, t] : pins) {
        if (v >= x.vertex_count() || t >= h.vertex_count())
            throw InvalidPin("pin " + std::to_string(v) + "=" + std::to_string(t) + " is out of range");
        inst.pin(v, t);
    }
    auto rel = inst.add_relation(Relation::from_digraph(h));
    for (auto & [u, v] : x.edges())
        inst.add_constraint(u, v, rel);
    return inst;
}

namespace
{
    /// Arc-consistency engine over a flat domain array, with a trail so that
    /// search can undo propagation.
    class Engine
    {
        private:
            struct Watch
            {
                std::uint32_t var;
                // rows indexed by var's values, over the watched variable's values
                const uint64_t * rows;
            };

            const CspInstance & _inst;
            size_t _words;
            vector<uint64_t> _dom;
            vector<size_t> _watch_start;
            vector<Watch> _watches;

            // trail of saved domains
            vector<std::uint32_t> _trail_vars;
            vector<uint64_t> _trail_words;
            vector<uint64_t> _stamp;
            uint64_t _level_id = 0;
            bool _recording = false;

            vector<std::uint32_t> _queue;
            vector<char> _queued;

            auto save(size_t var) -> void
            {
                if (! _recording || _stamp[var] == _level_id)
                    return;
                _stamp[var] = _level_id;
                _trail_vars.push_back(static_cast<std::uint32_t>(var));
                _trail_words.insert(_trail_words.end(), dom(var), dom(var) + _words);
            }

            // Drop values of x without support in y. Returns true on change.
            auto revise(size_t x, const uint64_t * rows, const uint64_t * dy) -> bool
            {
                uint64_t * dx = dom(x);
                if (_words == 1) {
                    uint64_t keep = 0, bits = dx[0];
                    while (bits) {
                        auto a = static_cast<size_t>(std::countr_zero(bits));
                        bits &= bits - 1;
                        if (rows[a] & dy[0])
                            keep |= uint64_t{1} << a;
                    }
                    if (keep == dx[0])
                        return false;
                    save(x);
                    dx[0] = keep;
                    return true;
                }
                auto & k = kernels::active();
                bool changed = false;
                for (size_t w = 0; w < _words; ++w) {
                    uint64_t bits = dx[w];
                    while (bits) {
                        size_t a = w * 64 + static_cast<size_t>(std::countr_zero(bits));
                        bits &= bits - 1;
                        if (! k.and_any(rows + a * _words, dy, _words)) {
                            if (! changed)
                                save(x);
                            changed = true;
                            dx[w] &= ~(uint64_t{1} << (a & 63));
                        }
                    }
                }
                return changed;
            }

        public:
            explicit Engine(const CspInstance & inst) :
                _inst(inst),
                _words(inst.words()),
                _dom(inst.all_domains()),
                _stamp(inst.var_count(), 0),
                _queued(inst.var_count(), 0)
            {
                for (auto & r : inst.relations())
                    if (r.left_words() != _words && inst.domain_size() > 0)
                        throw InvalidParams("relation layout mismatch");
                const size_t n = inst.var_count();
                vector<size_t> count(n + 1, 0);
                for (auto & c : inst.constraints()) {
                    ++count[c.u + 1];
                    ++count[c.v + 1];
                }
                for (size_t i = 0; i < n; ++i)
                    count[i + 1] += count[i];
                _watch_start = count;
                _watches.resize(count[n]);
                vector<size_t> fill(count.begin(), count.end() - 1);
                // when D(v) changes, u must be revised with u's forward rows,
                // and vice versa
                for (auto & c : inst.constraints()) {
                    auto & r = inst.relations()[c.relation];
                    _watches[fill[c.v]++] = {static_cast<std::uint32_t>(c.u), r.forward(0)};
                    _watches[fill[c.u]++] = {static_cast<std::uint32_t>(c.v), r.backward(0)};
                }
            }

            auto dom(size_t var) -> uint64_t * { return _dom.data() + var * _words; }
            auto dom(size_t var) const -> const uint64_t * { return _dom.data() + var * _words; }
            auto domains() const -> const vector<uint64_t> & { return _dom; }
            auto var_count() const -> size_t { return _inst.var_count(); }

            auto count(size_t var) const -> size_t
            {
                size_t n = 0;
                for (size_t w = 0; w < _words; ++w)
                    n += std::popcount(dom(var)[w]);
                return n;
            }

            auto empty(size_t var) const -> bool
            {
                for (size_t w = 0; w < _words; ++w)
                    if (dom(var)[w])
                        return false;
                return true;
            }

            auto neighbours(size_t var) const -> std::span<const Watch>
            {
                return {_watches.data() + _watch_start[var], _watches.data() + _watch_start[var + 1]};
            }

            auto start_recording() -> void
            {
                _recording = true;
            }

            auto trail_mark() const -> size_t { return _trail_vars.size(); }

            auto new_level() -> void { ++_level_id; }

            auto undo_to(size_t mark) -> void
            {
                while (_trail_vars.size() > mark) {
                    auto var = _trail_vars.back();
                    _trail_vars.pop_back();
                    std::copy(_trail_words.end() - static_cast<std::ptrdiff_t>(_words), _trail_words.end(), dom(var));
                    _trail_words.resize(_trail_words.size() - _words);
                    _stamp[var] = 0;
                }
                ++_level_id;
            }

            auto forget_trail() -> void
            {
                _trail_vars.clear();
                _trail_words.clear();
                ++_level_id;
            }

            auto assign(size_t var, Vertex value) -> void
            {
                save(var);
                std::fill(dom(var), dom(var) + _words, 0);
                dom(var)[value >> 6] = uint64_t{1} << (value & 63);
            }

            auto enqueue(size_t var) -> void
            {
                if (! _queued[var]) {
                    _queued[var] = 1;
                    _queue.push_back(static_cast<std::uint32_t>(var));
                }
            }

            /// Propagates from the queued variables; false on a wipe-out.
            auto propagate() -> bool
            {
                size_t head = 0;
                bool ok = true;
                while (head < _queue.size()) {
                    auto y = _queue[head++];
                    _queued[y] = 0;
                    const uint64_t * dy = dom(y);
                    for (auto & w : neighbours(y)) {
                        if (revise(w.var, w.rows, dy)) {
                            if (empty(w.var)) {
                                ok = false;
                                break;
                            }
                            enqueue(w.var);
                        }
                    }
                    if (! ok)
                        break;
                    if (head > 4096 && head * 2 > _queue.size()) {
                        _queue.erase(_queue.begin(), _queue.begin() + static_cast<std::ptrdiff_t>(head));
                        head = 0;
                    }
                }
                for (size_t i = head; i < _queue.size(); ++i)
                    _queued[_queue[i]] = 0;
                _queue.clear();
                return ok;
            }

            auto propagate_all() -> bool
            {
                for (size_t v = 0; v < var_count(); ++v)
                    if (empty(v))
                        return false;
                for (size_t v = 0; v < var_count(); ++v)
                    enqueue(v);
                return propagate();
            }
    };

    auto lowest_value(const uint64_t * d, size_t words) -> size_t
    {
        for (size_t w = 0; w < words; ++w)
            if (d[w])
                return w * 64 + static_cast<size_t>(std::countr_zero(d[w]));
        return Bitset::npos;
    }

    class BudgetClock
    {
        private:
            const SearchOptions & _options;
            std::chrono::steady_clock::time_point _start = std::chrono::steady_clock::now();
            uint64_t _nodes = 0;

        public:
            explicit BudgetClock(const SearchOptions & options) :
                _options(options)
            {
            }

            auto nodes() const -> uint64_t { return _nodes; }

            auto tick() -> void
            {
                ++_nodes;
                if (_options.node_budget && _nodes > _options.node_budget)
                    throw BudgetExceeded("search node budget of " + std::to_string(_options.node_budget) + " exhausted");
                if (_options.time_budget.count() > 0 && (_nodes & 255) == 0
                        && std::chrono::steady_clock::now() - _start > _options.time_budget)
                    throw BudgetExceeded("search time budget exhausted");
            }
    };

    // Components of the constraint graph restricted to undecided variables,
    // each listed in ascending order, ordered by smallest member.
    auto open_components(const Engine & engine) -> vector<vector<std::uint32_t>>
    {
        const size_t n = engine.var_count();
        constexpr std::uint32_t unset = ~std::uint32_t{0};
        vector<std::uint32_t> id(n, unset);
        vector<vector<std::uint32_t>> result;
        vector<std::uint32_t> stack;
        for (size_t s = 0; s < n; ++s) {
            if (id[s] != unset || engine.count(s) <= 1)
                continue;
            auto c = static_cast<std::uint32_t>(result.size());
            result.emplace_back();
            id[s] = c;
            stack.push_back(static_cast<std::uint32_t>(s));
            while (! stack.empty()) {
                auto v = stack.back();
                stack.pop_back();
                result[c].push_back(v);
                for (auto & w : engine.neighbours(v))
                    if (id[w.var] == unset && engine.count(w.var) > 1) {
                        id[w.var] = c;
                        stack.push_back(w.var);
                    }
            }
            std::sort(result[c].begin(), result[c].end());
        }
        return result;
    }

    auto search_part(Engine & engine, const vector<std::uint32_t> & vars, BudgetClock & clock, SearchStats & stats) -> bool
    {
        const size_t words = engine.domains().size() / std::max<size_t>(1, engine.var_count());
        struct Frame
        {
            std::uint32_t var;
            size_t mark;
            vector<uint64_t> remaining;
        };
        vector<Frame> stack;

        auto select = [&]() -> size_t {
            size_t best = Bitset::npos, best_count = 0;
            for (auto v : vars) {
                auto c = engine.count(v);
                if (c > 1 && (best == Bitset::npos || c < best_count)) {
                    best = v;
                    best_count = c;
                    if (c == 2)
                        break;
                }
            }
            return best;
        };

        while (true) {
            auto v = select();
            if (v == Bitset::npos)
                return true;
            stack.push_back({static_cast<std::uint32_t>(v), engine.trail_mark(),
                vector<uint64_t>(engine.dom(v), engine.dom(v) + words)});

            bool advanced = false;
            while (! stack.empty()) {
                auto & f = stack.back();
                engine.undo_to(f.mark);
                auto a = lowest_value(f.remaining.data(), words);
                if (a == Bitset::npos) {
                    stack.pop_back();
                    continue;
                }
                f.remaining[a >> 6] &= ~(uint64_t{1} << (a & 63));
                clock.tick();
                engine.new_level();
                engine.assign(f.var, static_cast<Vertex>(a));
                engine.enqueue(f.var);
                if (engine.propagate()) {
                    advanced = true;
                    break;
                }
                ++stats.failures;
            }
            if (! advanced)
                return false;
        }
    }
}

auto treecsp::enforce_arc_consistency(CspInstance & inst) -> bool
{
    Engine engine(inst);
    bool ok = engine.propagate_all();
    inst.all_domains() = engine.domains();
    return ok;
}

auto treecsp::arc_consistency(const CspInstance & inst) -> std::optional<CspInstance>
{
    CspInstance copy = inst;
    if (! enforce_arc_consistency(copy))
        return std::nullopt;
    return copy;
}

auto treecsp::solve(const CspInstance & inst, const SearchOptions & options, SearchStats * stats_out)
    -> std::optional<vector<Vertex>>
{
    SearchStats stats;
    BudgetClock clock(options);
    Engine engine(inst);

    auto finish = [&](bool found) -> std::optional<vector<Vertex>> {
        stats.nodes = clock.nodes();
        if (stats_out)
            *stats_out = stats;
        if (! found)
            return std::nullopt;
        vector<Vertex> result(inst.var_count());
        for (size_t v = 0; v < inst.var_count(); ++v)
            result[v] = static_cast<Vertex>(lowest_value(engine.dom(v), inst.words()));
        return result;
    };

    if (inst.var_count() == 0)
        return finish(true);
    if (! engine.propagate_all())
        return finish(false);
    engine.start_recording();

    if (options.decompose) {
        auto parts = open_components(engine);
        stats.components = parts.size();
        for (auto & part : parts) {
            if (! search_part(engine, part, clock, stats))
                return finish(false);
            engine.forget_trail();
        }
        return finish(true);
    }

    vector<std::uint32_t> all(inst.var_count());
    for (size_t v = 0; v < all.size(); ++v)
        all[v] = static_cast<std::uint32_t>(v);
    stats.components = 1;
    return finish(search_part(engine, all, clock, stats));
}

auto treecsp::is_homomorphism(const Digraph & x, const Digraph & h, std::span<const Vertex> map) -> bool
{
    if (map.size() != x.vertex_count())
        return false;
    for (auto v : map)
        if (v >= h.vertex_count())
            return false;
    for (auto & [u, v] : x.edges())
        if (! h.has_edge(map[u], map[v]))
            return false;
    return true;
}

auto treecsp::solve_hom(const Digraph & x, const Digraph & h, const Pins & pins,
    const SearchOptions & options, SearchStats * stats) -> std::optional<Homomorphism>
{
    auto inst = build_instance(x, h, pins);
    auto result = solve(inst, options, stats);
    if (result) {
        bool pins_ok = std::all_of(pins.begin(), pins.end(), [&](auto & p) { return (*result)[p.first] == p.second; });
        if (! pins_ok || ! is_homomorphism(x, h, *result))
            throw Error("internal: solver produced an invalid homomorphism");
    }
    return result;
}

auto treecsp::enumerate_homs(const Digraph & x, const Digraph & h, size_t limit, const Pins & pins,
    uint64_t node_budget) -> vector<Homomorphism>
{
    const size_t n = x.vertex_count(), m = h.vertex_count();
    vector<Homomorphism> result;
    vector<std::optional<Vertex>> pinned(n);
    for (auto & [v, t] : pins) {
        if (v >= n || t >= m)
            throw InvalidPin("pin " + std::to_string(v) + "=" + std::to_string(t) + " is out of range");
        if (pinned[v] && *pinned[v] != t)
            return result;
        pinned[v] = t;
    }
    if (n == 0) {
        result.emplace_back();
        return result;
    }

    // edges grouped by their later endpoint so each is checked once both
    // ends are assigned
    vector<vector<Edge>> closing(n);
    for (auto & [u, v] : x.edges())
        closing[std::max(u, v)].emplace_back(u, v);

    Homomorphism map(n, 0);
    uint64_t nodes = 0;
    auto consistent = [&](size_t i) {
        for (auto & [u, v] : closing[i])
            if (! h.has_edge(map[u], map[v]))
                return false;
        return true;
    };

    // iterative lexicographic DFS
    vector<size_t> next(n, 0);
    size_t depth = 0;
    while (true) {
        bool placed = false;
        while (next[depth] < m) {
            Vertex value = static_cast<Vertex>(next[depth]++);
            if (pinned[depth] && *pinned[depth] != value)
                continue;
            if (++nodes > node_budget)
                throw BudgetExceeded("enumeration node budget exhausted");
            map[depth] = value;
            if (consistent(depth)) {
                placed = true;
                break;
            }
        }
        if (placed) {
            if (depth + 1 == n) {
                result.push_back(map);
                if (limit && result.size() >= limit)
                    return result;
                continue;
            }
            ++depth;
            next[depth] = 0;
            continue;
        }
        if (depth == 0)
            return result;
        --depth;
    }
}
