#include <treecsp/spectree.hh>
#include <treecsp/errors.hh>
#include <treecsp/homsolver.hh>

#include <algorithm>
#include <deque>
#include <map>
#include <set>

using namespace treecsp;

using std::size_t;
using std::string;
using std::to_string;
using std::vector;

auto treecsp::validate_spec(const SpecialTreeSpec & spec) -> void
{
    if (spec.a_count == 0 || spec.b_count == 0)
        throw InvalidSpec("template needs at least one A and one B vertex");
    if (spec.height <= 0)
        throw InvalidSpec("height must be positive");
    if (spec.edges.size() + 1 != spec.a_count + spec.b_count)
        throw InvalidSpec("template must have |A|+|B|-1 edges, has " + to_string(spec.edges.size()));

    std::set<std::pair<size_t, size_t>> seen;
    for (size_t e = 0; e < spec.edges.size(); ++e) {
        auto & edge = spec.edges[e];
        if (edge.a >= spec.a_count || edge.b >= spec.b_count)
            throw InvalidSpec("template edge " + to_string(e) + " has an index out of range");
        if (! seen.emplace(edge.a, edge.b).second)
            throw InvalidSpec("duplicate template edge (" + to_string(edge.a) + "," + to_string(edge.b) + ")");
        if (! is_minimal(edge.path))
            throw InvalidSpec("path " + edge.path.directions() + " of template edge " + to_string(e) + " is not minimal");
        if (edge.path.height() != spec.height)
            throw InvalidSpec("path " + edge.path.directions() + " of template edge " + to_string(e)
                + " has height " + to_string(edge.path.height()) + ", expected " + to_string(spec.height));
    }

    // connectivity of the template (with the edge count this makes it a tree)
    vector<size_t> parent(spec.a_count + spec.b_count);
    for (size_t i = 0; i < parent.size(); ++i)
        parent[i] = i;
    auto find = [&](size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    size_t components = parent.size();
    for (auto & edge : spec.edges) {
        auto x = find(edge.a), y = find(spec.a_count + edge.b);
        if (x != y) {
            parent[x] = y;
            --components;
        }
    }
    if (components != 1)
        throw InvalidSpec("template is not connected");
}

auto treecsp::canned_triad() -> SpecialTreeSpec
{
    // A: 0 = c, 1..3 = t1..t3; B: 0..2 = w1..w3
    SpecialTreeSpec spec;
    spec.a_count = 4;
    spec.b_count = 3;
    spec.height = 4;
    spec.edges = {
        {0, 0, OrientedPath("111011")},
        {1, 0, OrientedPath("110111")},
        {0, 1, OrientedPath("110111")},
        {2, 1, OrientedPath("111011")},
        {0, 2, OrientedPath("11100111")},
        {3, 2, OrientedPath("111011")},
    };
    return spec;
}

auto treecsp::role_name(const VertexRole & role) -> string
{
    switch (role.kind) {
        case RoleKind::A: return "A" + to_string(role.index);
        case RoleKind::B: return "B" + to_string(role.index);
        case RoleKind::Interior: return "P" + to_string(role.index) + ":" + to_string(role.position);
    }
    return "?";
}

SpecialTree::SpecialTree(SpecialTreeSpec spec) :
    _spec(std::move(spec))
{
    validate_spec(_spec);

    size_t n = _spec.a_count + _spec.b_count;
    _roles.resize(n);
    for (size_t i = 0; i < _spec.a_count; ++i)
        _roles[i] = {RoleKind::A, i, 0};
    for (size_t j = 0; j < _spec.b_count; ++j)
        _roles[_spec.a_count + j] = {RoleKind::B, j, 0};

    vector<Edge> edges;
    for (size_t e = 0; e < _spec.edges.size(); ++e) {
        auto & te = _spec.edges[e];
        _path_offset.push_back(n);
        size_t len = te.path.length();
        for (size_t pos = 1; pos < len; ++pos)
            _roles.push_back({RoleKind::Interior, e, pos});
        n += len - 1;
    }

    for (size_t e = 0; e < _spec.edges.size(); ++e) {
        auto & path = _spec.edges[e].path;
        for (size_t i = 0; i < path.length(); ++i) {
            Vertex x = path_vertex(e, i), y = path_vertex(e, i + 1);
            edges.push_back(path.forward(i) ? Edge{x, y} : Edge{y, x});
        }
    }
    _digraph = Digraph(n, std::move(edges));
    _levels = compute_levels(_digraph);

    _template_adj.resize(n);
    for (auto & te : _spec.edges) {
        _template_adj[a_vertex(te.a)].push_back(b_vertex(te.b));
        _template_adj[b_vertex(te.b)].push_back(a_vertex(te.a));
    }
    for (auto & adj : _template_adj)
        std::sort(adj.begin(), adj.end());
}

auto SpecialTree::path_vertex(size_t e, size_t pos) const -> Vertex
{
    auto & te = _spec.edges.at(e);
    if (pos == 0)
        return a_vertex(te.a);
    if (pos == te.path.length())
        return b_vertex(te.b);
    return static_cast<Vertex>(_path_offset[e] + pos - 1);
}

auto SpecialTree::a_set() const -> VertexSet
{
    VertexSet s(vertex_count());
    for (size_t i = 0; i < _spec.a_count; ++i)
        s.set(a_vertex(i));
    return s;
}

auto SpecialTree::b_set() const -> VertexSet
{
    VertexSet s(vertex_count());
    for (size_t j = 0; j < _spec.b_count; ++j)
        s.set(b_vertex(j));
    return s;
}

auto SpecialTree::template_edges() const -> vector<Edge>
{
    vector<Edge> result;
    for (auto & te : _spec.edges)
        result.emplace_back(a_vertex(te.a), b_vertex(te.b));
    return result;
}

auto SpecialTree::template_distances(Vertex from) const -> vector<int>
{
    vector<int> dist(vertex_count(), -1);
    if (! is_template_vertex(from))
        return dist;
    std::deque<Vertex> queue{from};
    dist[from] = 0;
    while (! queue.empty()) {
        auto v = queue.front();
        queue.pop_front();
        for (auto w : _template_adj[v])
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
    }
    return dist;
}

auto SpecialTree::dist_E(Vertex x, Vertex y) const -> int
{
    if (! is_template_vertex(x) || ! is_template_vertex(y))
        throw InvalidParams("dist_E is defined on template vertices only");
    return template_distances(x)[y];
}

auto treecsp::compile(const SpecialTreeSpec & spec) -> SpecialTree
{
    return SpecialTree(spec);
}

namespace
{
    auto check_one_side(const SpecialTree & tree, const VertexSet & s) -> void
    {
        bool any_a = false, any_b = false;
        s.for_each([&](size_t v) {
            if (tree.is_a(static_cast<Vertex>(v)))
                any_a = true;
            else if (tree.is_b(static_cast<Vertex>(v)))
                any_b = true;
            else
                throw MixedLevels("E-neighbourhoods are defined on subsets of A or B, vertex "
                    + to_string(v) + " is interior");
        });
        if (any_a && any_b)
            throw MixedLevels("set mixes A and B vertices");
    }
}

auto treecsp::e_neighborhood(const SpecialTree & tree, const VertexSet & s, unsigned k) -> VertexSet
{
    check_one_side(tree, s);
    VertexSet current = s;
    for (unsigned step = 0; step < k; ++step) {
        VertexSet next(tree.vertex_count());
        current.for_each([&](size_t v) {
            for (auto w : tree.template_neighbours(static_cast<Vertex>(v)))
                next.set(w);
        });
        current = std::move(next);
    }
    return current;
}

auto treecsp::e_neighborhood_closed_form(const SpecialTree & tree, const VertexSet & s, unsigned k) -> VertexSet
{
    check_one_side(tree, s);
    VertexSet result(tree.vertex_count());
    s.for_each([&](size_t c) {
        auto dist = tree.template_distances(static_cast<Vertex>(c));
        for (size_t x = 0; x < dist.size(); ++x)
            if (dist[x] >= 0 && dist[x] <= static_cast<int>(k) && (dist[x] % 2) == static_cast<int>(k % 2))
                result.set(x);
    });
    return result;
}

RootedOrder::RootedOrder(const Digraph & tree, Vertex root) :
    _root(root)
{
    if (! is_oriented_tree(tree))
        throw InvalidGraph("rooted order needs an oriented tree");
    const size_t n = tree.vertex_count();
    _parent.assign(n, root);
    _depth.assign(n, 0);
    _enter.assign(n, 0);
    _exit.assign(n, 0);

    // iterative DFS with enter/exit times
    vector<char> seen(n, 0);
    struct Item
    {
        Vertex v;
        bool leaving;
    };
    vector<Item> stack{{root, false}};
    size_t clock = 0;
    seen[root] = 1;
    while (! stack.empty()) {
        auto [v, leaving] = stack.back();
        stack.pop_back();
        if (leaving) {
            _exit[v] = clock++;
            continue;
        }
        _enter[v] = clock++;
        stack.push_back({v, true});
        vector<Vertex> next;
        for (auto w : tree.out_neighbours(v))
            next.push_back(w);
        for (auto w : tree.in_neighbours(v))
            next.push_back(w);
        std::sort(next.begin(), next.end(), std::greater<>());
        for (auto w : next)
            if (! seen[w]) {
                seen[w] = 1;
                _parent[w] = v;
                _depth[w] = _depth[v] + 1;
                stack.push_back({w, false});
            }
    }
}

auto treecsp::preceq(const SpecialTree & tree, Vertex o, Vertex u, Vertex v) -> bool
{
    return RootedOrder(tree.digraph(), o).preceq(u, v);
}

auto treecsp::attached_paths(const Digraph & g, const LevelAssignment & levels, int h) -> vector<AttachedPath>
{
    vector<AttachedPath> result;
    const size_t n = g.vertex_count();
    auto interior = [&](Vertex v) { return levels.levels[v] > 0 && levels.levels[v] < h; };

    for (Vertex a = 0; a < n; ++a) {
        if (levels.levels[a] != 0)
            continue;
        // DFS through interior levels; every level-h vertex reached ends a path
        vector<std::optional<Vertex>> parent(n);
        vector<char> seen(n, 0);
        vector<Vertex> stack{a};
        seen[a] = 1;
        vector<Vertex> ends;
        while (! stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            if (v != a && levels.levels[v] == h) {
                ends.push_back(v);
                continue;
            }
            auto visit = [&](Vertex w) {
                if (seen[w])
                    return;
                if (! interior(w) && levels.levels[w] != h)
                    return;
                seen[w] = 1;
                parent[w] = v;
                stack.push_back(w);
            };
            for (auto w : g.out_neighbours(v))
                visit(w);
            for (auto w : g.in_neighbours(v))
                visit(w);
        }
        std::sort(ends.begin(), ends.end());
        for (auto b : ends) {
            vector<Vertex> walk{b};
            while (walk.back() != a)
                walk.push_back(*parent[walk.back()]);
            std::reverse(walk.begin(), walk.end());
            string directions;
            for (size_t i = 0; i + 1 < walk.size(); ++i)
                directions.push_back(g.has_edge(walk[i], walk[i + 1]) ? '1' : '0');
            result.push_back({a, b, OrientedPath(directions), walk});
        }
    }
    return result;
}

auto treecsp::recover_top_bottom(const Digraph & g, int h, bool level_only) -> TopBottom
{
    auto levels = compute_levels(g);
    if (levels.height != h)
        throw HeightMismatch("digraph has height " + to_string(levels.height) + ", expected " + to_string(h));

    TopBottom result{VertexSet(g.vertex_count()), VertexSet(g.vertex_count()), {}, OrientedPath()};
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (levels.levels[v] == 0)
            result.a.set(v);
        if (levels.levels[v] == h)
            result.b.set(v);
    }

    auto paths = attached_paths(g, levels, h);
    if (level_only || paths.empty()) {
        for (auto & p : paths)
            result.e.emplace_back(p.a, p.b);
        return result;
    }

    vector<OrientedPath> family;
    for (auto & p : paths)
        family.push_back(p.path);
    result.q = common_onto_minimal_path(family);
    auto qg = result.q.to_digraph();
    auto end = static_cast<Vertex>(result.q.length());

    result.a.for_each([&](size_t u) {
        result.b.for_each([&](size_t v) {
            Pins pins{{0, static_cast<Vertex>(u)}, {end, static_cast<Vertex>(v)}};
            if (solve_hom(qg, g, pins))
                result.e.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
        });
    });
    return result;
}

auto treecsp::recognize_special_tree(const Digraph & g) -> RecognisedTree
{
    if (! is_oriented_tree(g))
        throw NotSpecialTree("not an oriented tree");
    auto levels = compute_levels(g);
    const int h = levels.height;
    if (h < 1)
        throw NotSpecialTree("height must be at least 1");

    vector<Vertex> a_list, b_list;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (levels.levels[v] == 0)
            a_list.push_back(v);
        else if (levels.levels[v] == h)
            b_list.push_back(v);
    }

    auto paths = attached_paths(g, levels, h);
    vector<int> owner(g.vertex_count(), -1);
    for (size_t p = 0; p < paths.size(); ++p)
        for (size_t i = 1; i + 1 < paths[p].vertices.size(); ++i) {
            auto v = paths[p].vertices[i];
            if (owner[v] >= 0)
                throw NotSpecialTree("vertex " + to_string(v) + " is shared by two attached paths");
            owner[v] = static_cast<int>(p);
        }
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        int l = levels.levels[v];
        if (l > 0 && l < h) {
            if (owner[v] < 0)
                throw NotSpecialTree("vertex " + to_string(v) + " lies on no path between the extreme levels");
            if (g.out_neighbours(v).size() + g.in_neighbours(v).size() != 2)
                throw NotSpecialTree("interior vertex " + to_string(v) + " has degree other than 2");
        }
    }

    std::map<Vertex, size_t> a_index, b_index;
    for (size_t i = 0; i < a_list.size(); ++i)
        a_index[a_list[i]] = i;
    for (size_t j = 0; j < b_list.size(); ++j)
        b_index[b_list[j]] = j;

    RecognisedTree result;
    result.spec.a_count = a_list.size();
    result.spec.b_count = b_list.size();
    result.spec.height = h;
    for (auto & p : paths)
        result.spec.edges.push_back({a_index.at(p.a), b_index.at(p.b), p.path});

    try {
        validate_spec(result.spec);
    }
    catch (const InvalidSpec & e) {
        throw NotSpecialTree(e.what());
    }

    SpecialTree compiled(result.spec);
    result.to_compiled.assign(g.vertex_count(), 0);
    for (size_t p = 0; p < paths.size(); ++p)
        for (size_t i = 0; i < paths[p].vertices.size(); ++i)
            result.to_compiled[paths[p].vertices[i]] = compiled.path_vertex(p, i);
    if (compiled.digraph().edge_count() != g.edge_count())
        throw NotSpecialTree("edges outside the attached paths");
    for (auto & [u, v] : g.edges())
        if (! compiled.digraph().has_edge(result.to_compiled[u], result.to_compiled[v]))
            throw NotSpecialTree("edge (" + to_string(u) + "," + to_string(v) + ") is not preserved");
    return result;
}
