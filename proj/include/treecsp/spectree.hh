#pragma once

#include <treecsp/digraph.hh>
#include <treecsp/minpath.hh>

#include <cstddef>
#include <string>
#include <vector>

namespace treecsp
{
    /// One edge (a, b) of the height-1 template, with the minimal path that
    /// replaces it.
    struct TemplateEdge
    {
        std::size_t a = 0, b = 0;
        OrientedPath path;

        friend auto operator==(const TemplateEdge &, const TemplateEdge &) -> bool = default;
    };

    /// A bipartite tree template over A = {0..a_count-1}, B = {0..b_count-1}
    /// together with a minimal path of height `height` per template edge. The
    /// edge listing order doubles as the linear order on template edges.
    struct SpecialTreeSpec
    {
        std::size_t a_count = 0, b_count = 0;
        int height = 0;
        std::vector<TemplateEdge> edges;

        friend auto operator==(const SpecialTreeSpec &, const SpecialTreeSpec &) -> bool = default;
    };

    /// Throws InvalidSpec naming the first violated requirement.
    auto validate_spec(const SpecialTreeSpec & spec) -> void;

    /// The 39-vertex triad: A = {c, t1, t2, t3}, B = {w1, w2, w3}.
    auto canned_triad() -> SpecialTreeSpec;

    enum class RoleKind
    {
        A,
        B,
        Interior
    };

    /// For A and B vertices, index is the template index. For interior
    /// vertices, index is the template edge and position the place along its
    /// path (1 .. length-1).
    struct VertexRole
    {
        RoleKind kind = RoleKind::A;
        std::size_t index = 0;
        std::size_t position = 0;

        friend auto operator==(const VertexRole &, const VertexRole &) -> bool = default;
    };

    // A<i>, B<j>, P<edge>:<pos>
    auto role_name(const VertexRole & role) -> std::string;

    /// A compiled special tree. Vertex numbering: A block, B block, then the
    /// interior vertices of each path in template edge order.
    class SpecialTree
    {
        private:
            SpecialTreeSpec _spec;
            Digraph _digraph;
            LevelAssignment _levels;
            std::vector<VertexRole> _roles;
            std::vector<std::size_t> _path_offset;
            std::vector<std::vector<Vertex>> _template_adj;

        public:
            // throws InvalidSpec
            explicit SpecialTree(SpecialTreeSpec spec);

            auto spec() const -> const SpecialTreeSpec & { return _spec; }
            auto digraph() const -> const Digraph & { return _digraph; }
            auto levels() const -> const LevelAssignment & { return _levels; }
            auto level(Vertex v) const -> int { return _levels.levels[v]; }
            auto height() const -> int { return _spec.height; }
            auto vertex_count() const -> std::size_t { return _digraph.vertex_count(); }
            auto role(Vertex v) const -> const VertexRole & { return _roles[v]; }
            auto roles() const -> const std::vector<VertexRole> & { return _roles; }

            auto a_vertex(std::size_t i) const -> Vertex { return static_cast<Vertex>(i); }
            auto b_vertex(std::size_t j) const -> Vertex { return static_cast<Vertex>(_spec.a_count + j); }
            /// Vertex at position pos of the path replacing template edge e
            /// (0 is the A end, length the B end).
            auto path_vertex(std::size_t e, std::size_t pos) const -> Vertex;

            auto is_a(Vertex v) const -> bool { return _roles[v].kind == RoleKind::A; }
            auto is_b(Vertex v) const -> bool { return _roles[v].kind == RoleKind::B; }
            auto is_template_vertex(Vertex v) const -> bool { return _roles[v].kind != RoleKind::Interior; }

            auto a_set() const -> VertexSet;
            auto b_set() const -> VertexSet;

            /// Template neighbours of an A or B vertex, ascending.
            auto template_neighbours(Vertex v) const -> const std::vector<Vertex> & { return _template_adj[v]; }

            /// Template edges as (A vertex, B vertex) pairs, in spec order.
            auto template_edges() const -> std::vector<Edge>;

            /// Template distance from x to every vertex; -1 for interior ones.
            auto template_distances(Vertex from) const -> std::vector<int>;
            auto dist_E(Vertex x, Vertex y) const -> int;
    };

    auto compile(const SpecialTreeSpec & spec) -> SpecialTree;

    /// E_k(S) by the inductive definition. S must lie within A or within B;
    /// throws MixedLevels otherwise.
    auto e_neighborhood(const SpecialTree & tree, const VertexSet & s, unsigned k) -> VertexSet;

    /// E_k(S) by the distance/parity characterisation.
    auto e_neighborhood_closed_form(const SpecialTree & tree, const VertexSet & s, unsigned k) -> VertexSet;

    /// The tree order rooted at o: u <= v iff u lies on the unique oriented
    /// path from o to v. Requires an oriented tree.
    class RootedOrder
    {
        private:
            Vertex _root = 0;
            std::vector<Vertex> _parent;
            std::vector<std::size_t> _depth, _enter, _exit;

        public:
            RootedOrder() = default;
            RootedOrder(const Digraph & tree, Vertex root);

            auto root() const -> Vertex { return _root; }
            auto parent(Vertex v) const -> Vertex { return _parent[v]; }
            auto depth(Vertex v) const -> std::size_t { return _depth[v]; }

            auto preceq(Vertex u, Vertex v) const -> bool
            {
                return _enter[u] <= _enter[v] && _exit[v] <= _exit[u];
            }

            auto precedes(Vertex u, Vertex v) const -> bool { return u != v && preceq(u, v); }
    };

    auto preceq(const SpecialTree & tree, Vertex o, Vertex u, Vertex v) -> bool;

    /// A path between a level-0 and a level-h vertex whose interior avoids
    /// both extreme levels.
    struct AttachedPath
    {
        Vertex a = 0, b = 0;
        OrientedPath path;
        std::vector<Vertex> vertices;
    };

    /// All attached paths of a balanced oriented tree of height h, ordered
    /// by (a, b).
    auto attached_paths(const Digraph & g, const LevelAssignment & levels, int h) -> std::vector<AttachedPath>;

    struct TopBottom
    {
        VertexSet a, b;
        std::vector<Edge> e;
        OrientedPath q;
    };

    /// Recovers A, B and the template relation E of a balanced oriented tree:
    /// (u, v) is in E when the common minimal path of all attached paths maps
    /// into g with its ends pinned to u and v. level_only takes E to be the
    /// endpoint pairs of the attached paths instead.
    auto recover_top_bottom(const Digraph & g, int h, bool level_only = false) -> TopBottom;

    struct RecognisedTree
    {
        SpecialTreeSpec spec;
        // input vertex -> vertex of compile(spec)
        std::vector<Vertex> to_compiled;
    };

    /// Reads a digraph as a special tree; A and B are indexed by ascending
    /// input vertex, edges ordered by (a, b). Throws NotSpecialTree.
    auto recognize_special_tree(const Digraph & g) -> RecognisedTree;
}
