#pragma once

#include <treecsp/bitset.hh>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace treecsp
{
    using Edge = std::pair<Vertex, Vertex>;

    /// Finite digraph over dense vertices 0..n-1. Immutable once built; edges
    /// keep their insertion order, adjacency lists are sorted.
    class Digraph
    {
        private:
            std::size_t _n = 0;
            std::vector<Edge> _edges;
            std::vector<std::size_t> _out_start, _in_start;
            std::vector<Vertex> _out, _in;

        public:
            Digraph() = default;

            // throws InvalidGraph on out-of-range endpoints or duplicate edges
            Digraph(std::size_t vertex_count, std::vector<Edge> edges);

            auto vertex_count() const -> std::size_t { return _n; }
            auto edge_count() const -> std::size_t { return _edges.size(); }
            auto edges() const -> const std::vector<Edge> & { return _edges; }

            auto out_neighbours(Vertex v) const -> std::span<const Vertex>
            {
                return {_out.data() + _out_start[v], _out.data() + _out_start[v + 1]};
            }

            auto in_neighbours(Vertex v) const -> std::span<const Vertex>
            {
                return {_in.data() + _in_start[v], _in.data() + _in_start[v + 1]};
            }

            auto has_edge(Vertex u, Vertex v) const -> bool;

            auto induced(const std::vector<Vertex> & keep) const -> Digraph;
            auto reversed() const -> Digraph;

            friend auto operator==(const Digraph & a, const Digraph & b) -> bool;
    };

    struct LevelAssignment
    {
        std::vector<int> levels;
        int height = 0;
    };

    /// Levels of a connected balanced digraph, minimum 0. Throws NotBalanced,
    /// or InvalidGraph if g is disconnected.
    auto compute_levels(const Digraph & g) -> LevelAssignment;

    /// Levels normalised to minimum 0 in every weak component; height is the
    /// largest component height.
    auto compute_levels_per_component(const Digraph & g) -> LevelAssignment;

    auto connected_components(const Digraph & g) -> std::vector<VertexSet>;
    auto is_connected(const Digraph & g) -> bool;
    auto is_oriented_tree(const Digraph & g) -> bool;

    inline constexpr std::uint64_t default_power_budget = 5'000'000;

    /// n^k, or nullopt on overflow past the cap.
    auto checked_power(std::uint64_t base, unsigned exponent, std::uint64_t cap) -> std::optional<std::uint64_t>;

    /// Tuple index <-> coordinates, leftmost coordinate most significant.
    auto encode_tuple(std::span<const Vertex> coords, std::size_t base) -> std::uint64_t;
    auto decode_tuple(std::uint64_t index, std::size_t base, unsigned arity) -> std::vector<Vertex>;

    /// Calls f(source_index, target_index) for every edge of g^k without
    /// materialising it.
    auto for_each_power_edge(const Digraph & g, unsigned k,
        const std::function<void (std::uint64_t, std::uint64_t)> & f) -> void;

    /// g^n materialised; throws BudgetExceeded past budget tuples.
    auto direct_power(const Digraph & g, unsigned n, std::uint64_t budget = default_power_budget) -> Digraph;

    /// Tuples of g^n weakly connected to a diagonal tuple, as a set over
    /// tuple indices.
    auto diagonal_component(const Digraph & g, unsigned n, std::uint64_t budget = default_power_budget) -> Bitset;
}
