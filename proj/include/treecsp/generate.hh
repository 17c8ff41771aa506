#pragma once

#include <treecsp/spectree.hh>

#include <cstdint>
#include <random>

namespace treecsp
{
    /// Seeded generator with bounded draws done by rejection, so sequences
    /// do not depend on the standard library's distribution implementations.
    class Rng
    {
        private:
            std::mt19937_64 _engine;

        public:
            explicit Rng(std::uint64_t seed) :
                _engine(seed)
            {
            }

            auto next() -> std::uint64_t { return _engine(); }

            /// Uniform in [0, bound); bound must be positive.
            auto below(std::uint64_t bound) -> std::uint64_t;

            auto chance(double p) -> bool;
    };

    inline constexpr std::size_t max_random_path_length = 48;

    /// Uniform over minimal paths of height h with length at most max_len.
    auto random_minimal_path(Rng & rng, int h, std::size_t max_len) -> OrientedPath;

    /// Number of minimal paths of height h and length exactly len.
    auto count_minimal_paths(int h, std::size_t len) -> std::uint64_t;

    /// A uniform spanning tree of the complete bipartite template, with each
    /// edge replaced by a uniform minimal path. Edges are sorted by (a, b).
    /// Throws InvalidParams.
    auto gen_random_special_tree(std::uint64_t seed, std::size_t a_count, std::size_t b_count, int h,
        std::size_t max_path_len) -> SpecialTreeSpec;

    /// A random digraph on n vertices, each ordered pair of distinct vertices
    /// an edge with probability p.
    auto random_digraph(Rng & rng, std::size_t n, double p, bool loops = false) -> Digraph;
}
