#pragma once

#include <treecsp/digraph.hh>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace treecsp
{
    /// An oriented path written as its direction string, read from the
    /// initial vertex: '1' is a forward edge, '0' a backward edge. Position i
    /// is the i-th vertex, so there are length()+1 vertices.
    class OrientedPath
    {
        private:
            std::string _directions;

        public:
            OrientedPath() = default;
            // throws ParseError on characters other than '0' and '1'
            explicit OrientedPath(std::string directions);

            auto directions() const -> const std::string & { return _directions; }
            auto length() const -> std::size_t { return _directions.size(); }
            auto vertex_count() const -> std::size_t { return _directions.size() + 1; }
            auto forward(std::size_t step) const -> bool { return _directions[step] == '1'; }

            /// Level of every position, shifted so that the minimum is 0.
            auto levels() const -> std::vector<int>;
            auto height() const -> int;

            auto to_digraph() const -> Digraph;

            friend auto operator==(const OrientedPath &, const OrientedPath &) -> bool = default;
            friend auto operator<(const OrientedPath & a, const OrientedPath & b) -> bool
            {
                return a._directions < b._directions;
            }
    };

    auto is_minimal(const OrientedPath & p) -> bool;

    /// Forward edges minus backward edges.
    auto net_length(const OrientedPath & p) -> int;

    /// An endpoint-preserving homomorphism q -> p as a position map, or
    /// nullopt. Any such map is onto: its image is a walk from 0 to the last
    /// position of p.
    auto path_onto_hom(const OrientedPath & q, const OrientedPath & p) -> std::optional<std::vector<std::size_t>>;

    /// Checks that map is an endpoint-preserving onto homomorphism q -> p.
    auto is_onto_hom(const OrientedPath & q, const OrientedPath & p, const std::vector<std::size_t> & map) -> bool;

    /// A shortest minimal path of the common height mapping onto every input
    /// with endpoints fixed. max_len 0 selects 4 * (sum of input lengths).
    /// Throws HeightMismatch, NotMinimal, or SearchExhausted.
    auto common_onto_minimal_path(const std::vector<OrientedPath> & paths, std::size_t max_len = 0) -> OrientedPath;
}
