#pragma once

#include <treecsp/kernels.hh>

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace treecsp
{
    using Vertex = std::uint32_t;

    inline constexpr auto words_for(std::size_t bits) -> std::size_t
    {
        return (bits + 63) / 64;
    }

    /// Fixed-size dynamic bitset. Bits past size() are always zero, so word
    /// kernels never need masking.
    class Bitset
    {
        private:
            std::size_t _size = 0;
            std::vector<std::uint64_t> _words;

        public:
            static constexpr std::size_t npos = static_cast<std::size_t>(-1);

            Bitset() = default;
            explicit Bitset(std::size_t size, bool filled = false);
            Bitset(std::size_t size, std::initializer_list<std::size_t> members);

            static auto from_members(std::size_t size, const std::vector<Vertex> & members) -> Bitset;

            auto size() const -> std::size_t { return _size; }
            auto word_count() const -> std::size_t { return _words.size(); }
            auto data() -> std::uint64_t * { return _words.data(); }
            auto data() const -> const std::uint64_t * { return _words.data(); }

            auto test(std::size_t i) const -> bool { return (_words[i >> 6] >> (i & 63)) & 1; }
            auto set(std::size_t i) -> void { _words[i >> 6] |= std::uint64_t{1} << (i & 63); }
            auto reset(std::size_t i) -> void { _words[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
            auto fill() -> void;
            auto clear() -> void;

            auto count() const -> std::size_t;
            auto any() const -> bool;
            auto none() const -> bool { return ! any(); }

            auto intersects(const Bitset & other) const -> bool;
            auto is_subset_of(const Bitset & other) const -> bool;

            // returns true if anything changed
            auto intersect_with(const Bitset & other) -> bool;
            auto unite_with(const Bitset & other) -> bool;

            auto find_first() const -> std::size_t;
            auto find_next(std::size_t after) const -> std::size_t;

            auto members() const -> std::vector<Vertex>;

            template <typename F>
            auto for_each(F && f) const -> void
            {
                for (std::size_t w = 0; w < _words.size(); ++w) {
                    std::uint64_t bits = _words[w];
                    while (bits) {
                        f(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
                        bits &= bits - 1;
                    }
                }
            }

            auto to_string() const -> std::string;

            friend auto operator==(const Bitset & a, const Bitset & b) -> bool;
            friend auto operator<(const Bitset & a, const Bitset & b) -> bool;
            friend auto operator&(const Bitset & a, const Bitset & b) -> Bitset;
            friend auto operator|(const Bitset & a, const Bitset & b) -> Bitset;
    };

    /// A set of digraph vertices.
    using VertexSet = Bitset;
}
