#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Word-array kernels behind Bitset. Each kernel has a scalar reference
// implementation and, where the build and the CPU allow it, an AVX2 one.
// The active table is chosen once at first use; tests can force a table.

namespace treecsp::kernels
{
    enum class Isa
    {
        Scalar,
        Avx2
    };

    struct KernelTable
    {
        Isa isa;
        auto (*and_any)(const std::uint64_t * a, const std::uint64_t * b, std::size_t words) -> bool;
        // dst &= src; returns true if any bit of dst was cleared
        auto (*and_assign)(std::uint64_t * dst, const std::uint64_t * src, std::size_t words) -> bool;
        // dst |= src; returns true if any bit of dst was set
        auto (*or_assign)(std::uint64_t * dst, const std::uint64_t * src, std::size_t words) -> bool;
        auto (*popcount)(const std::uint64_t * a, std::size_t words) -> std::size_t;
        auto (*and_popcount)(const std::uint64_t * a, const std::uint64_t * b, std::size_t words) -> std::size_t;
        auto (*equal)(const std::uint64_t * a, const std::uint64_t * b, std::size_t words) -> bool;
    };

    auto scalar_table() -> const KernelTable &;

    // nullptr when the build has no AVX2 variant or the CPU lacks it
    auto avx2_table() -> const KernelTable *;

    auto active() -> const KernelTable &;

    // Forces a table; returns false (and changes nothing) if unavailable.
    auto force_isa(Isa isa) -> bool;

    // Back to the best table the CPU supports.
    auto reset_isa() -> void;

    auto isa_name(Isa isa) -> std::string_view;
}
