#include <treecsp/kernels.hh>

#include <bit>

namespace treecsp::kernels
{
    namespace
    {
        auto and_any(const std::uint64_t * a, const std::uint64_t * b, std::size_t words) -> bool
        {
            for (std::size_t i = 0; i < words; ++i)
                if (a[i] & b[i])
                    return true;
            return false;
        }

        auto and_assign(std::uint64_t * dst, const std::uint64_t * src, std::size_t words) -> bool
        {
            std::uint64_t lost = 0;
            for (std::size_t i = 0; i < words; ++i) {
                lost |= dst[i] & ~src[i];
                dst[i] &= src[i];
            }
            return lost != 0;
        }

        auto or_assign(std::uint64_t * dst, const std::uint64_t * src, std::size_t words) -> bool
        {
            std::uint64_t gained = 0;
            for (std::size_t i = 0; i < words; ++i) {
                gained |= src[i] & ~dst[i];
                dst[i] |= src[i];
            }
            return gained != 0;
        }

        auto popcount(const std::uint64_t * a, std::size_t words) -> std::size_t
        {
            std::size_t result = 0;
            for (std::size_t i = 0; i < words; ++i)
                result += std::popcount(a[i]);
            return result;
        }

        auto and_popcount(const std::uint64_t * a, const std::uint64_t * b, std::size_t words) -> std::size_t
        {
            std::size_t result = 0;
            for (std::size_t i = 0; i < words; ++i)
                result += std::popcount(a[i] & b[i]);
            return result;
        }

        auto equal(const std::uint64_t * a, const std::uint64_t * b, std::size_t words) -> bool
        {
            for (std::size_t i = 0; i < words; ++i)
                if (a[i] != b[i])
                    return false;
            return true;
        }
    }

    auto scalar_table() -> const KernelTable &
    {
        static const KernelTable table{Isa::Scalar, and_any, and_assign, or_assign, popcount, and_popcount, equal};
        return table;
    }
}
