#include <treecsp/kernels.hh>

#include <immintrin.h>

#include <bit>

namespace treecsp::kernels
{
    namespace
    {
        inline auto load(const std::uint64_t * p) -> __m256i
        {
            return _mm256_loadu_si256(reinterpret_cast<const __m256i *>(p));
        }

        inline auto store(std::uint64_t * p, __m256i v) -> void
        {
            _mm256_storeu_si256(reinterpret_cast<__m256i *>(p), v);
        }

        // Per-byte popcount by nibble lookup, summed into four 64-bit lanes.
        inline auto popcount_lanes(__m256i v) -> __m256i
        {
            const __m256i lookup = _mm256_setr_epi8(
                0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
            const __m256i low_mask = _mm256_set1_epi8(0x0f);
            __m256i lo = _mm256_and_si256(v, low_mask);
            __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
            __m256i bytes = _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
            return _mm256_sad_epu8(bytes, _mm256_setzero_si256());
        }

        inline auto horizontal_sum(__m256i v) -> std::size_t
        {
            alignas(32) std::uint64_t lanes[4];
            _mm256_store_si256(reinterpret_cast<__m256i *>(lanes), v);
            return lanes[0] + lanes[1] + lanes[2] + lanes[3];
        }

        auto and_any(const std::uint64_t * a, const std::uint64_t * b, std::size_t words) -> bool
        {
            std::size_t i = 0;
            for (; i + 4 <= words; i += 4)
                if (! _mm256_testz_si256(load(a + i), load(b + i)))
                    return true;
            for (; i < words; ++i)
                if (a[i] & b[i])
                    return true;
            return false;
        }

        auto and_assign(std::uint64_t * dst, const std::uint64_t * src, std::size_t words) -> bool
        {
            std::size_t i = 0;
            __m256i lost = _mm256_setzero_si256();
            for (; i + 4 <= words; i += 4) {
                __m256i d = load(dst + i), s = load(src + i);
                lost = _mm256_or_si256(lost, _mm256_andnot_si256(s, d));
                store(dst + i, _mm256_and_si256(d, s));
            }
            bool changed = ! _mm256_testz_si256(lost, lost);
            for (; i < words; ++i) {
                changed = changed || (dst[i] & ~src[i]);
                dst[i] &= src[i];
            }
            return changed;
        }

        auto or_assign(std::uint64_t * dst, const std::uint64_t * src, std::size_t words) -> bool
        {
            std::size_t i = 0;
            __m256i gained = _mm256_setzero_si256();
            for (; i + 4 <= words; i += 4) {
                __m256i d = load(dst + i), s = load(src + i);
                gained = _mm256_or_si256(gained, _mm256_andnot_si256(d, s));
                store(dst + i, _mm256_or_si256(d, s));
            }
            bool changed = ! _mm256_testz_si256(gained, gained);
            for (; i < words; ++i) {
                changed = changed || (src[i] & ~dst[i]);
                dst[i] |= src[i];
            }
            return changed;
        }

        auto popcount(const std::uint64_t * a, std::size_t words) -> std::size_t
        {
            std::size_t i = 0;
            __m256i acc = _mm256_setzero_si256();
            for (; i + 4 <= words; i += 4)
                acc = _mm256_add_epi64(acc, popcount_lanes(load(a + i)));
            std::size_t result = horizontal_sum(acc);
            for (; i < words; ++i)
                result += std::popcount(a[i]);
            return result;
        }

        auto and_popcount(const std::uint64_t * a, const std::uint64_t * b, std::size_t words) -> std::size_t
        {
            std::size_t i = 0;
            __m256i acc = _mm256_setzero_si256();
            for (; i + 4 <= words; i += 4)
                acc = _mm256_add_epi64(acc, popcount_lanes(_mm256_and_si256(load(a + i), load(b + i))));
            std::size_t result = horizontal_sum(acc);
            for (; i < words; ++i)
                result += std::popcount(a[i] & b[i]);
            return result;
        }

        auto equal(const std::uint64_t * a, const std::uint64_t * b, std::size_t words) -> bool
        {
            std::size_t i = 0;
            for (; i + 4 <= words; i += 4) {
                __m256i diff = _mm256_xor_si256(load(a + i), load(b + i));
                if (! _mm256_testz_si256(diff, diff))
                    return false;
            }
            for (; i < words; ++i)
                if (a[i] != b[i])
                    return false;
            return true;
        }
    }

    auto avx2_kernel_table() -> const KernelTable &
    {
        static const KernelTable table{Isa::Avx2, and_any, and_assign, or_assign, popcount, and_popcount, equal};
        return table;
    }
}
