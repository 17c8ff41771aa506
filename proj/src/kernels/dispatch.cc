#include <treecsp/kernels.hh>

#include <atomic>

namespace treecsp::kernels
{
#ifdef TREECSP_HAVE_AVX2
    auto avx2_kernel_table() -> const KernelTable &;
#endif

    namespace
    {
        auto best_table() -> const KernelTable *
        {
            if (auto t = avx2_table())
                return t;
            return &scalar_table();
        }

        auto current() -> std::atomic<const KernelTable *> &
        {
            static std::atomic<const KernelTable *> table{best_table()};
            return table;
        }
    }

    auto avx2_table() -> const KernelTable *
    {
#ifdef TREECSP_HAVE_AVX2
        static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
        if (supported)
            return &avx2_kernel_table();
#endif
        return nullptr;
    }

    auto active() -> const KernelTable &
    {
        return *current().load(std::memory_order_relaxed);
    }

    auto force_isa(Isa isa) -> bool
    {
        const KernelTable * t = nullptr;
        switch (isa) {
        case Isa::Scalar: t = &scalar_table(); break;
        case Isa::Avx2: t = avx2_table(); break;
        }
        if (! t)
            return false;
        current().store(t, std::memory_order_relaxed);
        return true;
    }

    auto reset_isa() -> void
    {
        current().store(best_table(), std::memory_order_relaxed);
    }

    auto isa_name(Isa isa) -> std::string_view
    {
        switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
        }
        return "unknown";
    }
}
