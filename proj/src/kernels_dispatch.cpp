#include "hopfavg/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace hopfavg::kernels {

#if defined(HOPFAVG_BUILD_AVX2)
namespace detail {
const KernelTable& avx2_table();
}
#endif

const KernelTable* avx2() {
#if defined(HOPFAVG_BUILD_AVX2)
    static const bool supported = [] {
        __builtin_cpu_init();
        return __builtin_cpu_supports("avx2") != 0;
    }();
    if (supported) return &detail::avx2_table();
#endif
    return nullptr;
}

const KernelTable& active() {
    static const KernelTable& chosen = []() -> const KernelTable& {
        const char* forced = std::getenv("HOPFAVG_KERNELS");
        if (forced != nullptr && std::string_view(forced) == "scalar") return scalar();
        if (const KernelTable* simd = avx2()) return *simd;
        return scalar();
    }();
    return chosen;
}

}  // namespace hopfavg::kernels
