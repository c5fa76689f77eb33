#include "symsage/simd/kernels.hpp"

#include <cstdlib>
#include <string>

namespace symsage::simd {

#if defined(SYMSAGE_HAVE_AVX2)
const KernelTable* avx2_kernels_impl();
#endif

std::string_view to_string(Isa isa)
{
    return isa == Isa::Avx2 ? "avx2" : "scalar";
}

const KernelTable* avx2_kernels()
{
#if defined(SYMSAGE_HAVE_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? avx2_kernels_impl() : nullptr;
#else
    return nullptr;
#endif
}

bool isa_available(Isa isa)
{
    return isa == Isa::Scalar || avx2_kernels() != nullptr;
}

const KernelTable& kernels_for(Isa isa)
{
    if (isa == Isa::Avx2 && avx2_kernels()) {
        return *avx2_kernels();
    }
    return scalar_kernels();
}

const KernelTable& kernels()
{
    static const KernelTable& chosen = [] () -> const KernelTable& {
        const char* env = std::getenv("SYMSAGE_SIMD");
        if (env && std::string(env) == "scalar") {
            return scalar_kernels();
        }
        return avx2_kernels() ? *avx2_kernels() : scalar_kernels();
    }();
    return chosen;
}

}  // namespace symsage::simd
