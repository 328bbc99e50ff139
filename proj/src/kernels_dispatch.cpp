#include "vvlab/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace vvlab::kernels {

bool avx2_available() {
#if defined(VVLAB_BUILD_AVX2) && defined(__x86_64__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

const Ops& select() {
    if (const char* env = std::getenv("VVLAB_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return scalar_ops;
        if (std::strcmp(env, "avx2") == 0) return avx2_ops;
    }
    return avx2_available() ? avx2_ops : scalar_ops;
}

}  // namespace

const Ops& active() {
    static const Ops& ops = select();
    return ops;
}

}  // namespace vvlab::kernels
