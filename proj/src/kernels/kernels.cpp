#include "jsr2/kernels.hpp"

#include <stdexcept>

#include "kernels_detail.hpp"

namespace jsr2::kernels {

bool avx2_available() {
#ifdef JSR2_HAVE_AVX2
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Ops& ops(Backend backend) {
    switch (backend) {
    case Backend::Scalar:
        return detail::scalar();
    case Backend::Avx2:
#ifdef JSR2_HAVE_AVX2
        if (avx2_available())
            return detail::avx2();
#endif
        throw std::runtime_error("AVX2 kernels are not available on this host");
    case Backend::Auto:
    default: {
        static const Ops& resolved = avx2_available()
#ifdef JSR2_HAVE_AVX2
                                         ? detail::avx2()
#else
                                         ? detail::scalar()
#endif
                                         : detail::scalar();
        return resolved;
    }
    }
}

} // namespace jsr2::kernels
