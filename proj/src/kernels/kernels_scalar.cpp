#include "kernels_detail.hpp"

namespace jsr2::kernels::detail {

void mul_right_scalar(const double* a, const double* b, const double* c, const double* d,
                      std::size_t n, double ra, double rb, double rc, double rd,
                      double* oa, double* ob, double* oc, double* od) {
    for (std::size_t i = 0; i < n; ++i) {
        double ai = a[i], bi = b[i], ci = c[i], di = d[i];
        oa[i] = ai * ra + bi * rc;
        ob[i] = ai * rb + bi * rd;
        oc[i] = ci * ra + di * rc;
        od[i] = ci * rb + di * rd;
    }
}

void spectral_norm_scalar(const double* a, const double* b, const double* c, const double* d,
                          std::size_t n, double* out) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = spectral_norm_1(a[i], b[i], c[i], d[i]);
}

void spectral_radius_scalar(const double* a, const double* b, const double* c, const double* d,
                            std::size_t n, double atol, double* out) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = spectral_radius_1(a[i], b[i], c[i], d[i], atol);
}

const Ops& scalar() {
    static const Ops ops{"scalar", mul_right_scalar, spectral_norm_scalar,
                         spectral_radius_scalar};
    return ops;
}

} // namespace jsr2::kernels::detail
