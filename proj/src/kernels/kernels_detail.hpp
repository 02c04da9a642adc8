#pragma once

#include "jsr2/kernels.hpp"

namespace jsr2::kernels::detail {

const Ops& scalar();

// Scalar loop bodies, also used by the SIMD variants for remainder lanes.
void mul_right_scalar(const double* a, const double* b, const double* c, const double* d,
                      std::size_t n, double ra, double rb, double rc, double rd,
                      double* oa, double* ob, double* oc, double* od);
void spectral_norm_scalar(const double* a, const double* b, const double* c, const double* d,
                          std::size_t n, double* out);
void spectral_radius_scalar(const double* a, const double* b, const double* c, const double* d,
                            std::size_t n, double atol, double* out);

#ifdef JSR2_HAVE_AVX2
const Ops& avx2();
#endif

} // namespace jsr2::kernels::detail
