// AVX2/FMA variants of the batch kernels. Four lanes of [[a,b],[c,d]] per
// iteration; remainders fall through to the scalar loops. This translation
// unit is compiled with -mavx2 -mfma and only entered after the runtime
// capability check in kernels.cpp.

#include "kernels_detail.hpp"

#ifdef JSR2_HAVE_AVX2

#include <immintrin.h>

namespace jsr2::kernels::detail {

namespace {

inline __m256d abs_pd(__m256d v) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

void mul_right_avx2(const double* a, const double* b, const double* c, const double* d,
                    std::size_t n, double ra, double rb, double rc, double rd,
                    double* oa, double* ob, double* oc, double* od) {
    const __m256d vra = _mm256_set1_pd(ra), vrb = _mm256_set1_pd(rb);
    const __m256d vrc = _mm256_set1_pd(rc), vrd = _mm256_set1_pd(rd);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d va = _mm256_loadu_pd(a + i), vb = _mm256_loadu_pd(b + i);
        __m256d vc = _mm256_loadu_pd(c + i), vd = _mm256_loadu_pd(d + i);
        __m256d ta = _mm256_fmadd_pd(va, vra, _mm256_mul_pd(vb, vrc));
        __m256d tb = _mm256_fmadd_pd(va, vrb, _mm256_mul_pd(vb, vrd));
        __m256d tc = _mm256_fmadd_pd(vc, vra, _mm256_mul_pd(vd, vrc));
        __m256d td = _mm256_fmadd_pd(vc, vrb, _mm256_mul_pd(vd, vrd));
        _mm256_storeu_pd(oa + i, ta);
        _mm256_storeu_pd(ob + i, tb);
        _mm256_storeu_pd(oc + i, tc);
        _mm256_storeu_pd(od + i, td);
    }
    if (i < n)
        mul_right_scalar(a + i, b + i, c + i, d + i, n - i, ra, rb, rc, rd,
                         oa + i, ob + i, oc + i, od + i);
}

void spectral_norm_avx2(const double* a, const double* b, const double* c, const double* d,
                        std::size_t n, double* out) {
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d va = _mm256_loadu_pd(a + i), vb = _mm256_loadu_pd(b + i);
        __m256d vc = _mm256_loadu_pd(c + i), vd = _mm256_loadu_pd(d + i);
        __m256d e = _mm256_fmadd_pd(vd, vd,
                    _mm256_fmadd_pd(vc, vc,
                    _mm256_fmadd_pd(vb, vb, _mm256_mul_pd(va, va))));
        __m256d det = _mm256_fmsub_pd(va, vd, _mm256_mul_pd(vb, vc));
        __m256d t2 = _mm256_mul_pd(two, abs_pd(det));
        __m256d lo = _mm256_max_pd(_mm256_sub_pd(e, t2), zero);
        __m256d hi = _mm256_add_pd(e, t2);
        __m256d s = _mm256_mul_pd(half, _mm256_add_pd(_mm256_sqrt_pd(lo), _mm256_sqrt_pd(hi)));
        _mm256_storeu_pd(out + i, s);
    }
    if (i < n)
        spectral_norm_scalar(a + i, b + i, c + i, d + i, n - i, out + i);
}

void spectral_radius_avx2(const double* a, const double* b, const double* c, const double* d,
                          std::size_t n, double atol, double* out) {
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d four = _mm256_set1_pd(4.0);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d vatol = _mm256_set1_pd(atol);
    const __m256d vneg_atol = _mm256_set1_pd(-atol);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d va = _mm256_loadu_pd(a + i), vb = _mm256_loadu_pd(b + i);
        __m256d vc = _mm256_loadu_pd(c + i), vd = _mm256_loadu_pd(d + i);
        __m256d t = _mm256_add_pd(va, vd);
        __m256d det = _mm256_fmsub_pd(va, vd, _mm256_mul_pd(vb, vc));
        __m256d disc = _mm256_fmsub_pd(t, t, _mm256_mul_pd(four, det));
        __m256d habs = _mm256_mul_pd(half, abs_pd(t));
        // real-distinct, repeated, and complex lanes, blended by the atol band
        __m256d real = _mm256_fmadd_pd(half, _mm256_sqrt_pd(_mm256_max_pd(disc, zero)), habs);
        __m256d cplx = _mm256_sqrt_pd(_mm256_max_pd(det, zero));
        __m256d is_real = _mm256_cmp_pd(disc, vatol, _CMP_GT_OQ);
        __m256d is_cplx = _mm256_cmp_pd(disc, vneg_atol, _CMP_LT_OQ);
        __m256d r = _mm256_blendv_pd(habs, cplx, is_cplx);
        r = _mm256_blendv_pd(r, real, is_real);
        _mm256_storeu_pd(out + i, r);
    }
    if (i < n)
        spectral_radius_scalar(a + i, b + i, c + i, d + i, n - i, atol, out + i);
}

} // namespace

const Ops& avx2() {
    static const Ops ops{"avx2", mul_right_avx2, spectral_norm_avx2, spectral_radius_avx2};
    return ops;
}

} // namespace jsr2::kernels::detail

#endif // JSR2_HAVE_AVX2
