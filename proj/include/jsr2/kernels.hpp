#pragma once

// Batched arithmetic over arrays of 2x2 matrices in structure-of-arrays form.
// A scalar reference implementation and an AVX2 variant carry identical
// semantics; the active one is resolved at runtime and can be forced per call
// site, which is how the equivalence tests drive both.

#include <cmath>
#include <cstddef>

namespace jsr2::kernels {

// ---------------------------------------------------------------------------
// Single-element reference forms. The scalar batch kernels loop over these,
// and the mat2 routines call them directly so every code path shares one
// formula.
// ---------------------------------------------------------------------------

// sigma_max = (sqrt(E + 2|det|) + sqrt(E - 2|det|)) / 2 with E the entry sum
// of squares. Algebraically equal to sqrt((E + sqrt(E^2 - 4 det^2)) / 2) but
// never squares E, so it survives entries up to ~2^500.
inline double spectral_norm_1(double a, double b, double c, double d) {
    double e = a * a + b * b + c * c + d * d;
    double t = std::fabs(a * d - b * c);
    double lo = e - 2.0 * t;
    if (lo < 0.0) lo = 0.0;
    return 0.5 * (std::sqrt(lo) + std::sqrt(e + 2.0 * t));
}

// Discriminant band: |disc| <= atol counts as a repeated real eigenvalue.
inline double spectral_radius_1(double a, double b, double c, double d, double atol) {
    double t = a + d;
    double det = a * d - b * c;
    double disc = t * t - 4.0 * det;
    if (disc > atol) return 0.5 * (std::fabs(t) + std::sqrt(disc));
    if (disc < -atol) return std::sqrt(det > 0.0 ? det : 0.0);
    return 0.5 * std::fabs(t);
}

// ---------------------------------------------------------------------------
// Batch kernels
// ---------------------------------------------------------------------------

enum class Backend { Auto, Scalar, Avx2 };

struct Ops {
    const char* name;

    // out[i] = in[i] * R for a fixed right factor R = [[ra, rb], [rc, rd]].
    // Output arrays may alias the inputs.
    void (*mul_right)(const double* a, const double* b, const double* c, const double* d,
                      std::size_t n, double ra, double rb, double rc, double rd,
                      double* oa, double* ob, double* oc, double* od);

    void (*spectral_norm)(const double* a, const double* b, const double* c, const double* d,
                          std::size_t n, double* out);

    void (*spectral_radius)(const double* a, const double* b, const double* c, const double* d,
                            std::size_t n, double atol, double* out);
};

bool avx2_available();

// Backend::Auto resolves once per process to the best available variant.
// Requesting Backend::Avx2 without hardware support throws std::runtime_error.
const Ops& ops(Backend backend = Backend::Auto);

} // namespace jsr2::kernels
