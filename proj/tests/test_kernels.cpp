#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "jsr2/kernels.hpp"
#include "jsr2/mat2.hpp"

#include "oracles.hpp"

using jsr2::Mat2;
namespace kernels = jsr2::kernels;

namespace {

struct Soa {
    std::vector<double> a, b, c, d;

    std::size_t size() const { return a.size(); }

    void push(const Mat2& m) {
        a.push_back(m.a);
        b.push_back(m.b);
        c.push_back(m.c);
        d.push_back(m.d);
    }
};

Soa random_block(std::mt19937_64& gen, std::size_t n, double lo, double hi) {
    Soa s;
    for (std::size_t i = 0; i < n; ++i)
        s.push(oracles::random_mat(gen, lo, hi));
    return s;
}

void check_close(double x, double y, double rel) {
    CHECK(std::fabs(x - y) <= rel * (1.0 + std::max(std::fabs(x), std::fabs(y))));
}

} // namespace

TEST_CASE("scalar kernels agree with the single-element forms") {
    std::mt19937_64 gen(71);
    const auto& k = kernels::ops(kernels::Backend::Scalar);
    Soa s = random_block(gen, 97, -30.0, 30.0);
    std::vector<double> out(s.size());

    k.spectral_norm(s.a.data(), s.b.data(), s.c.data(), s.d.data(), s.size(), out.data());
    for (std::size_t i = 0; i < s.size(); ++i) {
        Mat2 m{s.a[i], s.b[i], s.c[i], s.d[i]};
        CHECK(out[i] == jsr2::spectral_norm(m));
        check_close(out[i], oracles::spectral_norm_via_gram(m), 1e-12);
    }

    k.spectral_radius(s.a.data(), s.b.data(), s.c.data(), s.d.data(), s.size(), 1e-12,
                      out.data());
    for (std::size_t i = 0; i < s.size(); ++i)
        CHECK(out[i] == jsr2::spectral_radius({s.a[i], s.b[i], s.c[i], s.d[i]}));
}

TEST_CASE("scalar mul_right matches Mat2 multiplication and allows aliasing") {
    std::mt19937_64 gen(72);
    const auto& k = kernels::ops(kernels::Backend::Scalar);
    Soa s = random_block(gen, 61, -5.0, 5.0);
    Mat2 r = oracles::random_mat(gen);

    Soa out = s;
    k.mul_right(s.a.data(), s.b.data(), s.c.data(), s.d.data(), s.size(), r.a, r.b, r.c, r.d,
                out.a.data(), out.b.data(), out.c.data(), out.d.data());
    Soa inplace = s;
    k.mul_right(inplace.a.data(), inplace.b.data(), inplace.c.data(), inplace.d.data(),
                s.size(), r.a, r.b, r.c, r.d, inplace.a.data(), inplace.b.data(),
                inplace.c.data(), inplace.d.data());

    for (std::size_t i = 0; i < s.size(); ++i) {
        Mat2 expect = Mat2{s.a[i], s.b[i], s.c[i], s.d[i]} * r;
        CHECK(out.a[i] == expect.a);
        CHECK(out.b[i] == expect.b);
        CHECK(out.c[i] == expect.c);
        CHECK(out.d[i] == expect.d);
        CHECK(inplace.a[i] == expect.a);
        CHECK(inplace.d[i] == expect.d);
    }
}

TEST_CASE("avx2 kernels are lane-equivalent to the scalar reference") {
    if (!kernels::avx2_available()) {
        MESSAGE("AVX2 not available on this host; skipping equivalence checks");
        return;
    }
    const auto& ks = kernels::ops(kernels::Backend::Scalar);
    const auto& kv = kernels::ops(kernels::Backend::Avx2);
    std::mt19937_64 gen(73);

    // sizes straddling the vector width, including remainder lanes
    for (std::size_t n : {1u, 3u, 4u, 5u, 8u, 63u, 64u, 257u, 1000u}) {
        for (double mag : {1.0, 1e-150, 1e150}) {
            Soa s = random_block(gen, n, -3.0 * mag, 3.0 * mag);
            std::vector<double> ref(n), got(n);

            ks.spectral_norm(s.a.data(), s.b.data(), s.c.data(), s.d.data(), n, ref.data());
            kv.spectral_norm(s.a.data(), s.b.data(), s.c.data(), s.d.data(), n, got.data());
            for (std::size_t i = 0; i < n; ++i)
                check_close(got[i], ref[i], 1e-13);

            ks.spectral_radius(s.a.data(), s.b.data(), s.c.data(), s.d.data(), n, 1e-12,
                               ref.data());
            kv.spectral_radius(s.a.data(), s.b.data(), s.c.data(), s.d.data(), n, 1e-12,
                               got.data());
            for (std::size_t i = 0; i < n; ++i)
                check_close(got[i], ref[i], 1e-13);

            Mat2 r = oracles::random_mat(gen);
            Soa sref = s, sgot = s;
            ks.mul_right(s.a.data(), s.b.data(), s.c.data(), s.d.data(), n, r.a, r.b, r.c,
                         r.d, sref.a.data(), sref.b.data(), sref.c.data(), sref.d.data());
            kv.mul_right(s.a.data(), s.b.data(), s.c.data(), s.d.data(), n, r.a, r.b, r.c,
                         r.d, sgot.a.data(), sgot.b.data(), sgot.c.data(), sgot.d.data());
            for (std::size_t i = 0; i < n; ++i) {
                check_close(sgot.a[i], sref.a[i], 1e-13);
                check_close(sgot.b[i], sref.b[i], 1e-13);
                check_close(sgot.c[i], sref.c[i], 1e-13);
                check_close(sgot.d[i], sref.d[i], 1e-13);
            }
        }
    }
}

TEST_CASE("radius kernel honors the discriminant band on special shapes") {
    const auto& k = kernels::ops();
    // identity (repeated), rotation (complex), antidiagonal (real, symmetric spectrum)
    Soa s;
    s.push(Mat2::identity());
    s.push({0, 1, -1, 0});
    s.push({0, 4, 1, 0});
    s.push({0, 0, 0, 0});
    std::vector<double> out(s.size());
    k.spectral_radius(s.a.data(), s.b.data(), s.c.data(), s.d.data(), s.size(), 1e-12,
                      out.data());
    CHECK(out[0] == doctest::Approx(1.0));
    CHECK(out[1] == doctest::Approx(1.0));
    CHECK(out[2] == doctest::Approx(2.0));
    CHECK(out[3] == doctest::Approx(0.0));
}
