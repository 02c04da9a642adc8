#include "jsr2/mat2.hpp"

#include <algorithm>
#include <cmath>

#include "jsr2/errors.hpp"
#include "jsr2/kernels.hpp"

namespace jsr2 {

double Mat2::max_abs() const {
    return std::max(std::max(std::fabs(a), std::fabs(b)),
                    std::max(std::fabs(c), std::fabs(d)));
}

bool Mat2::finite() const {
    return std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d);
}

double spectral_radius(const Mat2& m, const Tol& tol) {
    return kernels::spectral_radius_1(m.a, m.b, m.c, m.d, tol.atol);
}

double spectral_norm(const Mat2& m) {
    return kernels::spectral_norm_1(m.a, m.b, m.c, m.d);
}

Mat2 inverse(const Mat2& q, const Tol& tol) {
    double det = q.det();
    double f = q.frobenius();
    if (std::fabs(det) <= tol.atol * std::max(1.0, f * f))
        throw SingularTransform("matrix is singular within tolerance (|det| = " +
                                std::to_string(std::fabs(det)) + ")");
    double inv = 1.0 / det;
    return {q.d * inv, -q.b * inv, -q.c * inv, q.a * inv};
}

Mat2 conjugate(const Mat2& q, const Mat2& m, const Tol& tol) {
    return q * m * inverse(q, tol);
}

namespace {

Vec2 unit_with_sign(Vec2 v) {
    double n = v.norm();
    v.x /= n;
    v.y /= n;
    double lead = std::fabs(v.x) >= std::fabs(v.y) ? v.x : v.y;
    if (lead < 0.0) {
        v.x = -v.x;
        v.y = -v.y;
    }
    return v;
}

Vec2 eigenvector(const Mat2& m, double lambda) {
    // Null vector of [[a - l, b], [c, d - l]], taken from the better row.
    if (std::fabs(m.b) >= std::fabs(m.c) && m.b != 0.0)
        return unit_with_sign({m.b, lambda - m.a});
    if (m.c != 0.0)
        return unit_with_sign({lambda - m.d, m.c});
    if (m.b != 0.0)
        return unit_with_sign({m.b, lambda - m.a});
    // Diagonal matrix: pick the axis whose entry matches lambda.
    return std::fabs(m.a - lambda) <= std::fabs(m.d - lambda) ? Vec2{1.0, 0.0}
                                                              : Vec2{0.0, 1.0};
}

} // namespace

EigenPair eigen(const Mat2& m, const Tol& tol) {
    double t = m.trace();
    double det = m.det();
    double disc = t * t - 4.0 * det;

    EigenPair e;
    if (disc < -tol.atol) {
        e.kind = EigenKind::ComplexConjugate;
        e.lambda1 = e.lambda2 = 0.5 * t;
        e.imag = 0.5 * std::sqrt(-disc);
        return e;
    }
    if (disc <= tol.atol) {
        e.kind = EigenKind::RealRepeated;
        e.lambda1 = e.lambda2 = 0.5 * t;
        return e;
    }
    double s = std::sqrt(disc);
    e.kind = EigenKind::RealDistinct;
    e.lambda1 = 0.5 * (t + s);
    e.lambda2 = 0.5 * (t - s);
    e.has_vectors = true;
    e.v1 = eigenvector(m, e.lambda1);
    e.v2 = eigenvector(m, e.lambda2);
    return e;
}

} // namespace jsr2
