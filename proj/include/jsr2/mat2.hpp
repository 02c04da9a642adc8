#pragma once

#include <cmath>

namespace jsr2 {

// Tolerance context threaded through every numeric decision.
struct Tol {
    double rtol = 1e-9;
    double atol = 1e-12;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    double norm() const { return std::hypot(x, y); }
};

// Real 2x2 matrix, row-major [[a, b], [c, d]]. Values are immutable by
// convention: every operation returns a fresh matrix, so sharing across
// threads is safe.
struct Mat2 {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 diagonal(double x, double y) { return {x, 0.0, 0.0, y}; }

    double trace() const { return a + d; }
    double det() const { return a * d - b * c; }
    double frobenius() const { return std::sqrt(a * a + b * b + c * c + d * d); }
    double max_abs() const;
    bool finite() const;

    Mat2 transpose() const { return {a, c, b, d}; }

    Mat2 operator*(const Mat2& r) const {
        return {a * r.a + b * r.c, a * r.b + b * r.d,
                c * r.a + d * r.c, c * r.b + d * r.d};
    }
    Mat2 operator+(const Mat2& r) const { return {a + r.a, b + r.b, c + r.c, d + r.d}; }
    Mat2 operator-(const Mat2& r) const { return {a - r.a, b - r.b, c - r.c, d - r.d}; }
    Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }
    Vec2 operator*(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
};

inline Mat2 operator*(double s, const Mat2& m) { return m * s; }

// Largest eigenvalue magnitude; for a complex pair this is sqrt(det).
double spectral_radius(const Mat2& m, const Tol& tol = {});

// Largest singular value (norm induced by the Euclidean vector norm).
double spectral_norm(const Mat2& m);

// Inverse with the scale-aware singularity test |det| <= atol * max(1, |Q|_F^2).
// Throws SingularTransform below the threshold.
Mat2 inverse(const Mat2& q, const Tol& tol = {});

// Q * M * Q^-1. Callers wanting Q^-1 * M * Q pass inverse(Q) instead.
Mat2 conjugate(const Mat2& q, const Mat2& m, const Tol& tol = {});

enum class EigenKind { RealDistinct, RealRepeated, ComplexConjugate };

// kind == RealDistinct carries unit eigenvectors whose sign is fixed by making
// the largest-magnitude component positive (first component on exact ties).
// The repeated case never reports eigenvectors.
struct EigenPair {
    EigenKind kind = EigenKind::RealRepeated;
    double lambda1 = 0.0; // larger eigenvalue, or the common real part
    double lambda2 = 0.0;
    double imag = 0.0;    // imaginary magnitude, 0 unless complex
    bool has_vectors = false;
    Vec2 v1, v2;
};

// Discriminant branch: complex below -atol, repeated within the atol band.
EigenPair eigen(const Mat2& m, const Tol& tol = {});

} // namespace jsr2
