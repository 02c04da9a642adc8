#include "jsr2/symmetrize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jsr2/errors.hpp"

namespace jsr2 {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_symmetric(const Mat2& m, const Tol& tol) {
    return std::fabs(m.b - m.c) <= tol.rtol * (1.0 + m.frobenius());
}

// Coefficient triple (s1, s2, s3) <-> symmetric matrix [[s1, s2], [s2, s3]].
Mat2 sym_from_coeffs(const std::array<double, 3>& s) {
    return {s[0], s[1], s[1], s[2]};
}

double lambda_min_sym(const std::array<double, 3>& s) {
    double mid = 0.5 * (s[0] + s[2]);
    return mid - std::hypot(0.5 * (s[0] - s[2]), s[1]);
}

double frob_sym(const std::array<double, 3>& s) {
    return std::sqrt(s[0] * s[0] + 2.0 * s[1] * s[1] + s[2] * s[2]);
}

// lambda_min after normalizing S to unit Frobenius norm; -inf for S = 0.
double unit_lambda_min(const std::array<double, 3>& s) {
    double f = frob_sym(s);
    if (f == 0.0)
        return -std::numeric_limits<double>::infinity();
    return lambda_min_sym(s) / f;
}

using Triple = std::array<double, 3>;

double dot3(const Triple& x, const Triple& y) {
    return x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
}

double norm3(const Triple& x) { return std::sqrt(dot3(x, x)); }

// Subtract the projections onto an orthonormal set, twice for accuracy.
void orthogonalize(Triple& v, const std::vector<Triple>& basis) {
    for (int pass = 0; pass < 2; ++pass)
        for (const Triple& b : basis) {
            double p = dot3(v, b);
            for (int i = 0; i < 3; ++i)
                v[i] -= p * b[i];
        }
}

// Orthonormal basis of the nullspace of the (K+1)x3 constraint matrix whose
// rows are (b_k, d_k - a_k, -c_k). Modified Gram-Schmidt on the unit-length
// rows; a residual below rtol counts as a dependent row (the numerical rank
// cut from the design).
std::vector<Triple> constraint_nullspace(const MatrixFamily& fam) {
    std::vector<Triple> rowspace;
    for (const Mat2& m : fam.members) {
        Triple row = {m.b, m.d - m.a, -m.c};
        double len = norm3(row);
        if (len == 0.0)
            continue;
        for (double& x : row)
            x /= len;
        orthogonalize(row, rowspace);
        double res = norm3(row);
        if (res > fam.tol.rtol) {
            for (double& x : row)
                x /= res;
            rowspace.push_back(row);
            if (rowspace.size() == 3)
                break;
        }
    }

    // Complete to an orthonormal frame; the leftover directions are the
    // nullspace. Greedy choice of the axis with the largest residual keeps
    // this stable regardless of the row-space orientation.
    std::vector<Triple> basis;
    while (rowspace.size() + basis.size() < 3) {
        Triple best{};
        double best_res = -1.0;
        for (int axis = 0; axis < 3; ++axis) {
            Triple v{};
            v[axis] = 1.0;
            orthogonalize(v, rowspace);
            orthogonalize(v, basis);
            double res = norm3(v);
            if (res > best_res) {
                best_res = res;
                best = v;
            }
        }
        for (double& x : best)
            x /= best_res;
        basis.push_back(best);
    }
    return basis;
}

// Symmetric positive square root of an SPD 2x2 matrix: (S + sqrt(det) I) /
// sqrt(trace + 2 sqrt(det)).
Mat2 spd_sqrt(const Mat2& s) {
    double r = std::sqrt(s.det());
    double t = std::sqrt(s.trace() + 2.0 * r);
    return {(s.a + r) / t, s.b / t, s.c / t, (s.d + r) / t};
}

struct ConeSearch {
    double best = -std::numeric_limits<double>::infinity();
    std::array<double, 3> coeffs{};
};

// dim-1 subspace: only +-basis to try.
ConeSearch search_line(const std::array<double, 3>& n0) {
    ConeSearch r;
    for (double sign : {1.0, -1.0}) {
        std::array<double, 3> s = {sign * n0[0], sign * n0[1], sign * n0[2]};
        double v = unit_lambda_min(s);
        if (v > r.best) {
            r.best = v;
            r.coeffs = s;
        }
    }
    return r;
}

// dim-2 subspace: maximize lambda_min over the unit circle of the plane with
// a dense angular grid plus golden-section refinement around the best sample.
ConeSearch search_plane(const std::array<double, 3>& n0, const std::array<double, 3>& n1) {
    auto at = [&](double theta) {
        double c = std::cos(theta), s = std::sin(theta);
        return std::array<double, 3>{c * n0[0] + s * n1[0], c * n0[1] + s * n1[1],
                                     c * n0[2] + s * n1[2]};
    };
    auto value = [&](double theta) { return unit_lambda_min(at(theta)); };

    constexpr int kSamples = 3600;
    const double step = 2.0 * kPi / kSamples;
    double best_theta = 0.0;
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < kSamples; ++i) {
        double v = value(i * step);
        if (v > best) {
            best = v;
            best_theta = i * step;
        }
    }

    double lo = best_theta - step, hi = best_theta + step;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = value(x1), f2 = value(x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = value(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = value(x1);
        }
    }
    double theta = 0.5 * (lo + hi);
    ConeSearch r;
    r.best = value(theta);
    r.coeffs = at(theta);
    if (best > r.best) { // never report less than the grid winner
        r.best = best;
        r.coeffs = at(best_theta);
    }
    return r;
}

SymmetrizationResult feasible_result(const MatrixFamily& fam, std::array<double, 3> coeffs,
                                     ConstraintCertificate cert) {
    double f = frob_sym(coeffs);
    for (double& x : coeffs)
        x /= f;

    SymmetrizationResult res;
    res.feasible = true;
    res.S = sym_from_coeffs(coeffs);
    res.Q = spd_sqrt(res.S);
    res.conjugated.reserve(fam.size());
    for (const Mat2& m : fam.members)
        res.conjugated.push_back(conjugate(res.Q, m, fam.tol));
    res.certificate = std::move(cert);
    return res;
}

} // namespace

Mat2 diagonal_symmetrizer(const PatternReport& pattern, const Tol&) {
    if (!pattern.holds || pattern.sign_class != SignClass::Positive)
        throw PatternViolation(
            "diagonal symmetrizer needs the proportional pattern with bc > 0");
    // q1 / q2 = sqrt(c / b), normalized so det Q = sqrt(bc).
    return Mat2::diagonal(std::sqrt(std::fabs(pattern.base_c)),
                          std::sqrt(std::fabs(pattern.base_b)));
}

SymmetrizationResult spd_feasibility(const MatrixFamily& fam) {
    const Tol& tol = fam.tol;

    ConstraintCertificate cert;
    cert.basis = constraint_nullspace(fam);
    cert.dimension = static_cast<int>(cert.basis.size());
    cert.max_lambda_min = std::numeric_limits<double>::quiet_NaN();

    bool all_sym = std::all_of(fam.members.begin(), fam.members.end(),
                               [&](const Mat2& m) { return is_symmetric(m, tol); });
    if (all_sym) {
        // Identity already works; report it rather than an equivalent element.
        SymmetrizationResult res;
        res.feasible = true;
        res.S = Mat2::identity();
        res.Q = Mat2::identity();
        res.conjugated = fam.members;
        cert.max_lambda_min = 1.0 / std::sqrt(2.0); // lambda_min of I at unit Frobenius
        res.certificate = std::move(cert);
        return res;
    }

    switch (cert.dimension) {
    case 0:
        cert.reason = "only S = 0 satisfies the constraints";
        break;
    case 3:
        return feasible_result(fam, {1.0, 0.0, 1.0}, std::move(cert));
    default: {
        ConeSearch found = cert.dimension == 1
                               ? search_line(cert.basis[0])
                               : search_plane(cert.basis[0], cert.basis[1]);
        cert.max_lambda_min = found.best;
        cert.marginal = found.best >= 0.0 && found.best <= kPdTol;
        if (found.best > kPdTol)
            return feasible_result(fam, found.coeffs, std::move(cert));
        cert.reason = cert.marginal
                          ? "constraint subspace is positive-semidefinite at best (marginal)"
                          : "no positive-definite element in the constraint subspace";
        break;
    }
    }

    SymmetrizationResult res;
    res.feasible = false;
    res.certificate = std::move(cert);
    return res;
}

Canonicalization canonicalize_via_eigenbasis(const MatrixFamily& fam, std::size_t pivot) {
    if (pivot >= fam.size())
        throw IndexOutOfRange("pivot " + std::to_string(pivot) + " out of range");

    EigenPair e = eigen(fam.members[pivot], fam.tol);
    if (e.kind != EigenKind::RealDistinct)
        throw NotDiagonalizable("pivot member has no two distinct real eigenvalues");

    Mat2 p{e.v1.x, e.v2.x, e.v1.y, e.v2.y};
    Mat2 pinv = inverse(p, fam.tol);

    Canonicalization out;
    out.P = p;
    out.family.tol = fam.tol;
    out.family.members.reserve(fam.size());
    for (const Mat2& m : fam.members)
        out.family.members.push_back(pinv * m * p);
    return out;
}

} // namespace jsr2
