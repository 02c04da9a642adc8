#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "jsr2/family.hpp"

namespace jsr2 {

// Positive-definiteness threshold for lambda_min of a unit-Frobenius S.
inline constexpr double kPdTol = 1e-8;

// The linear subspace of symmetric S = [[s1, s2], [s2, s3]] with
// S A_k = A_k^T S for all members, and what it contains.
struct ConstraintCertificate {
    int dimension = 0;
    std::vector<std::array<double, 3>> basis; // orthonormal (s1, s2, s3) coefficient vectors
    double max_lambda_min = 0.0;              // best lambda_min over unit-Frobenius elements; NaN when dimension == 0
    bool marginal = false;                    // max_lambda_min landed in [0, kPdTol]
    std::string reason;                       // set when infeasible
};

struct SymmetrizationResult {
    bool feasible = false;
    Mat2 Q;                      // valid iff feasible; symmetric positive root of S
    Mat2 S;                      // valid iff feasible; Q^T Q = S, unit Frobenius norm
    std::vector<Mat2> conjugated; // Q A_k Q^-1, filled iff feasible
    ConstraintCertificate certificate;
};

// Diagonal symmetrizer for a detected pattern with bc > 0:
// Q = diag(sqrt|c|, sqrt|b|), normalized so det Q = sqrt(bc). Conjugation
// sends each member to [[a_k, +-r_k sqrt(bc)], [+-r_k sqrt(bc), d_k]].
// Throws PatternViolation unless pattern.holds with a positive sign class.
Mat2 diagonal_symmetrizer(const PatternReport& pattern, const Tol& tol = {});

// Decides general simultaneous symmetrizability: assembles the constraint
// subspace (one scalar equation b s1 + (d-a) s2 - c s3 = 0 per member),
// then searches it for a positive-definite element. Total on valid families.
SymmetrizationResult spd_feasibility(const MatrixFamily& fam);

struct Canonicalization {
    MatrixFamily family; // P^-1 A_k P for every member
    Mat2 P;              // columns are the pivot's eigenvectors
};

// Change of basis that makes members[pivot] diagonal. Throws
// NotDiagonalizable unless the pivot has two distinct real eigenvalues,
// IndexOutOfRange for a bad pivot.
Canonicalization canonicalize_via_eigenbasis(const MatrixFamily& fam, std::size_t pivot);

} // namespace jsr2
