#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "jsr2/mat2.hpp"

namespace jsr2 {

// Ordered finite set {A_0, ..., A_K}, K+1 >= 1, plus the tolerance context
// used by every analysis on it.
struct MatrixFamily {
    std::vector<Mat2> members;
    Tol tol;

    std::size_t size() const { return members.size(); }
};

enum class SignClass { Positive, Zero, Negative };

const char* to_string(SignClass s);

// Result of detecting the proportional off-diagonal structure: every member's
// off-diagonal pair equals r_k * (base_b, base_c) for a common direction.
struct PatternReport {
    bool holds = false;
    bool all_diagonal = false;
    double base_b = 0.0;
    double base_c = 0.0;
    std::vector<double> ratios;          // one per member, base member gets 1
    SignClass sign_class = SignClass::Zero;
};

// The base is taken from the member with the largest off-diagonal Euclidean
// norm; all other ratios are least-squares projections onto it. Members with
// zero off-diagonals get ratio 0 and never constrain the base.
PatternReport detect_pattern(const MatrixFamily& fam);

// UTF-8 JSON: {"matrices": [[[a,b],[c,d]], ...], "tol": {"rtol": x, "atol": y}?}
// Throws ParseError on malformed input, wrong shapes, or non-finite entries.
MatrixFamily parse_family(std::string_view text);

// Round-trips parse_family bit-exactly for finite doubles.
std::string serialize_family(const MatrixFamily& fam);

} // namespace jsr2
