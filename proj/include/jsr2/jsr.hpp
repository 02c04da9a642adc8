#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "jsr2/errors.hpp"
#include "jsr2/family.hpp"
#include "jsr2/kernels.hpp"

namespace jsr2 {

enum class Method { ExactPattern, ExactSymmetric, ExactSpd, ExactDiagAntidiag, Enumeration };

const char* to_string(Method m);

struct JsrReport {
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    std::vector<int> witness;   // word over {0..K} attaining the lower bound
    int depth = 0;              // max word length examined
    Method method = Method::Enumeration;
    bool exact = false;         // lower == upper == rho, provably
    std::uint64_t products = 0; // matrix products evaluated
};

struct EnumOptions {
    std::uint64_t budget = 50'000'000; // product evaluations
    unsigned threads = 0;              // 0 = hardware concurrency
    kernels::Backend backend = kernels::Backend::Auto;
};

// Thrown when an enumeration cannot reach the requested depth inside the
// budget; carries the bounds accumulated over the depths that did complete.
class BudgetExceeded : public Error {
public:
    BudgetExceeded(JsrReport partial_, const std::string& msg)
        : Error(msg), partial(std::move(partial_)) {}

    JsrReport partial;
};

// Exact fast paths, tried in order: proportional pattern with bc >= 0,
// all-symmetric members, SPD-feasible symmetrization, diagonal/antidiagonal
// pair, and (for pairs) the eigenbasis canonicalization route. Absent when
// none applies. The witness is the single-letter word of largest member
// radius, smallest index on ties.
std::optional<JsrReport> exact_fast_path(const MatrixFamily& fam);

// Running maximum of rho(M_w)^(1/|w|) over one Lyndon representative per
// cyclic class of words of length 1..max_depth. Monotone nondecreasing in
// max_depth. Witness ties break shortest-first, then lexicographic.
JsrReport lower_bound(const MatrixFamily& fam, int max_depth, const EnumOptions& opt = {});

// min over n = 1..depth of max_{|w|=n} |M_w|_2^(1/n); every depth yields a
// valid upper bound, the minimum is reported.
double upper_bound(const MatrixFamily& fam, int depth, const EnumOptions& opt = {});

// Fast path if one applies, otherwise lower and upper enumeration bounds
// merged into one report.
JsrReport jsr_report(const MatrixFamily& fam, int depth, const EnumOptions& opt = {});

enum class Verdict { Stable, Unstable, Marginal, Undecided };

const char* to_string(Verdict v);

struct StabilityReport {
    Verdict verdict = Verdict::Undecided;
    std::string reason;
    JsrReport bounds;
};

// Absolute-stability decision. Exact value v when a fast path applies:
// stable iff v < 1 - rtol, unstable iff v > 1 + rtol, marginal inside the
// band. Otherwise decided from enumeration bounds; never throws, a blown
// budget degrades to the bounds gathered so far.
StabilityReport decide_stability(const MatrixFamily& fam, int max_depth = 12,
                                 const EnumOptions& opt = {});

struct SwitchingSequence {
    struct Block {
        int member = 0;
        std::int64_t count = 1;
    };
    std::vector<Block> blocks;
};

struct StepNorm {
    int member = 0;
    std::int64_t count = 0;
    double log10_norm = 0.0; // always finite for a nonzero product
    double norm = 0.0;       // saturates to inf/0 outside double range
};

// Euclidean norms of the running left-to-right product after each block,
// with rescaled accumulation. Throws IndexOutOfRange for a bad member index,
// std::invalid_argument for a nonpositive repeat count.
std::vector<StepNorm> simulate_norm_decay(const MatrixFamily& fam, const SwitchingSequence& seq);

// Finiteness-property-known flags, reported without computing a value.
struct InfoFlags {
    bool transpose_closed = false;
    bool rank_one_member = false;
};

InfoFlags info_flags(const MatrixFamily& fam);

} // namespace jsr2
