#include "jsr2/jsr.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "jsr2/symmetrize.hpp"

namespace jsr2 {

const char* to_string(Method m) {
    switch (m) {
    case Method::ExactPattern: return "exact-pattern";
    case Method::ExactSymmetric: return "exact-symmetric";
    case Method::ExactSpd: return "exact-spd";
    case Method::ExactDiagAntidiag: return "exact-diag-antidiag";
    default: return "enumeration";
    }
}

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Stable: return "stable";
    case Verdict::Unstable: return "unstable";
    case Verdict::Marginal: return "marginal";
    default: return "undecided";
    }
}

namespace {

std::vector<double> member_radii(const MatrixFamily& fam) {
    std::vector<double> r;
    r.reserve(fam.size());
    for (const Mat2& m : fam.members)
        r.push_back(spectral_radius(m, fam.tol));
    return r;
}

JsrReport exact_report(const MatrixFamily& fam, Method method) {
    std::vector<double> radii = member_radii(fam);
    std::size_t arg = 0;
    for (std::size_t k = 1; k < radii.size(); ++k)
        if (radii[k] > radii[arg])
            arg = k;
    JsrReport rep;
    rep.lower = rep.upper = radii[arg];
    rep.witness = {static_cast<int>(arg)};
    rep.depth = 1;
    rep.method = method;
    rep.exact = true;
    rep.products = fam.size();
    return rep;
}

bool all_symmetric(const MatrixFamily& fam) {
    return std::all_of(fam.members.begin(), fam.members.end(), [&](const Mat2& m) {
        return std::fabs(m.b - m.c) <= fam.tol.rtol * (1.0 + m.frobenius());
    });
}

bool offdiag_zero(const Mat2& m, const Tol& tol) {
    return std::hypot(m.b, m.c) <= tol.atol * std::max(1.0, m.frobenius());
}

bool diag_zero(const Mat2& m, const Tol& tol) {
    return std::hypot(m.a, m.d) <= tol.atol * std::max(1.0, m.frobenius());
}

bool is_diag_antidiag_pair(const MatrixFamily& fam) {
    if (fam.size() != 2)
        return false;
    const Mat2& x = fam.members[0];
    const Mat2& y = fam.members[1];
    return (offdiag_zero(x, fam.tol) && diag_zero(y, fam.tol)) ||
           (diag_zero(x, fam.tol) && offdiag_zero(y, fam.tol));
}

bool pattern_applies(const PatternReport& p) {
    return p.holds && p.sign_class != SignClass::Negative;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

} // namespace

std::optional<JsrReport> exact_fast_path(const MatrixFamily& fam) {
    if (fam.members.empty())
        return std::nullopt;

    if (pattern_applies(detect_pattern(fam)))
        return exact_report(fam, Method::ExactPattern);

    if (all_symmetric(fam))
        return exact_report(fam, Method::ExactSymmetric);

    if (spd_feasibility(fam).feasible)
        return exact_report(fam, Method::ExactSpd);

    if (is_diag_antidiag_pair(fam))
        return exact_report(fam, Method::ExactDiagAntidiag);

    // Pair route: diagonalize one member, then look for the pattern again.
    if (fam.size() == 2) {
        for (std::size_t pivot = 0; pivot < 2; ++pivot) {
            if (eigen(fam.members[pivot], fam.tol).kind != EigenKind::RealDistinct)
                continue;
            try {
                Canonicalization canon = canonicalize_via_eigenbasis(fam, pivot);
                if (pattern_applies(detect_pattern(canon.family)))
                    return exact_report(fam, Method::ExactPattern);
            } catch (const Error&) {
                // ill-conditioned eigenbasis: route unavailable
            }
        }
    }
    return std::nullopt;
}

JsrReport jsr_report(const MatrixFamily& fam, int depth, const EnumOptions& opt) {
    if (std::optional<JsrReport> fast = exact_fast_path(fam))
        return *fast;

    bool exceeded = false;
    JsrReport rep;
    try {
        rep = lower_bound(fam, depth, opt);
    } catch (const BudgetExceeded& e) {
        rep = e.partial;
        exceeded = true;
    }
    try {
        rep.upper = upper_bound(fam, depth, opt);
    } catch (const BudgetExceeded& e) {
        rep.upper = e.partial.upper;
        rep.products += e.partial.products;
        exceeded = true;
    }
    if (exceeded)
        throw BudgetExceeded(rep, "product budget reached before depth " +
                                      std::to_string(depth));
    return rep;
}

StabilityReport decide_stability(const MatrixFamily& fam, int max_depth,
                                 const EnumOptions& opt) {
    const double rtol = fam.tol.rtol;
    StabilityReport out;

    if (std::optional<JsrReport> fast = exact_fast_path(fam)) {
        double v = fast->lower;
        out.bounds = *fast;
        if (v < 1.0 - rtol)
            out.verdict = Verdict::Stable;
        else if (v > 1.0 + rtol)
            out.verdict = Verdict::Unstable;
        else
            out.verdict = Verdict::Marginal;
        out.reason = std::string(to_string(fast->method)) + ": joint spectral radius = " +
                     fmt(v) + " = max member radius (member " +
                     std::to_string(fast->witness.front()) + ")";
        return out;
    }

    JsrReport lb;
    try {
        lb = lower_bound(fam, max_depth, opt);
    } catch (const BudgetExceeded& e) {
        lb = e.partial;
    }
    double ub;
    try {
        ub = upper_bound(fam, max_depth, opt);
    } catch (const BudgetExceeded& e) {
        ub = e.partial.upper;
    }

    out.bounds = lb;
    out.bounds.upper = ub;

    std::ostringstream why;
    if (ub < 1.0) {
        out.verdict = Verdict::Stable;
        why << "norm bound " << fmt(ub) << " < 1 at depth " << lb.depth;
    } else if (lb.lower > 1.0 + rtol) {
        out.verdict = Verdict::Unstable;
        why << "witness word of length " << lb.witness.size() << " with rho^(1/n) = "
            << fmt(lb.lower) << " > 1";
    } else if (lb.lower >= 1.0 - rtol && !lb.witness.empty()) {
        out.verdict = Verdict::Marginal;
        why << "witness word reaches rho^(1/n) = " << fmt(lb.lower)
            << " within tolerance of 1";
    } else {
        out.verdict = Verdict::Undecided;
        why << "bounds [" << fmt(lb.lower) << ", " << fmt(ub) << "] straddle 1 at depth "
            << lb.depth;
    }
    out.reason = why.str();
    return out;
}

std::vector<StepNorm> simulate_norm_decay(const MatrixFamily& fam,
                                          const SwitchingSequence& seq) {
    constexpr double kHi = 0x1p256;
    constexpr double kLo = 0x1p-256;

    for (const auto& block : seq.blocks) {
        if (block.member < 0 || static_cast<std::size_t>(block.member) >= fam.size())
            throw IndexOutOfRange("block member " + std::to_string(block.member) +
                                  " out of range");
        if (block.count < 1)
            throw std::invalid_argument("block repeat counts must be positive");
    }

    Mat2 run = Mat2::identity();
    long e2 = 0;
    std::vector<StepNorm> out;
    out.reserve(seq.blocks.size());
    for (const auto& block : seq.blocks) {
        const Mat2& m = fam.members[block.member];
        for (std::int64_t i = 0; i < block.count; ++i) {
            run = run * m;
            double f = run.max_abs();
            while (f > kHi) {
                run = run * 0x1p-256;
                e2 += 256;
                f *= 0x1p-256;
            }
            while (f > 0.0 && f < kLo) {
                run = run * 0x1p256;
                e2 -= 256;
                f *= 0x1p256;
            }
        }
        double sigma = spectral_norm(run);
        StepNorm step;
        step.member = block.member;
        step.count = block.count;
        step.log10_norm = (std::log(sigma) + e2 * M_LN2) / M_LN10;
        step.norm = std::ldexp(sigma, static_cast<int>(std::clamp<long>(e2, -4000, 4000)));
        out.push_back(step);
    }
    return out;
}

InfoFlags info_flags(const MatrixFamily& fam) {
    const Tol& tol = fam.tol;
    InfoFlags flags;

    auto entry_close = [&](const Mat2& x, const Mat2& y) {
        double s = std::max(x.max_abs(), y.max_abs());
        double eps = tol.atol + tol.rtol * s;
        return std::fabs(x.a - y.a) <= eps && std::fabs(x.b - y.b) <= eps &&
               std::fabs(x.c - y.c) <= eps && std::fabs(x.d - y.d) <= eps;
    };

    flags.transpose_closed = std::all_of(
        fam.members.begin(), fam.members.end(), [&](const Mat2& m) {
            Mat2 t = m.transpose();
            return std::any_of(fam.members.begin(), fam.members.end(),
                               [&](const Mat2& n) { return entry_close(n, t); });
        });

    flags.rank_one_member = std::any_of(
        fam.members.begin(), fam.members.end(), [&](const Mat2& m) {
            double f = m.frobenius();
            return f > tol.atol && std::fabs(m.det()) <= tol.atol * std::max(1.0, f * f);
        });

    return flags;
}

} // namespace jsr2
