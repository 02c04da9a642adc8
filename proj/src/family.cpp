#include "jsr2/family.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "jsr2/errors.hpp"

namespace jsr2 {

const char* to_string(SignClass s) {
    switch (s) {
    case SignClass::Positive: return "positive";
    case SignClass::Zero: return "zero";
    default: return "negative";
    }
}

namespace {

bool offdiag_is_zero(const Mat2& m, const Tol& tol) {
    return std::hypot(m.b, m.c) <= tol.atol * std::max(1.0, m.frobenius());
}

} // namespace

PatternReport detect_pattern(const MatrixFamily& fam) {
    const auto& ms = fam.members;
    const Tol& tol = fam.tol;
    const std::size_t n = ms.size();

    PatternReport rep;
    rep.ratios.assign(n, 0.0);

    // Base = member with the largest off-diagonal norm; zero off-diagonals
    // never constrain anything.
    std::size_t base = n;
    double best = -1.0;
    double scale = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double s = std::fabs(ms[k].b) + std::fabs(ms[k].c);
        scale = std::max(scale, s * s);
        if (offdiag_is_zero(ms[k], tol))
            continue;
        double on = std::hypot(ms[k].b, ms[k].c);
        if (on > best) {
            best = on;
            base = k;
        }
    }

    if (base == n) {
        rep.holds = true;
        rep.all_diagonal = true;
        rep.sign_class = SignClass::Zero;
        return rep;
    }

    rep.base_b = ms[base].b;
    rep.base_c = ms[base].c;

    // Parallel test on all pairs: |b_k c_j - b_j c_k| <= rtol * scale.
    rep.holds = true;
    for (std::size_t k = 0; k + 1 < n && rep.holds; ++k)
        for (std::size_t j = k + 1; j < n; ++j) {
            double cross = ms[k].b * ms[j].c - ms[j].b * ms[k].c;
            if (std::fabs(cross) > tol.rtol * scale) {
                rep.holds = false;
                break;
            }
        }

    double denom = rep.base_b * rep.base_b + rep.base_c * rep.base_c;
    for (std::size_t k = 0; k < n; ++k) {
        if (offdiag_is_zero(ms[k], tol))
            continue;
        rep.ratios[k] = (ms[k].b * rep.base_b + ms[k].c * rep.base_c) / denom;
    }
    rep.ratios[base] = 1.0;

    // Sign threshold is scale-relative so positive rescaling of the family
    // cannot flip the class.
    double p = rep.base_b * rep.base_c;
    double span = std::fabs(rep.base_b) + std::fabs(rep.base_c);
    double thr = tol.atol * std::max(1.0, span * span);
    rep.sign_class = p > thr    ? SignClass::Positive
                     : p < -thr ? SignClass::Negative
                                : SignClass::Zero;
    return rep;
}

namespace {

using json = nlohmann::json;

double number_at(const json& v, const std::string& where) {
    if (!v.is_number())
        throw ParseError(where + ": expected a number");
    double x = v.get<double>();
    if (!std::isfinite(x))
        throw ParseError(where + ": entry is not finite");
    return x;
}

} // namespace

MatrixFamily parse_family(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }

    if (!doc.is_object())
        throw ParseError("top level: expected an object");
    if (!doc.contains("matrices"))
        throw ParseError("top level: missing \"matrices\"");
    const json& arr = doc["matrices"];
    if (!arr.is_array() || arr.empty())
        throw ParseError("matrices: expected a non-empty array");

    MatrixFamily fam;
    fam.members.reserve(arr.size());
    for (std::size_t k = 0; k < arr.size(); ++k) {
        const std::string where = "matrices[" + std::to_string(k) + "]";
        const json& mj = arr[k];
        if (!mj.is_array() || mj.size() != 2)
            throw ParseError(where + ": expected 2 rows");
        double e[4];
        for (std::size_t i = 0; i < 2; ++i) {
            const json& row = mj[i];
            if (!row.is_array() || row.size() != 2)
                throw ParseError(where + "[" + std::to_string(i) + "]: expected 2 numbers");
            for (std::size_t j = 0; j < 2; ++j)
                e[2 * i + j] = number_at(row[j], where + "[" + std::to_string(i) + "][" +
                                                     std::to_string(j) + "]");
        }
        fam.members.push_back({e[0], e[1], e[2], e[3]});
    }

    if (doc.contains("tol")) {
        const json& tj = doc["tol"];
        if (!tj.is_object())
            throw ParseError("tol: expected an object");
        if (tj.contains("rtol"))
            fam.tol.rtol = number_at(tj["rtol"], "tol.rtol");
        if (tj.contains("atol"))
            fam.tol.atol = number_at(tj["atol"], "tol.atol");
        if (fam.tol.rtol <= 0.0 || fam.tol.atol <= 0.0)
            throw ParseError("tol: rtol and atol must be positive");
    }
    return fam;
}

std::string serialize_family(const MatrixFamily& fam) {
    nlohmann::ordered_json doc;
    auto& arr = doc["matrices"] = nlohmann::ordered_json::array();
    for (const Mat2& m : fam.members)
        arr.push_back({{m.a, m.b}, {m.c, m.d}});
    doc["tol"] = {{"rtol", fam.tol.rtol}, {"atol", fam.tol.atol}};
    return doc.dump(2) + "\n";
}

} // namespace jsr2
