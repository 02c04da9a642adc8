// jsr2: analyze a family of real 2x2 matrices from a JSON file.
//
// Exit codes: 0 success (or verdict "stable"), 1 unstable, 2 marginal,
// 3 undecided, 64 usage error, 65 unreadable or malformed input,
// 70 product budget exceeded or internal failure.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jsr2/jsr.hpp"
#include "jsr2/symmetrize.hpp"

namespace {

using jsr2::Mat2;
using jsr2::MatrixFamily;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUnstable = 1;
constexpr int kExitMarginal = 2;
constexpr int kExitUndecided = 3;
constexpr int kExitUsage = 64;
constexpr int kExitParse = 65;
constexpr int kExitBudget = 70;

struct Options {
    std::string input;
    std::string format = "text";
    double rtol = 0.0; // 0 = keep the file's (or default) tolerance
    double atol = 0.0;
    int depth = 12;
    std::uint64_t budget = 50'000'000;
    unsigned threads = 0;
    std::string blocks;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::uint64_t length = 100;
};

MatrixFamily load_family(const Options& opt) {
    std::ifstream in(opt.input, std::ios::binary);
    if (!in)
        throw jsr2::ParseError("cannot read " + opt.input);
    std::ostringstream buf;
    buf << in.rdbuf();
    MatrixFamily fam = jsr2::parse_family(buf.str());
    if (opt.rtol > 0.0)
        fam.tol.rtol = opt.rtol;
    if (opt.atol > 0.0)
        fam.tol.atol = opt.atol;
    return fam;
}

jsr2::EnumOptions enum_options(const Options& opt) {
    jsr2::EnumOptions eo;
    eo.budget = opt.budget;
    eo.threads = opt.threads;
    return eo;
}

std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(15) << v;
    return os.str();
}

std::string mat_text(const Mat2& m) {
    return "[[" + num(m.a) + ", " + num(m.b) + "], [" + num(m.c) + ", " + num(m.d) + "]]";
}

ordered_json mat_json(const Mat2& m) {
    return ordered_json::array(
        {ordered_json::array({m.a, m.b}), ordered_json::array({m.c, m.d})});
}

ordered_json tol_json(const jsr2::Tol& tol) {
    return {{"rtol", tol.rtol}, {"atol", tol.atol}};
}

ordered_json report_header(const char* command, const Options& opt) {
    ordered_json doc;
    doc["schema_version"] = 1;
    doc["command"] = command;
    doc["input"] = opt.input;
    return doc;
}

void print_kv(const std::string& key, const std::string& value) {
    std::cout << std::left << std::setw(18) << key << value << "\n";
}

void print_tol(const jsr2::Tol& tol) {
    print_kv("rtol", num(tol.rtol));
    print_kv("atol", num(tol.atol));
}

void emit(const ordered_json& doc) {
    std::cout << doc.dump(2) << "\n";
}

void fill_bounds(ordered_json& doc, const jsr2::JsrReport& rep) {
    doc["lower"] = rep.lower;
    doc["upper"] = rep.upper; // inf renders as null
    doc["witness"] = rep.witness;
    doc["depth"] = rep.depth;
    doc["method"] = jsr2::to_string(rep.method);
    doc["exact"] = rep.exact;
    doc["products"] = rep.products;
}

std::string witness_text(const std::vector<int>& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i)
            s += ' ';
        s += std::to_string(w[i]);
    }
    return s;
}

int cmd_check(const Options& opt) {
    MatrixFamily fam = load_family(opt);
    jsr2::PatternReport rep = jsr2::detect_pattern(fam);
    if (opt.format == "json") {
        ordered_json doc = report_header("check", opt);
        doc["holds"] = rep.holds;
        doc["all_diagonal"] = rep.all_diagonal;
        doc["base_b"] = rep.base_b;
        doc["base_c"] = rep.base_c;
        doc["ratios"] = rep.ratios;
        doc["sign_class"] = jsr2::to_string(rep.sign_class);
        doc["tol"] = tol_json(fam.tol);
        emit(doc);
    } else {
        print_kv("holds", rep.holds ? "true" : "false");
        print_kv("all_diagonal", rep.all_diagonal ? "true" : "false");
        print_kv("base_b", num(rep.base_b));
        print_kv("base_c", num(rep.base_c));
        std::string ratios;
        for (std::size_t i = 0; i < rep.ratios.size(); ++i)
            ratios += (i ? " " : "") + num(rep.ratios[i]);
        print_kv("ratios", ratios);
        print_kv("sign_class", jsr2::to_string(rep.sign_class));
        print_tol(fam.tol);
    }
    return kExitOk;
}

int cmd_symmetrize(const Options& opt) {
    MatrixFamily fam = load_family(opt);
    jsr2::SymmetrizationResult res = jsr2::spd_feasibility(fam);
    const auto& cert = res.certificate;
    if (opt.format == "json") {
        ordered_json doc = report_header("symmetrize", opt);
        doc["feasible"] = res.feasible;
        if (res.feasible) {
            doc["Q"] = mat_json(res.Q);
            doc["S"] = mat_json(res.S);
            ordered_json conj = ordered_json::array();
            for (const Mat2& m : res.conjugated)
                conj.push_back(mat_json(m));
            doc["conjugated"] = conj;
        }
        ordered_json cj;
        cj["dimension"] = cert.dimension;
        ordered_json basis = ordered_json::array();
        for (const auto& s : cert.basis)
            basis.push_back(ordered_json::array({s[0], s[1], s[2]}));
        cj["basis"] = basis;
        cj["max_lambda_min"] = cert.max_lambda_min; // NaN renders as null
        cj["marginal"] = cert.marginal;
        cj["reason"] = cert.reason;
        doc["certificate"] = cj;
        doc["tol"] = tol_json(fam.tol);
        emit(doc);
    } else {
        print_kv("feasible", res.feasible ? "true" : "false");
        if (res.feasible) {
            print_kv("Q", mat_text(res.Q));
            print_kv("S", mat_text(res.S));
            for (std::size_t k = 0; k < res.conjugated.size(); ++k)
                print_kv("conjugated[" + std::to_string(k) + "]",
                         mat_text(res.conjugated[k]));
        } else {
            print_kv("reason", cert.reason);
        }
        print_kv("subspace_dim", std::to_string(cert.dimension));
        for (std::size_t i = 0; i < cert.basis.size(); ++i)
            print_kv("basis[" + std::to_string(i) + "]",
                     "(" + num(cert.basis[i][0]) + ", " + num(cert.basis[i][1]) + ", " +
                         num(cert.basis[i][2]) + ")");
        if (cert.dimension > 0 && !std::isnan(cert.max_lambda_min))
            print_kv("max_lambda_min", num(cert.max_lambda_min));
        print_tol(fam.tol);
    }
    return kExitOk;
}

void emit_jsr(const Options& opt, const MatrixFamily& fam, const jsr2::JsrReport& rep,
              bool budget_exceeded) {
    if (opt.format == "json") {
        ordered_json doc = report_header("jsr", opt);
        fill_bounds(doc, rep);
        doc["budget_exceeded"] = budget_exceeded;
        doc["tol"] = tol_json(fam.tol);
        emit(doc);
    } else {
        print_kv("lower", num(rep.lower));
        print_kv("upper", num(rep.upper));
        print_kv("witness", witness_text(rep.witness));
        print_kv("depth", std::to_string(rep.depth));
        print_kv("method", jsr2::to_string(rep.method));
        print_kv("exact", rep.exact ? "true" : "false");
        print_kv("products", std::to_string(rep.products));
        if (budget_exceeded)
            print_kv("budget_exceeded", "true");
        print_tol(fam.tol);
    }
}

int cmd_jsr(const Options& opt) {
    MatrixFamily fam = load_family(opt);
    try {
        jsr2::JsrReport rep = jsr2::jsr_report(fam, opt.depth, enum_options(opt));
        emit_jsr(opt, fam, rep, false);
        return kExitOk;
    } catch (const jsr2::BudgetExceeded& e) {
        emit_jsr(opt, fam, e.partial, true);
        return kExitBudget;
    }
}

int cmd_stability(const Options& opt) {
    MatrixFamily fam = load_family(opt);
    jsr2::StabilityReport rep = jsr2::decide_stability(fam, opt.depth, enum_options(opt));
    if (opt.format == "json") {
        ordered_json doc = report_header("stability", opt);
        doc["verdict"] = jsr2::to_string(rep.verdict);
        doc["reason"] = rep.reason;
        fill_bounds(doc, rep.bounds);
        doc["tol"] = tol_json(fam.tol);
        emit(doc);
    } else {
        print_kv("verdict", jsr2::to_string(rep.verdict));
        print_kv("reason", rep.reason);
        print_kv("lower", num(rep.bounds.lower));
        print_kv("upper", num(rep.bounds.upper));
        print_kv("witness", witness_text(rep.bounds.witness));
        print_kv("method", jsr2::to_string(rep.bounds.method));
        print_tol(fam.tol);
    }
    switch (rep.verdict) {
    case jsr2::Verdict::Stable: return kExitOk;
    case jsr2::Verdict::Unstable: return kExitUnstable;
    case jsr2::Verdict::Marginal: return kExitMarginal;
    default: return kExitUndecided;
    }
}

jsr2::SwitchingSequence parse_blocks(const std::string& text, std::size_t members) {
    jsr2::SwitchingSequence seq;
    std::istringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) {
        if (token.empty())
            throw CLI::ValidationError("--blocks", "empty block token");
        jsr2::SwitchingSequence::Block block;
        std::size_t caret = token.find('^');
        try {
            block.member = std::stoi(token.substr(0, caret));
            block.count = caret == std::string::npos ? 1 : std::stoll(token.substr(caret + 1));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--blocks", "bad block token '" + token + "'");
        }
        if (block.member < 0 || static_cast<std::size_t>(block.member) >= members)
            throw CLI::ValidationError("--blocks", "member index out of range in '" + token + "'");
        if (block.count < 1)
            throw CLI::ValidationError("--blocks", "repeat count must be positive in '" + token + "'");
        seq.blocks.push_back(block);
    }
    if (seq.blocks.empty())
        throw CLI::ValidationError("--blocks", "no blocks given");
    return seq;
}

jsr2::SwitchingSequence random_blocks(std::uint64_t seed, std::uint64_t length,
                                      std::size_t members) {
    // Plain modulo draw: identical block stream for a seed on every platform.
    std::mt19937_64 gen(seed);
    jsr2::SwitchingSequence seq;
    seq.blocks.reserve(length);
    for (std::uint64_t i = 0; i < length; ++i)
        seq.blocks.push_back({static_cast<int>(gen() % members), 1});
    return seq;
}

int cmd_simulate(const Options& opt) {
    MatrixFamily fam = load_family(opt);
    jsr2::SwitchingSequence seq;
    if (!opt.blocks.empty())
        seq = parse_blocks(opt.blocks, fam.size());
    else if (opt.seed_given)
        seq = random_blocks(opt.seed, opt.length, fam.size());
    else
        throw CLI::ValidationError("simulate", "need --blocks or --seed");

    std::vector<jsr2::StepNorm> steps = jsr2::simulate_norm_decay(fam, seq);
    if (opt.format == "json") {
        ordered_json doc = report_header("simulate", opt);
        ordered_json rows = ordered_json::array();
        for (std::size_t i = 0; i < steps.size(); ++i) {
            ordered_json row;
            row["step"] = i + 1;
            row["member"] = steps[i].member;
            row["count"] = steps[i].count;
            row["log10_norm"] = steps[i].log10_norm;
            rows.push_back(row);
        }
        doc["steps"] = rows;
        doc["tol"] = tol_json(fam.tol);
        emit(doc);
    } else {
        std::cout << "step,block,log10_norm\n";
        for (std::size_t i = 0; i < steps.size(); ++i)
            std::cout << i + 1 << "," << steps[i].member << "^" << steps[i].count << ","
                      << num(steps[i].log10_norm) << "\n";
    }
    return kExitOk;
}

int cmd_flags(const Options& opt) {
    MatrixFamily fam = load_family(opt);
    jsr2::InfoFlags flags = jsr2::info_flags(fam);
    if (opt.format == "json") {
        ordered_json doc = report_header("flags", opt);
        doc["transpose_closed"] = flags.transpose_closed;
        doc["rank_one_member"] = flags.rank_one_member;
        doc["tol"] = tol_json(fam.tol);
        emit(doc);
    } else {
        print_kv("transpose_closed", flags.transpose_closed ? "true" : "false");
        print_kv("rank_one_member", flags.rank_one_member ? "true" : "false");
        print_tol(fam.tol);
    }
    return kExitOk;
}

void add_common(CLI::App* cmd, Options& opt) {
    cmd->add_option("input", opt.input, "family JSON file")->required();
    cmd->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--rtol", opt.rtol, "relative tolerance override")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--atol", opt.atol, "absolute tolerance override")
        ->check(CLI::PositiveNumber);
}

void add_enum(CLI::App* cmd, Options& opt) {
    cmd->add_option("--depth", opt.depth, "maximum product word length")
        ->check(CLI::Range(1, 64));
    cmd->add_option("--budget", opt.budget, "product evaluation budget");
    cmd->add_option("--threads", opt.threads, "worker threads (0 = auto)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact and bounded joint spectral radii for families of real 2x2 matrices"};
    app.require_subcommand(1);

    Options opt;
    CLI::App* check = app.add_subcommand("check", "detect the proportional off-diagonal pattern");
    add_common(check, opt);
    CLI::App* symmetrize =
        app.add_subcommand("symmetrize", "decide simultaneous symmetrizability");
    add_common(symmetrize, opt);
    CLI::App* jsr = app.add_subcommand("jsr", "joint spectral radius (exact or bounds)");
    add_common(jsr, opt);
    add_enum(jsr, opt);
    CLI::App* stability = app.add_subcommand("stability", "absolute stability verdict");
    add_common(stability, opt);
    add_enum(stability, opt);
    CLI::App* simulate = app.add_subcommand("simulate", "norm trajectory of a switching sequence");
    add_common(simulate, opt);
    simulate->add_option("--blocks", opt.blocks, "inline blocks, e.g. 0^3,1^2");
    CLI::Option* seed_opt = simulate->add_option("--seed", opt.seed, "random policy seed");
    simulate->add_option("--length", opt.length, "random policy length");
    CLI::App* flags = app.add_subcommand("flags", "informational finiteness flags");
    add_common(flags, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    opt.seed_given = seed_opt->count() > 0;

    try {
        if (check->parsed())
            return cmd_check(opt);
        if (symmetrize->parsed())
            return cmd_symmetrize(opt);
        if (jsr->parsed())
            return cmd_jsr(opt);
        if (stability->parsed())
            return cmd_stability(opt);
        if (simulate->parsed())
            return cmd_simulate(opt);
        if (flags->parsed())
            return cmd_flags(opt);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const jsr2::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    }
    return kExitUsage;
}
