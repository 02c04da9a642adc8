// Product enumeration: the necklace-pruned lower bound and the full-tree
// norm upper bound. Intermediate products carry a power-of-two exponent and
// are renormalized whenever their magnitude leaves [2^-256, 2^256], so deep
// words neither overflow nor flush to zero.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "jsr2/jsr.hpp"

namespace jsr2 {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kHi = 0x1p256;
constexpr double kLo = 0x1p-256;
constexpr int kMaxDepth = 64;

struct Scaled {
    Mat2 m;
    long e2 = 0; // value = m * 2^e2
};

void renorm(Scaled& s) {
    double f = s.m.max_abs();
    if (f == 0.0)
        return;
    while (f > kHi) {
        s.m = s.m * 0x1p-256;
        s.e2 += 256;
        f *= 0x1p-256;
    }
    while (f < kLo) {
        s.m = s.m * 0x1p256;
        s.e2 -= 256;
        f *= 0x1p256;
    }
}

// Members are brought to max|entry| in [1, 2) up front (exact ldexp scaling),
// which keeps every intermediate of a renormalized prefix far from overflow.
Scaled prescale(const Mat2& m) {
    double f = m.max_abs();
    if (f == 0.0)
        return {m, 0};
    int ex;
    std::frexp(f, &ex);
    int shift = 1 - ex;
    return {{std::ldexp(m.a, shift), std::ldexp(m.b, shift), std::ldexp(m.c, shift),
             std::ldexp(m.d, shift)},
            static_cast<long>(-shift)};
}

// Largest n <= max_depth with sum_{i<=n} q^i within the budget.
int effective_depth(std::size_t q, int max_depth, std::uint64_t budget) {
    std::uint64_t total = 0, pw = 1;
    int d = 0;
    for (int n = 1; n <= max_depth; ++n) {
        if (pw > budget / q)
            break;
        pw *= q;
        if (total > budget - pw)
            break;
        total += pw;
        d = n;
    }
    return d;
}

void validate(const MatrixFamily& fam, int depth) {
    if (fam.members.empty())
        throw std::invalid_argument("family has no members");
    for (const Mat2& m : fam.members)
        if (!m.finite())
            throw std::invalid_argument("family entries must be finite");
    if (depth < 1)
        throw std::invalid_argument("depth must be at least 1");
    if (depth > kMaxDepth)
        throw std::invalid_argument("enumeration depth is capped at 64");
}

// ---------------------------------------------------------------------------
// Lower bound: one Lyndon representative per cyclic class. rho is invariant
// under rotation and rho(u^k) = rho(u)^k, so aperiodic representatives of
// length <= depth cover every word. Generation follows Duval's successor
// step; the prefix-product stack makes each appended letter one multiply.
// ---------------------------------------------------------------------------

class LyndonEnumerator {
public:
    LyndonEnumerator(const std::vector<Scaled>& members, int depth, const Tol& tol,
                     const kernels::Ops& ops)
        : mem_(members), q_(static_cast<int>(members.size())), depth_(depth), tol_(tol),
          ops_(ops) {}

    void run() {
        push(0);
        while (true) {
            emit();
            std::size_t period = word_.size();
            while (word_.size() < static_cast<std::size_t>(depth_))
                push(word_[word_.size() - period]);
            while (!word_.empty() && word_.back() == q_ - 1)
                pop();
            if (word_.empty())
                break;
            int next = word_.back() + 1;
            pop();
            push(next);
        }
        flush();
    }

    std::uint64_t products = 0;

    double best_value() const {
        if (best_e2_ == 0)
            return std::pow(best_rho_, 1.0 / best_len_);
        return std::exp((std::log(best_rho_) + best_e2_ * M_LN2) / best_len_);
    }

    std::vector<int> best_witness() const {
        return {best_word_.begin(), best_word_.begin() + best_len_};
    }

private:
    static constexpr std::size_t kBuf = 1024;

    void push(int letter) {
        Scaled p;
        if (stack_.empty()) {
            p = mem_[letter];
        } else {
            p.m = stack_.back().m * mem_[letter].m;
            p.e2 = stack_.back().e2 + mem_[letter].e2;
            renorm(p);
        }
        stack_.push_back(p);
        word_.push_back(static_cast<std::uint8_t>(letter));
        ++products;
    }

    void pop() {
        stack_.pop_back();
        word_.pop_back();
    }

    void emit() {
        if (count_ == kBuf)
            flush();
        const Scaled& p = stack_.back();
        std::size_t i = count_++;
        a_[i] = p.m.a;
        b_[i] = p.m.b;
        c_[i] = p.m.c;
        d_[i] = p.m.d;
        e_[i] = p.e2;
        len_[i] = static_cast<int>(word_.size());
        std::copy(word_.begin(), word_.end(), words_[i].begin());
    }

    void flush() {
        ops_.spectral_radius(a_.data(), b_.data(), c_.data(), d_.data(), count_, tol_.atol,
                             rho_.data());
        for (std::size_t i = 0; i < count_; ++i) {
            double lg = (std::log(rho_[i]) + e_[i] * M_LN2) / len_[i];
            if (better(lg, words_[i].data(), len_[i])) {
                best_log_ = lg;
                best_rho_ = rho_[i];
                best_e2_ = e_[i];
                best_len_ = len_[i];
                best_word_ = words_[i];
                have_best_ = true;
            }
        }
        count_ = 0;
    }

    bool better(double lg, const std::uint8_t* w, int len) const {
        if (!have_best_)
            return true;
        if (lg != best_log_)
            return lg > best_log_;
        if (len != best_len_)
            return len < best_len_;
        return std::lexicographical_compare(w, w + len, best_word_.data(),
                                            best_word_.data() + best_len_);
    }

    const std::vector<Scaled>& mem_;
    int q_;
    int depth_;
    Tol tol_;
    const kernels::Ops& ops_;

    std::vector<std::uint8_t> word_;
    std::vector<Scaled> stack_;

    std::array<double, kBuf> a_{}, b_{}, c_{}, d_{}, rho_{};
    std::array<long, kBuf> e_{};
    std::array<int, kBuf> len_{};
    std::array<std::array<std::uint8_t, kMaxDepth>, kBuf> words_{};
    std::size_t count_ = 0;

    bool have_best_ = false;
    double best_log_ = -kInf;
    double best_rho_ = 0.0;
    long best_e2_ = 0;
    int best_len_ = 1;
    std::array<std::uint8_t, kMaxDepth> best_word_{};
};

// ---------------------------------------------------------------------------
// Upper bound: walk every word of every length once. Short prefixes go
// depth-first on one thread; each prefix of the split length seeds a
// level-synchronous batched subtree handled by the worker pool. Per level we
// track the plain maximum norm for unscaled lanes and a log-space maximum for
// rescaled ones.
// ---------------------------------------------------------------------------

struct LevelStats {
    std::vector<double> lin; // max sigma among lanes with exponent 0
    std::vector<double> lg;  // max log(sigma) + e2*ln2 among the rest

    explicit LevelStats(int depth) : lin(depth + 1, 0.0), lg(depth + 1, -kInf) {}

    void merge(const LevelStats& o) {
        for (std::size_t i = 0; i < lin.size(); ++i) {
            lin[i] = std::max(lin[i], o.lin[i]);
            lg[i] = std::max(lg[i], o.lg[i]);
        }
    }

    void record(int level, double sigma, long e2) {
        if (e2 == 0)
            lin[level] = std::max(lin[level], sigma);
        else if (sigma > 0.0)
            lg[level] = std::max(lg[level], std::log(sigma) + e2 * M_LN2);
    }
};

struct Walk {
    LevelStats stats;
    std::uint64_t products = 0;
    int deff = 0;

    explicit Walk(int depth) : stats(depth) {}
};

class SubtreeExpander {
public:
    SubtreeExpander(const std::vector<Scaled>& members, std::size_t capacity, int depth,
                    const kernels::Ops& ops)
        : stats(depth), mem_(members), q_(members.size()), ops_(ops) {
        for (auto* v : {&ca_, &cb_, &cc_, &cd_, &na_, &nb_, &nc_, &nd_, &sig_})
            v->resize(capacity);
        ce_.resize(capacity);
        ne_.resize(capacity);
    }

    void expand(const Scaled& seed, int base_level, int levels) {
        ca_[0] = seed.m.a;
        cb_[0] = seed.m.b;
        cc_[0] = seed.m.c;
        cd_[0] = seed.m.d;
        ce_[0] = seed.e2;
        std::size_t cn = 1;
        for (int l = 1; l <= levels; ++l) {
            std::size_t nn = cn * q_;
            for (std::size_t m = 0; m < q_; ++m) {
                const Mat2& r = mem_[m].m;
                std::size_t off = m * cn;
                ops_.mul_right(ca_.data(), cb_.data(), cc_.data(), cd_.data(), cn, r.a, r.b,
                               r.c, r.d, na_.data() + off, nb_.data() + off, nc_.data() + off,
                               nd_.data() + off);
                for (std::size_t i = 0; i < cn; ++i)
                    ne_[off + i] = ce_[i] + mem_[m].e2;
            }
            products += nn;
            ops_.spectral_norm(na_.data(), nb_.data(), nc_.data(), nd_.data(), nn, sig_.data());
            for (std::size_t i = 0; i < nn; ++i) {
                double s = sig_[i];
                stats.record(base_level + l, s, ne_[i]);
                while (s > kHi) {
                    na_[i] *= 0x1p-256;
                    nb_[i] *= 0x1p-256;
                    nc_[i] *= 0x1p-256;
                    nd_[i] *= 0x1p-256;
                    ne_[i] += 256;
                    s *= 0x1p-256;
                }
                while (s > 0.0 && s < kLo) {
                    na_[i] *= 0x1p256;
                    nb_[i] *= 0x1p256;
                    nc_[i] *= 0x1p256;
                    nd_[i] *= 0x1p256;
                    ne_[i] -= 256;
                    s *= 0x1p256;
                }
            }
            ca_.swap(na_);
            cb_.swap(nb_);
            cc_.swap(nc_);
            cd_.swap(nd_);
            ce_.swap(ne_);
            cn = nn;
        }
    }

    std::uint64_t products = 0;
    LevelStats stats;

private:
    const std::vector<Scaled>& mem_;
    std::size_t q_;
    const kernels::Ops& ops_;
    std::vector<double> ca_, cb_, cc_, cd_, na_, nb_, nc_, nd_, sig_;
    std::vector<long> ce_, ne_;
};

void collect_prefixes(const std::vector<Scaled>& mem, const Scaled& node, int level, int plen,
                      Walk& walk, std::vector<Scaled>& jobs) {
    if (level == plen) {
        jobs.push_back(node);
        return;
    }
    for (const Scaled& m : mem) {
        Scaled child{node.m * m.m, node.e2 + m.e2};
        renorm(child);
        ++walk.products;
        walk.stats.record(level + 1, spectral_norm(child.m), child.e2);
        collect_prefixes(mem, child, level + 1, plen, walk, jobs);
    }
}

Walk walk_norms(const MatrixFamily& fam, int depth, const EnumOptions& opt) {
    const std::size_t q = fam.size();
    const int deff = effective_depth(q, depth, opt.budget);

    Walk walk(depth);
    walk.deff = deff;
    if (deff == 0)
        return walk;

    std::vector<Scaled> mem;
    mem.reserve(q);
    for (const Mat2& m : fam.members)
        mem.push_back(prescale(m));

    // Subtree depth targets ~16k lanes per batch; the prefix layer above it
    // is walked sequentially and is a tiny fraction of the tree.
    int lsub = 1;
    std::size_t cap = q;
    while (lsub < deff && cap * q <= 16384) {
        cap *= q;
        ++lsub;
    }
    const int plen = deff - lsub;

    std::vector<Scaled> jobs;
    collect_prefixes(mem, Scaled{Mat2::identity(), 0}, 0, plen, walk, jobs);

    unsigned threads = opt.threads ? opt.threads : std::thread::hardware_concurrency();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs.size())));

    std::vector<SubtreeExpander> workers;
    workers.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
        workers.emplace_back(mem, cap, depth, kernels::ops(opt.backend));

    std::atomic<std::size_t> next{0};
    auto drain = [&](SubtreeExpander& w) {
        while (true) {
            std::size_t j = next.fetch_add(1);
            if (j >= jobs.size())
                break;
            w.expand(jobs[j], plen, lsub);
        }
    };

    if (threads == 1) {
        drain(workers[0]);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (auto& w : workers)
            pool.emplace_back(drain, std::ref(w));
        for (auto& t : pool)
            t.join();
    }

    for (const auto& w : workers) {
        walk.stats.merge(w.stats);
        walk.products += w.products;
    }
    return walk;
}

// Per-level bound max(lin^(1/n), exp(lg/n)); the plain-max path keeps the
// depth-1 bound bit-exact.
double level_bound(const LevelStats& s, int n) {
    double v = s.lin[n] > 0.0 ? std::pow(s.lin[n], 1.0 / n) : 0.0;
    if (s.lg[n] > -kInf)
        v = std::max(v, std::exp(s.lg[n] / n));
    return v;
}

} // namespace

JsrReport lower_bound(const MatrixFamily& fam, int max_depth, const EnumOptions& opt) {
    validate(fam, max_depth);

    const std::size_t q = fam.size();
    const int deff = effective_depth(q, max_depth, opt.budget);

    JsrReport rep;
    rep.method = Method::Enumeration;
    rep.depth = deff;
    rep.upper = kInf;

    if (deff >= 1) {
        std::vector<Scaled> mem;
        mem.reserve(q);
        for (const Mat2& m : fam.members)
            mem.push_back(prescale(m));
        LyndonEnumerator e(mem, deff, fam.tol, kernels::ops(opt.backend));
        e.run();
        rep.lower = e.best_value();
        rep.witness = e.best_witness();
        rep.products = e.products;
    }

    if (deff < max_depth)
        throw BudgetExceeded(rep, "product budget reached at depth " + std::to_string(deff) +
                                       " of " + std::to_string(max_depth));
    return rep;
}

double upper_bound(const MatrixFamily& fam, int depth, const EnumOptions& opt) {
    validate(fam, depth);

    Walk walk = walk_norms(fam, depth, opt);
    double best = kInf;
    for (int n = 1; n <= walk.deff; ++n)
        best = std::min(best, level_bound(walk.stats, n));

    if (walk.deff < depth) {
        JsrReport rep;
        rep.method = Method::Enumeration;
        rep.depth = walk.deff;
        rep.upper = best;
        rep.products = walk.products;
        throw BudgetExceeded(rep, "product budget reached at depth " +
                                      std::to_string(walk.deff) + " of " +
                                      std::to_string(depth));
    }
    return best;
}

} // namespace jsr2
