// Exhaustive scans over binomial exponent classes.
//
// The scan space is r in [2, (q-1)/2): F_r with u = 1 only depends on r mod
// (q-1)/2, and conjugating by the Frobenius turns F_r into F_{3r}, so one
// record per cyclotomic coset mod (q-1)/2 covers everything. The canonical
// representative is the coset minimum.
//
// The delta screen walks x once, accumulating counts of F_r(x+1) - F_r(x)
// with an early abort as soon as any b != 0 repeats past the limit; scratch
// buffers are epoch-stamped so rejected candidates (the overwhelming
// majority, typically killed after ~sqrt(q) steps) cost nothing to reset.

#ifndef CHI3_SCAN_HPP
#define CHI3_SCAN_HPP

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "chi3/apn_exponents.hpp"
#include "chi3/boomerang.hpp"

namespace chi3 {

struct ScanRecord {
    int n = 0;
    u64 canon_r = 0;                  // minimum of coset_half
    std::vector<u64> coset_half;      // sorted coset of canon_r mod (q-1)/2
    std::uint32_t delta_at_zero = 0;  // delta(1, 0)
    std::uint32_t max_delta_nonzero = 0;
    std::optional<std::uint32_t> beta;  // empty when only the screen ran
    int alg_degree = 0;
    u64 gcd = 0;  // gcd(canon_r, q-1)
    std::vector<std::string> tags;  // construction labels, primary first
};

struct ScanOptions {
    int threads = 1;
    bool bct_confirm = false;     // recompute beta by full BCT row even where
                                  // the differential shortcut already decides
    std::string checkpoint_path;  // plain text, one completed canon_r per line
    std::function<void(const std::string&)> note;  // loud observations
};

// Construction labels attached to a class, most specific first; the leading
// tag is the one the attribution table prints. Pure integer arithmetic.
inline std::vector<std::string> attribute(int n, u64 canon_r) {
    const u64 q = detail::pow3(unsigned(n));
    const u64 half = (q - 1) / 2;
    const std::vector<u64> cls = coset(i64(canon_r), half, 3);
    auto in_class = [&](u64 r) {
        return std::binary_search(cls.begin(), cls.end(), r % half);
    };
    std::vector<std::string> tags;
    auto add = [&](std::string t) {
        if (std::find(tags.begin(), tags.end(), t) == tags.end())
            tags.push_back(std::move(t));
    };

    if (in_class(detail::pow3(unsigned((n + 1) / 2)) - 1)) add("3^((n+1)/2)-1");
    for (int l = 2; (n + 1) % (1 << l) == 0; ++l)
        if (in_class(pow2_np1(n, l))) add("pow2(n+1,l=" + std::to_string(l) + ")");
    for (int l = 2; (n - 1) % (1 << l) == 0; ++l)
        if (in_class(pow2_nm1(n, l))) add("pow2(n-1,l=" + std::to_string(l) + ")");
    for (int m = 1; 2 * m <= n - 1; ++m) {
        if (std::gcd(m, n) != 1) continue;
        const ApnWitness w = apn_exponent(n, m);
        if (in_class(w.r))
            add("apn(m=" + std::to_string(m) + ",u=" + std::to_string(w.u) + ")");
    }
    if (in_class(2 * detail::pow3(unsigned((n - 1) / 2)) + 1)) add("2*3^((n-1)/2)+1");
    if (in_class(q - 3)) add("3^n-3");
    if (in_class(q - 2)) add("3^n-2");
    if (in_class((q + 1) / 4)) add("(3^n+1)/4");
    for (const DivisorFamilyEntry& e : divisor_family(n)) {
        if (!in_class(e.r)) continue;
        add(std::string("divisor(") +
            (e.branch == DivisorBranch::n_plus_1 ? "n+1" : "n-1") +
            ",m=" + std::to_string(e.m) + ")");
    }
    if (tags.empty()) tags.push_back("untagged");
    return tags;
}

namespace detail {

inline bool is_canonical(u64 r, u64 half) {
    u64 x = r * 3 % half;
    while (x != r) {
        if (x < r) return false;
        x = x * 3 % half;
    }
    return true;
}

struct ScreenScratch {
    std::vector<std::uint32_t> stamp;
    std::vector<std::uint32_t> count;
    std::uint32_t epoch = 0;
};

struct ScreenResult {
    std::uint32_t delta_at_zero = 0;
    std::uint32_t max_nonzero = 0;  // exact when !aborted
    bool aborted = false;
};

inline ScreenResult delta_screen(const FieldCtx& ctx, u64 re, std::uint32_t limit,
                                 ScreenScratch& sc) {
    if (sc.stamp.size() != ctx.q) {
        sc.stamp.assign(ctx.q, 0);
        sc.count.assign(ctx.q, 0);
        sc.epoch = 0;
    }
    if (++sc.epoch == 0) {  // stamp wrap: force a clean slate
        sc.stamp.assign(ctx.q, 0);
        sc.epoch = 1;
    }
    ScreenResult res;
    for (u64 x = 0; x < ctx.q; ++x) {
        const elem diff = ctx.sub(binomial_value(ctx, re, ctx.add_one(elem(x))),
                                  binomial_value(ctx, re, elem(x)));
        if (diff == 0) {
            ++res.delta_at_zero;
            continue;
        }
        std::uint32_t c;
        if (sc.stamp[diff] != sc.epoch) {
            sc.stamp[diff] = sc.epoch;
            sc.count[diff] = 1;
            c = 1;
        } else {
            c = ++sc.count[diff];
        }
        res.max_nonzero = std::max(res.max_nonzero, c);
        if (c > limit) {
            res.aborted = true;
            return res;
        }
    }
    return res;
}

// The differential-to-boomerang equivalence needs some member of the class
// (allowing the +(q-1)/2 shift, which leaves F_r untouched) with
// gcd(r, q-1) | 2.
inline bool shortcut_applicable(const FieldCtx& ctx, const std::vector<u64>& coset_half) {
    if (ctx.q % 4 != 3) return false;
    for (u64 m : coset_half)
        for (u64 rr : {m, m + ctx.half()}) {
            const u64 g = std::gcd(rr, ctx.q - 1);
            if (g == 1 || g == 2) return true;
        }
    return false;
}

inline std::uint32_t beta_of_class(const FieldCtx& ctx, u64 r) {
    const FuncTable F = tabulate(ctx, FuncKind::binomial, i64(r), 1);
    const BoomRow row = beta_row(ctx, F, 1);
    std::uint32_t mx = 0;
    for (u64 b = 1; b < ctx.q; ++b) mx = std::max(mx, row.counts[b]);
    return mx;
}

class Checkpoint {
  public:
    explicit Checkpoint(const std::string& path) {
        if (path.empty()) return;
        std::ifstream in(path);
        u64 r;
        while (in >> r) done_.insert(r);
        out_ = std::fopen(path.c_str(), "a");
        if (!out_) throw resource_error("cannot open checkpoint file: " + path);
    }
    Checkpoint(const Checkpoint&) = delete;
    Checkpoint& operator=(const Checkpoint&) = delete;
    ~Checkpoint() {
        if (out_) {
            flush_locked();
            std::fclose(out_);
        }
    }

    bool already_done(u64 r) const { return done_.count(r) != 0; }

    void complete(u64 r) {
        if (!out_) return;
        std::lock_guard<std::mutex> lk(mu_);
        std::fprintf(out_, "%llu\n", static_cast<unsigned long long>(r));
        if (++pending_ >= 256) flush_locked();
    }

  private:
    void flush_locked() {
        std::fflush(out_);
        ::fsync(fileno(out_));
        pending_ = 0;
    }

    std::set<u64> done_;
    std::FILE* out_ = nullptr;
    std::mutex mu_;
    int pending_ = 0;
};

// Runs fn(r) for every r in [2, half), spreading candidates over a small
// worker pool. Callers make their output order-independent (sort at the end),
// so scheduling does not leak into results.
template <typename Fn>
inline void for_each_candidate(u64 half, int threads, Fn&& fn) {
    if (threads <= 1) {
        for (u64 r = 2; r < half; ++r) fn(r);
        return;
    }
    std::atomic<u64> next{2};
    auto worker = [&] {
        for (u64 r; (r = next.fetch_add(1)) < half;) fn(r);
    };
    std::vector<std::thread> pool;
    pool.reserve(unsigned(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

inline ScanRecord make_record(const FieldCtx& ctx, u64 canon_r, const ScreenResult& sr,
                              std::optional<std::uint32_t> beta) {
    ScanRecord rec;
    rec.n = ctx.n;
    rec.canon_r = canon_r;
    rec.coset_half = coset(i64(canon_r), ctx.half(), 3);
    rec.delta_at_zero = sr.delta_at_zero;
    rec.max_delta_nonzero = sr.max_nonzero;
    rec.beta = beta;
    rec.alg_degree = algebraic_degree_binomial(ctx, i64(canon_r));
    rec.gcd = std::gcd(canon_r, ctx.q - 1);
    rec.tags = attribute(ctx.n, canon_r);
    return rec;
}

inline void require_odd_n(const FieldCtx& ctx) {
    if (ctx.p != 3) throw domain_error("class scans are specialized to p = 3");
    if (ctx.n % 2 == 0)
        throw domain_error("class scans require odd n: for even n the studied "
                           "constructions are empty");
}

}  // namespace detail

// Classes with beta = 0, confirmed either through the differential shortcut
// or (gcd outside {1, 2}, or --bct-confirm) a full BCT row.
inline std::vector<ScanRecord> scan_beta_zero(const FieldCtx& ctx,
                                              const ScanOptions& opts = {}) {
    detail::require_odd_n(ctx);
    const u64 half = ctx.half();
    std::mutex mu;
    std::vector<ScanRecord> out;
    detail::for_each_candidate(half, opts.threads, [&](u64 r) {
        if (!detail::is_canonical(r, half)) return;
        static thread_local detail::ScreenScratch scratch;
        const detail::ScreenResult sr = detail::delta_screen(ctx, r, 1, scratch);
        if (sr.aborted) return;
        const std::vector<u64> cls = coset(i64(r), half, 3);
        std::optional<std::uint32_t> beta;
        if (detail::shortcut_applicable(ctx, cls)) beta = 0;
        if (!beta || opts.bct_confirm) {
            const std::uint32_t full = detail::beta_of_class(ctx, r);
            if (beta && full != *beta)
                throw invariant_error(
                    "shortcut-confirmed beta contradicts the BCT row at n=" +
                    std::to_string(ctx.n) + " r=" + std::to_string(r));
            if (!beta && full != 0) {
                // The flat delta row did not force beta = 0 here; the
                // equivalence's gcd hypothesis genuinely matters for r.
                std::lock_guard<std::mutex> lk(mu);
                if (opts.note)
                    opts.note("screen-passing class with nonzero beta: n=" +
                              std::to_string(ctx.n) + " r=" + std::to_string(r) +
                              " beta=" + std::to_string(full));
                return;
            }
            beta = full;
        }
        ScanRecord rec = detail::make_record(ctx, r, sr, beta);
        std::lock_guard<std::mutex> lk(mu);
        out.push_back(std::move(rec));
    });
    std::sort(out.begin(), out.end(),
              [](const ScanRecord& a, const ScanRecord& b) { return a.canon_r < b.canon_r; });
    return out;
}

inline std::vector<ScanRecord> scan_beta_zero(int n, const ScanOptions& opts = {}) {
    return scan_beta_zero(build_field(3, n), opts);
}

// Classes with beta exactly 1. Needs a full BCT row per surviving class, so
// the field sizes are capped. Classes whose delta row is already flat belong
// to the beta = 0 table and are skipped here.
inline std::vector<ScanRecord> scan_beta_one(const FieldCtx& ctx,
                                             const ScanOptions& opts = {}) {
    detail::require_odd_n(ctx);
    if (ctx.n > 7)
        throw domain_error("beta=1 scan computes a BCT row per class; n <= 7 only");
    const u64 half = ctx.half();
    std::mutex mu;
    std::vector<ScanRecord> out;
    detail::for_each_candidate(half, opts.threads, [&](u64 r) {
        if (!detail::is_canonical(r, half)) return;
        static thread_local detail::ScreenScratch scratch;
        const detail::ScreenResult sr =
            detail::delta_screen(ctx, r, ctx.q, scratch);  // exact counts, no abort
        if (sr.max_nonzero <= 1) return;
        const std::uint32_t beta = detail::beta_of_class(ctx, r);
        if (beta == 0) {
            std::lock_guard<std::mutex> lk(mu);
            if (opts.note)
                opts.note("beta = 0 without a flat delta row: n=" + std::to_string(ctx.n) +
                          " r=" + std::to_string(r) +
                          " max delta=" + std::to_string(sr.max_nonzero));
            return;
        }
        if (beta != 1) return;
        ScanRecord rec = detail::make_record(ctx, r, sr, beta);
        std::lock_guard<std::mutex> lk(mu);
        out.push_back(std::move(rec));
    });
    std::sort(out.begin(), out.end(),
              [](const ScanRecord& a, const ScanRecord& b) { return a.canon_r < b.canon_r; });
    return out;
}

inline std::vector<ScanRecord> scan_beta_one(int n, const ScanOptions& opts = {}) {
    return scan_beta_one(build_field(3, n), opts);
}

// Screen-only scan: classes with delta(1, b) <= 1 for all b != 0, beta left
// uncomputed. This is the feasible search at n = 11 and 13, where a full BCT
// is out of reach; with a checkpoint path it resumes after the last batch.
inline std::vector<ScanRecord> scan_locally_pn(const FieldCtx& ctx,
                                               const ScanOptions& opts = {}) {
    detail::require_odd_n(ctx);
    const u64 half = ctx.half();
    detail::Checkpoint ckpt(opts.checkpoint_path);
    std::mutex mu;
    std::vector<ScanRecord> out;
    detail::for_each_candidate(half, opts.threads, [&](u64 r) {
        if (!detail::is_canonical(r, half)) return;
        if (ckpt.already_done(r)) return;
        static thread_local detail::ScreenScratch scratch;
        const detail::ScreenResult sr = detail::delta_screen(ctx, r, 1, scratch);
        if (!sr.aborted) {
            ScanRecord rec = detail::make_record(ctx, r, sr, std::nullopt);
            std::lock_guard<std::mutex> lk(mu);
            out.push_back(std::move(rec));
        }
        ckpt.complete(r);
    });
    std::sort(out.begin(), out.end(),
              [](const ScanRecord& a, const ScanRecord& b) { return a.canon_r < b.canon_r; });
    return out;
}

inline std::vector<ScanRecord> scan_locally_pn(int n, const ScanOptions& opts = {}) {
    return scan_locally_pn(build_field(3, n), opts);
}

}  // namespace chi3

#endif  // CHI3_SCAN_HPP
