#include "fourpow/enumerate.hpp"

#include "fourpow/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <tuple>

namespace fourpow {

namespace {

// Two joins share one algorithm: a packed int64 fast path when every
// intermediate value provably fits a machine word, and an mpz path for
// unbounded magnitudes. Outputs are identical; the packed path is the
// performance lever at large B.

struct PackedEntry {
    std::int64_t val;  // a_3 x_3^k + a_4 x_4^k
    std::int32_t x3, x4;
};

struct BigEntry {
    BigInt val;
    std::int32_t x3, x4;
};

// Largest possible |a_i x_i^k| + |N| over the box, exact.
BigInt worst_case_magnitude(const DiagonalForm& form, const BigInt& N, SearchRegion region) {
    BigInt big = 0;
    for (const auto& a : form.coeffs()) big = std::max(big, BigInt(abs(a)));
    BigInt Bk = pow_exact(BigInt(static_cast<long>(std::max<std::int64_t>(region.B, 1))),
                          static_cast<unsigned>(form.degree()));
    return 4 * big * Bk + abs(N) + 1;
}

bool fits_packed(const DiagonalForm& form, const BigInt& N, SearchRegion region) {
    static const BigInt limit = (BigInt(1) << 62);
    return worst_case_magnitude(form, N, region) < limit;
}

std::uint64_t bytes_per_entry(const DiagonalForm& form, const BigInt& N, SearchRegion region) {
    if (fits_packed(form, N, region)) return sizeof(PackedEntry);
    double value_bits =
        static_cast<double>(mpz_sizeinbase(worst_case_magnitude(form, N, region).get_mpz_t(), 2));
    std::uint64_t limb_bytes = 8 * static_cast<std::uint64_t>(value_bits / 64.0 + 1);
    return sizeof(BigEntry) + 16 + limb_bytes;
}

void check_budget(const DiagonalForm& form, const BigInt& N, SearchRegion region,
                  const EnumerateOptions& opts) {
    const std::int64_t L = region.hi() - region.lo() + 1;
    std::uint64_t per = bytes_per_entry(form, N, region);
    // L^2 * per in exact arithmetic so the guard itself cannot wrap
    BigInt need_exact = BigInt(static_cast<long>(L)) * L * static_cast<long>(per);
    std::uint64_t need = need_exact.fits_ulong_p() ? need_exact.get_ui()
                                                   : std::numeric_limits<std::uint64_t>::max();
    if (need > opts.mem_budget_bytes) {
        std::int64_t feasible_L = static_cast<std::int64_t>(
            std::sqrt(static_cast<double>(opts.mem_budget_bytes) / static_cast<double>(per)));
        std::int64_t feasible_B =
            region.mode == Region::Signed ? (feasible_L - 1) / 2 : feasible_L - 1;
        throw BudgetError("enumerate: meet-in-the-middle table for B=" + std::to_string(region.B) +
                              " exceeds the memory budget; largest feasible B is about " +
                              std::to_string(feasible_B),
                          feasible_B);
    }
}

// a_i x^k over the region for one coordinate.
std::vector<BigInt> term_table(const DiagonalForm& form, int i, SearchRegion region) {
    const std::int64_t lo = region.lo(), hi = region.hi();
    std::vector<BigInt> t(static_cast<size_t>(hi - lo + 1));
    for (std::int64_t x = lo; x <= hi; ++x)
        t[static_cast<size_t>(x - lo)] =
            form.coeff(i) * pow_exact(BigInt(static_cast<long>(x)), static_cast<unsigned>(form.degree()));
    return t;
}

std::vector<std::int64_t> packed_table(const std::vector<BigInt>& t) {
    std::vector<std::int64_t> out(t.size());
    for (size_t i = 0; i < t.size(); ++i) out[i] = t[i].get_si();
    return out;
}

// Visits every solution with x1 in [x1_lo, x1_hi], int64 arithmetic.
template <typename Visit>
void scan_packed(const BigInt& N, SearchRegion region, const std::vector<std::int64_t>& t1,
                 const std::vector<std::int64_t>& t2, const std::vector<PackedEntry>& half,
                 std::int64_t x1_lo, std::int64_t x1_hi, Visit&& visit) {
    const std::int64_t lo = region.lo(), hi = region.hi();
    const std::int64_t n = N.get_si();
    for (std::int64_t x1 = x1_lo; x1 <= x1_hi; ++x1) {
        std::int64_t n1 = n - t1[static_cast<size_t>(x1 - lo)];
        for (std::int64_t x2 = lo; x2 <= hi; ++x2) {
            std::int64_t target = n1 - t2[static_cast<size_t>(x2 - lo)];
            auto it = std::lower_bound(
                half.begin(), half.end(), target,
                [](const PackedEntry& e, std::int64_t v) { return e.val < v; });
            for (; it != half.end() && it->val == target; ++it)
                visit(x1, x2, static_cast<std::int64_t>(it->x3), static_cast<std::int64_t>(it->x4));
        }
    }
}

template <typename Visit>
void scan_big(const BigInt& N, SearchRegion region, const std::vector<BigInt>& t1,
              const std::vector<BigInt>& t2, const std::vector<BigEntry>& half,
              std::int64_t x1_lo, std::int64_t x1_hi, Visit&& visit) {
    const std::int64_t lo = region.lo(), hi = region.hi();
    for (std::int64_t x1 = x1_lo; x1 <= x1_hi; ++x1) {
        BigInt n1 = N - t1[static_cast<size_t>(x1 - lo)];
        for (std::int64_t x2 = lo; x2 <= hi; ++x2) {
            BigInt target = n1 - t2[static_cast<size_t>(x2 - lo)];
            auto it = std::lower_bound(half.begin(), half.end(), target,
                                       [](const BigEntry& e, const BigInt& v) { return e.val < v; });
            for (; it != half.end() && it->val == target; ++it)
                visit(x1, x2, static_cast<std::int64_t>(it->x3), static_cast<std::int64_t>(it->x4));
        }
    }
}


template <typename Worker>
void run_partitioned(std::int64_t lo, std::int64_t hi, int threads, Worker&& worker) {
    const std::int64_t span = hi - lo + 1;
    int T = std::max(1, threads);
    if (span <= 0) return;
    T = static_cast<int>(std::min<std::int64_t>(T, span));
    if (T == 1) {
        worker(0, lo, hi);
        return;
    }
    std::vector<std::thread> pool;
    std::int64_t chunk = (span + T - 1) / T;
    for (int t = 0; t < T; ++t) {
        std::int64_t a = lo + t * chunk;
        std::int64_t b = std::min(hi, a + chunk - 1);
        if (a > hi) break;
        pool.emplace_back([&, t, a, b] { worker(t, a, b); });
    }
    for (auto& th : pool) th.join();
}

void require_quaternary(const DiagonalForm& form, SearchRegion region) {
    if (form.arity() != 4)
        throw std::invalid_argument("enumerate: form must have 4 variables");
    if (region.B < 0) throw std::invalid_argument("enumerate: B must be >= 0");
}

// Builds the sorted (x3,x4) half and runs the partitioned (x1,x2) scan over
// the packed or mpz route; visit(thread, x1, x2, x3, x4).
template <typename Visit>
void join_solutions(const DiagonalForm& form, const BigInt& N, SearchRegion region, int threads,
                    Visit&& visit) {
    const std::int64_t lo = region.lo(), hi = region.hi();
    auto t1 = term_table(form, 0, region);
    auto t2 = term_table(form, 1, region);
    auto t3 = term_table(form, 2, region);
    auto t4 = term_table(form, 3, region);

    if (fits_packed(form, N, region)) {
        auto p1 = packed_table(t1), p2 = packed_table(t2);
        auto p3 = packed_table(t3), p4 = packed_table(t4);
        std::vector<PackedEntry> half;
        half.reserve(static_cast<size_t>((hi - lo + 1) * (hi - lo + 1)));
        for (std::int64_t x3 = lo; x3 <= hi; ++x3)
            for (std::int64_t x4 = lo; x4 <= hi; ++x4)
                half.push_back({p3[static_cast<size_t>(x3 - lo)] + p4[static_cast<size_t>(x4 - lo)],
                                static_cast<std::int32_t>(x3), static_cast<std::int32_t>(x4)});
        std::sort(half.begin(), half.end(), [](const PackedEntry& a, const PackedEntry& b) {
            return std::tie(a.val, a.x3, a.x4) < std::tie(b.val, b.x3, b.x4);
        });
        run_partitioned(lo, hi, threads, [&](int t, std::int64_t a, std::int64_t b) {
            scan_packed(N, region, p1, p2, half, a, b,
                        [&](std::int64_t x1, std::int64_t x2, std::int64_t x3, std::int64_t x4) {
                            visit(t, x1, x2, x3, x4);
                        });
        });
    } else {
        std::vector<BigEntry> half;
        half.reserve(static_cast<size_t>((hi - lo + 1) * (hi - lo + 1)));
        for (std::int64_t x3 = lo; x3 <= hi; ++x3)
            for (std::int64_t x4 = lo; x4 <= hi; ++x4)
                half.push_back({t3[static_cast<size_t>(x3 - lo)] + t4[static_cast<size_t>(x4 - lo)],
                                static_cast<std::int32_t>(x3), static_cast<std::int32_t>(x4)});
        std::sort(half.begin(), half.end(), [](const BigEntry& a, const BigEntry& b) {
            if (a.val != b.val) return a.val < b.val;
            return std::tie(a.x3, a.x4) < std::tie(b.x3, b.x4);
        });
        run_partitioned(lo, hi, threads, [&](int t, std::int64_t a, std::int64_t b) {
            scan_big(N, region, t1, t2, half, a, b,
                     [&](std::int64_t x1, std::int64_t x2, std::int64_t x3, std::int64_t x4) {
                         visit(t, x1, x2, x3, x4);
                     });
        });
    }
}

}  // namespace

std::vector<SolutionRecord> enumerate_solutions(const DiagonalForm& form, const BigInt& N,
                                                SearchRegion region, const EnumerateOptions& opts) {
    require_quaternary(form, region);
    check_budget(form, N, region, opts);

    int T = std::max(1, opts.threads);
    std::vector<std::vector<SolutionRecord>> parts(static_cast<size_t>(T));
    join_solutions(form, N, region, T,
                   [&](int t, std::int64_t x1, std::int64_t x2, std::int64_t x3, std::int64_t x4) {
                       SolutionRecord rec;
                       rec.x = {x1, x2, x3, x4};
                       rec.value = N;
                       rec.cls = classify(form, N, rec.x);
                       parts[static_cast<size_t>(t)].push_back(std::move(rec));
                   });

    std::vector<SolutionRecord> all;
    for (auto& p : parts)
        for (auto& r : p) all.push_back(std::move(r));
    std::sort(all.begin(), all.end(),
              [](const SolutionRecord& a, const SolutionRecord& b) { return a.x < b.x; });
    return all;
}

CountSummary count_representations(const DiagonalForm& form, const BigInt& N,
                                   SearchRegion region, const EnumerateOptions& opts) {
    require_quaternary(form, region);
    check_budget(form, N, region, opts);

    int T = std::max(1, opts.threads);
    std::vector<std::uint64_t> tot(static_cast<size_t>(T), 0), spec(static_cast<size_t>(T), 0);
    join_solutions(form, N, region, T,
                   [&](int t, std::int64_t x1, std::int64_t x2, std::int64_t x3, std::int64_t x4) {
                       std::array<std::int64_t, 4> xs{x1, x2, x3, x4};
                       ++tot[static_cast<size_t>(t)];
                       if (classify(form, N, xs).special()) ++spec[static_cast<size_t>(t)];
                   });

    CountSummary cs;
    for (int t = 0; t < T; ++t) {
        cs.total += tot[static_cast<size_t>(t)];
        cs.special += spec[static_cast<size_t>(t)];
    }
    cs.nonspecial = cs.total - cs.special;
    cs.k = form.degree();
    cs.coeffs = form.coeffs();
    cs.N = N;
    cs.region = region;
    return cs;
}

std::uint64_t count_Rk(const BigInt& N, int k, const EnumerateOptions& opts) {
    if (k < 3) throw std::invalid_argument("count_Rk: k must be >= 3");
    if (N < 1) throw std::invalid_argument("count_Rk: N must be >= 1");
    DiagonalForm form(k, {1, 1, 1, 1});
    std::int64_t B = kth_root_floor(N, k).get_si();
    return count_representations(form, N, {B, Region::NonNegative}, opts).total;
}

namespace {

// Nonnegative solutions of x1^k + x2^k + x3^k = S, exact. Small targets run
// on an int64 power table; the mpz route covers the rest.
std::uint64_t ternary_nonneg_count(int k, const BigInt& S) {
    if (S < 0) return 0;
    if (S == 0) return 1;
    std::uint64_t count = 0;
    const unsigned uk = static_cast<unsigned>(k);
    const std::int64_t b1 = kth_root_floor(S, k).get_si();

    if (S < (BigInt(1) << 62)) {
        const std::int64_t s = S.get_si();
        std::vector<std::int64_t> pw(static_cast<size_t>(b1 + 1));
        for (std::int64_t x = 0; x <= b1; ++x) {
            std::int64_t p = 1;
            for (unsigned i = 0; i < uk; ++i) p *= x;
            pw[static_cast<size_t>(x)] = p;
        }
        for (std::int64_t x1 = 0; x1 <= b1; ++x1) {
            std::int64_t v1 = s - pw[static_cast<size_t>(x1)];
            if (v1 < 0) break;
            for (std::int64_t x2 = 0; x2 <= b1; ++x2) {
                std::int64_t v2 = v1 - pw[static_cast<size_t>(x2)];
                if (v2 < 0) break;
                if (std::binary_search(pw.begin(), pw.end(), v2)) ++count;
            }
        }
        return count;
    }

    for (std::int64_t x1 = 0; x1 <= b1; ++x1) {
        BigInt v1 = S - pow_exact(BigInt(static_cast<long>(x1)), uk);
        if (v1 < 0) break;
        std::int64_t b2 = kth_root_floor(v1, k).get_si();
        for (std::int64_t x2 = 0; x2 <= b2; ++x2) {
            BigInt v2 = v1 - pow_exact(BigInt(static_cast<long>(x2)), uk);
            if (v2 < 0) break;
            if (integer_kth_root(v2, k)) ++count;
        }
    }
    return count;
}

}  // namespace

std::uint64_t count_Rkl(const BigInt& N, int k, int l, const EnumerateOptions&) {
    if (k < 3 || l < 3) throw std::invalid_argument("count_Rkl: k, l must be >= 3");
    if (N < 1) throw std::invalid_argument("count_Rkl: N must be >= 1");
    std::uint64_t total = 0;
    for (BigInt a = 0;; ++a) {
        BigInt al = pow_exact(a, static_cast<unsigned>(l));
        if (al > N) break;
        total += ternary_nonneg_count(k, N - al);
    }
    return total;
}

TernarySplit count_ternary_split(const DiagonalForm& form, const BigInt& M, std::int64_t B) {
    if (form.arity() != 3)
        throw std::invalid_argument("count_ternary_split: form must have 3 variables");
    if (B < 0) throw std::invalid_argument("count_ternary_split: B must be >= 0");

    TernarySplit split;
    if (B == 0 && M != 0) return split;

    const unsigned uk = static_cast<unsigned>(form.degree());
    const std::int64_t L = 2 * B + 1;
    std::vector<BigInt> pw(static_cast<size_t>(L));
    for (std::int64_t x = -B; x <= B; ++x)
        pw[static_cast<size_t>(x + B)] = pow_exact(BigInt(static_cast<long>(x)), uk);

    std::vector<std::pair<BigInt, std::int64_t>> tab;
    tab.reserve(static_cast<size_t>(L));
    for (std::int64_t x3 = -B; x3 <= B; ++x3)
        tab.emplace_back(form.coeff(2) * pw[static_cast<size_t>(x3 + B)], x3);
    std::sort(tab.begin(), tab.end(),
              [](const auto& p, const auto& q) { return p.first < q.first; });

    for (std::int64_t x1 = -B; x1 <= B; ++x1) {
        BigInt t1 = form.coeff(0) * pw[static_cast<size_t>(x1 + B)];
        bool e1 = (t1 == M);
        for (std::int64_t x2 = -B; x2 <= B; ++x2) {
            BigInt t2 = form.coeff(1) * pw[static_cast<size_t>(x2 + B)];
            BigInt target = M - t1 - t2;
            auto lo = std::lower_bound(tab.begin(), tab.end(), target,
                                       [](const auto& p, const BigInt& v) { return p.first < v; });
            for (auto it = lo; it != tab.end() && it->first == target; ++it) {
                ++split.total;
                if (e1 || t2 == M || it->first == M) ++split.excluded;
            }
        }
    }
    return split;
}

std::uint64_t count_r0(const DiagonalForm& form, const BigInt& M, std::int64_t B) {
    if (M == 0) throw std::invalid_argument("count_r0: M must be nonzero");
    return count_ternary_split(form, M, B).r0();
}

}  // namespace fourpow
