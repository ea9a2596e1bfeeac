#include "fourpow/special.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace fourpow {

const std::array<LinePartition, 10>& standard_line_partitions() {
    static const std::array<LinePartition, 10> parts = [] {
        std::array<LinePartition, 10> p{};
        int idx = 0;
        for (int i = 0; i < 5; ++i)
            for (int j = i + 1; j < 5; ++j) {
                LinePartition lp{};
                lp.pair = {i, j};
                int t = 0;
                for (int m = 0; m < 5; ++m)
                    if (m != i && m != j) lp.triple[static_cast<size_t>(t++)] = m;
                p[static_cast<size_t>(idx++)] = lp;
            }
        return p;
    }();
    return parts;
}

namespace {

// Terms of the homogenized form at (1, x): t_0 = -N, t_i = a_i x_i^k.
std::array<BigInt, 5> homogenized_terms(const DiagonalForm& form, const BigInt& N,
                                        std::span<const std::int64_t> x) {
    std::array<BigInt, 5> t;
    t[0] = -N;
    for (int i = 0; i < 4; ++i)
        t[static_cast<size_t>(i + 1)] =
            form.coeff(i) * pow_exact(BigInt(static_cast<long>(x[static_cast<size_t>(i)])),
                                      static_cast<unsigned>(form.degree()));
    return t;
}

}  // namespace

SolutionClass classify(const DiagonalForm& form, const BigInt& N,
                       std::span<const std::int64_t> x) {
    if (form.arity() != 4)
        throw std::invalid_argument("classify: form must have 4 variables");
    if (evaluate(form, x) != N)
        throw std::invalid_argument("classify: x is not a solution of form = N");

    std::array<BigInt, 4> term;
    for (int i = 0; i < 4; ++i)
        term[static_cast<size_t>(i)] =
            form.coeff(i) * pow_exact(BigInt(static_cast<long>(x[static_cast<size_t>(i)])),
                                      static_cast<unsigned>(form.degree()));

    for (int i = 0; i < 4; ++i)
        if (term[static_cast<size_t>(i)] == N)
            return SolutionClass{SolutionClass::SpecialSingle, i + 1, 0};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (term[static_cast<size_t>(i)] + term[static_cast<size_t>(j)] == N)
                return SolutionClass{SolutionClass::SpecialPair, i + 1, j + 1};
    return SolutionClass{};
}

bool on_standard_line(const DiagonalForm& form, const BigInt& N,
                      std::span<const std::int64_t> x) {
    if (form.arity() != 4)
        throw std::invalid_argument("on_standard_line: form must have 4 variables");
    if (x.size() != 4)
        throw std::invalid_argument("on_standard_line: need a 4-tuple");
    auto t = homogenized_terms(form, N, x);
    for (const auto& lp : standard_line_partitions()) {
        BigInt ps = t[static_cast<size_t>(lp.pair[0])] + t[static_cast<size_t>(lp.pair[1])];
        if (ps != 0) continue;
        BigInt ts = t[static_cast<size_t>(lp.triple[0])] + t[static_cast<size_t>(lp.triple[1])] +
                    t[static_cast<size_t>(lp.triple[2])];
        if (ts == 0) return true;
    }
    return false;
}

std::pair<BigRat, BigRat> degree_thresholds(int k) {
    if (k < 3) throw std::invalid_argument("degree_thresholds: k must be >= 3");
    BigRat t3(k + 1, 3), t4(k + 3, 6);
    t3.canonicalize();
    t4.canonicalize();
    return {t3, t4};
}

ThueResult solve_thue(const BigInt& a, const BigInt& b, int k, const BigInt& h,
                      std::int64_t search_bound) {
    if (a == 0 || b == 0 || h == 0)
        throw std::invalid_argument("solve_thue: a, b, h must be nonzero");
    if (k < 3) throw std::invalid_argument("solve_thue: k must be >= 3");
    if (search_bound < 0) throw std::invalid_argument("solve_thue: bound must be >= 0");

    ThueResult res;
    res.search_bound = search_bound;
    const unsigned uk = static_cast<unsigned>(k);
    for (std::int64_t x = -search_bound; x <= search_bound; ++x) {
        BigInt rem = h - a * pow_exact(BigInt(static_cast<long>(x)), uk);
        if (!mpz_divisible_p(rem.get_mpz_t(), b.get_mpz_t())) continue;
        BigInt q = rem / b;
        auto r = integer_kth_root(q, k);
        if (!r) continue;
        auto push = [&](const BigInt& y) {
            if (abs(y) <= search_bound)
                res.solutions.emplace_back(x, y.get_si());
        };
        push(*r);
        if (k % 2 == 0 && *r != 0) push(BigInt(-*r));
    }
    std::sort(res.solutions.begin(), res.solutions.end());
    return res;
}

int omega(const BigInt& h) {
    if (h == 0) throw std::invalid_argument("omega: h must be nonzero");
    BigInt n = abs(h);
    int count = 0;
    for (unsigned long d = 2; ; d = (d == 2 ? 3 : d + 2)) {
        BigInt dd(static_cast<unsigned long>(d));
        if (dd * dd > n) break;
        if (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
            ++count;
            while (mpz_divisible_ui_p(n.get_mpz_t(), d))
                mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), d);
        }
    }
    if (n > 1) ++count;
    return count;
}

EvertseReport evertse_check(const BigInt& a, const BigInt& b, int k, long h_lo,
                            long h_hi, std::int64_t search_bound, double C) {
    if (C <= 1) throw std::invalid_argument("evertse_check: C must be > 1");
    EvertseReport rep;
    for (long h = h_lo; h <= h_hi; ++h) {
        if (h == 0) continue;
        BigInt hh(h);
        auto sols = solve_thue(a, b, k, hh, search_bound);
        double allowed = std::pow(C, 1 + omega(hh));
        std::uint64_t count = sols.solutions.size();
        double ratio = static_cast<double>(count) / allowed;
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        if (static_cast<double>(count) > allowed)
            rep.violations.push_back({h, count, allowed});
        ++rep.checked;
    }
    return rep;
}

namespace {

std::int64_t gcd3(std::int64_t x, std::int64_t y, std::int64_t z) {
    return std::gcd(std::gcd(std::llabs(x), std::llabs(y)), std::llabs(z));
}

}  // namespace

std::uint64_t count_zero_form(const DiagonalForm& form, std::int64_t B,
                              bool primitive_only) {
    if (form.arity() != 3)
        throw std::invalid_argument("count_zero_form: form must have 3 variables");
    if (B < 0) throw std::invalid_argument("count_zero_form: B must be >= 0");
    if (B == 0) return 0;

    const unsigned uk = static_cast<unsigned>(form.degree());
    const std::int64_t L = 2 * B + 1;

    // Sorted table of a_3 x_3^k for the root-free join.
    std::vector<std::pair<BigInt, std::int64_t>> tab;
    tab.reserve(static_cast<size_t>(L));
    for (std::int64_t x3 = -B; x3 <= B; ++x3)
        tab.emplace_back(form.coeff(2) * pow_exact(BigInt(static_cast<long>(x3)), uk), x3);
    std::sort(tab.begin(), tab.end(),
              [](const auto& p, const auto& q) { return p.first < q.first; });

    std::vector<BigInt> pw(static_cast<size_t>(L));
    for (std::int64_t x = -B; x <= B; ++x)
        pw[static_cast<size_t>(x + B)] = pow_exact(BigInt(static_cast<long>(x)), uk);

    std::uint64_t count = 0;
    for (std::int64_t x1 = -B; x1 <= B; ++x1) {
        BigInt t1 = form.coeff(0) * pw[static_cast<size_t>(x1 + B)];
        for (std::int64_t x2 = -B; x2 <= B; ++x2) {
            BigInt target = -t1 - form.coeff(1) * pw[static_cast<size_t>(x2 + B)];
            auto lo = std::lower_bound(tab.begin(), tab.end(), target,
                                       [](const auto& p, const BigInt& v) { return p.first < v; });
            for (auto it = lo; it != tab.end() && it->first == target; ++it) {
                std::int64_t x3 = it->second;
                if (x1 == 0 && x2 == 0 && x3 == 0) continue;
                if (primitive_only && gcd3(x1, x2, x3) != 1) continue;
                ++count;
            }
        }
    }
    return count;
}

bool moebius_identity_check(const DiagonalForm& form, std::int64_t B) {
    if (B < 1) throw std::invalid_argument("moebius_identity_check: B must be >= 1");
    std::uint64_t total = count_zero_form(form, B, false);
    std::map<std::int64_t, std::uint64_t> prim_cache;
    std::uint64_t sum = 0;
    for (std::int64_t d = 1; d <= B; ++d) {
        std::int64_t r = B / d;
        auto it = prim_cache.find(r);
        if (it == prim_cache.end())
            it = prim_cache.emplace(r, count_zero_form(form, r, true)).first;
        sum += it->second;
    }
    return total == sum;
}

}  // namespace fourpow
