#include "fourpow/detmethod.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace fourpow {

namespace {

BigInt binom(unsigned long n, unsigned long k) {
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

BigInt factorial(unsigned long n) {
    BigInt r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

// floor of a rational
BigInt rat_floor(const BigRat& q) {
    BigInt r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

BigRat rat_pow(const BigRat& q, unsigned e) {
    BigRat r = 1;
    for (unsigned i = 0; i < e; ++i) r *= q;
    return r;
}

long double ln_big(const BigInt& v) {
    signed long e2;
    double d = mpz_get_d_2exp(&e2, v.get_mpz_t());
    return logl(d) + static_cast<long double>(e2) * 0.6931471805599453094L;
}

}  // namespace

std::vector<MonomialExp> monomial_order(double X1, double X2, double X3, int s) {
    if (!(X1 > 0 && X1 <= 1 && X2 > 0 && X2 <= 1 && X3 > 0 && X3 <= 1))
        throw std::invalid_argument("monomial_order: sizes must be in (0,1]");
    if (s < 1) throw std::invalid_argument("monomial_order: s must be >= 1");

    const long double lx[3] = {X1, X2, X3};
    const long double maxX = std::max({lx[0], lx[1], lx[2]});

    struct Item {
        int n1, n2, n3, deg;
        long double size;
    };
    std::vector<Item> pool;
    // pw[i][e] = lx[i]^e, extended degree by degree
    std::array<std::vector<long double>, 3> pw;
    for (auto& p : pw) p.push_back(1.0L);

    auto item_less = [](const Item& a, const Item& b) {
        if (a.size != b.size) return a.size > b.size;  // larger size first
        if (a.deg != b.deg) return a.deg < b.deg;      // then lower degree
        if (a.n1 != b.n1) return a.n1 > b.n1;          // then lex, n1 heaviest
        if (a.n2 != b.n2) return a.n2 > b.n2;
        return a.n3 > b.n3;
    };

    for (int d = 0; d <= 100000; ++d) {
        for (int i = 0; i < 3; ++i)
            pw[static_cast<size_t>(i)].push_back(pw[static_cast<size_t>(i)].back() *
                                                 lx[static_cast<size_t>(i)]);
        for (int n1 = d; n1 >= 0; --n1)
            for (int n2 = d - n1; n2 >= 0; --n2) {
                int n3 = d - n1 - n2;
                pool.push_back({n1, n2, n3, d,
                                pw[0][static_cast<size_t>(n1)] * pw[1][static_cast<size_t>(n2)] *
                                    pw[2][static_cast<size_t>(n3)]});
            }
        if (pool.size() >= static_cast<size_t>(s)) {
            std::sort(pool.begin(), pool.end(), item_less);
            long double theta = pool[static_cast<size_t>(s - 1)].size;
            // Anything of higher degree has size <= maxX^{d+1}; equal sizes
            // lose the tie by degree.
            if (powl(maxX, d + 1) <= theta) {
                std::vector<MonomialExp> out;
                out.reserve(static_cast<size_t>(s));
                for (int i = 0; i < s; ++i) {
                    const Item& it = pool[static_cast<size_t>(i)];
                    out.push_back({it.n1, it.n2, it.n3, static_cast<double>(it.size)});
                }
                return out;
            }
        }
    }
    throw std::logic_error("monomial_order: degree cap exceeded");
}

namespace {

// # lattice points with n1 + n2 + alpha n3 <= t (exact)
BigInt tetra_count_leq(const BigRat& t, const BigRat& alpha) {
    BigInt total = 0;
    if (t < 0) return total;
    for (BigInt n3 = 0; BigRat(alpha * BigRat(n3)) <= t; ++n3) {
        BigRat rem = t - alpha * BigRat(n3);
        BigInt m = rat_floor(rem);
        total += (m + 1) * (m + 2) / 2;
    }
    return total;
}

// sum of (n1 + n2 + alpha n3) over the same set (exact; rational)
BigRat tetra_fsum_leq(const BigRat& t, const BigRat& alpha) {
    BigRat total = 0;
    if (t < 0) return total;
    for (BigInt n3 = 0; BigRat(alpha * BigRat(n3)) <= t; ++n3) {
        BigRat rem = t - alpha * BigRat(n3);
        BigInt m = rat_floor(rem);
        // rows n1 + n2 <= m contribute sum(n1+n2) = m(m+1)(m+2)/3
        // plus alpha*n3 per point, (m+1)(m+2)/2 points
        total += BigRat(m * (m + 1) * (m + 2)) / 3;
        total += alpha * BigRat(n3) * BigRat((m + 1) * (m + 2)) / 2;
    }
    return total;
}

}  // namespace

TetraStats tetra_stats(const BigRat& nu, const BigRat& alpha) {
    if (nu < 1) throw std::invalid_argument("tetra_stats: nu must be >= 1");
    if (alpha <= 0) throw std::invalid_argument("tetra_stats: alpha must be > 0");
    TetraStats st;
    st.nu = nu;
    st.alpha = alpha;
    st.count = tetra_count_leq(nu - 1, alpha);
    st.count_at_nu = tetra_count_leq(nu, alpha);
    st.fsum = tetra_fsum_leq(nu - 1, alpha);
    st.lower = rat_pow(nu - 1, 3) / (6 * alpha);
    st.upper = rat_pow(nu + 1 + alpha, 3) / (6 * alpha);
    st.lower.canonicalize();
    st.upper.canonicalize();
    return st;
}

std::uint64_t tetra_count_real(long double nu, long double alpha) {
    if (nu < 0) return 0;
    std::uint64_t total = 0;
    for (long n3 = 0; alpha * static_cast<long double>(n3) <= nu; ++n3) {
        long double rem = nu - alpha * static_cast<long double>(n3);
        std::uint64_t m = static_cast<std::uint64_t>(floorl(rem));
        total += (m + 1) * (m + 2) / 2;
    }
    return total;
}

long double tetra_fsum_real(long double nu, long double alpha) {
    long double t = nu - 1;
    if (t < 0) return 0;
    long double total = 0;
    for (long n3 = 0; alpha * static_cast<long double>(n3) <= t; ++n3) {
        long double rem = t - alpha * static_cast<long double>(n3);
        long double m = floorl(rem);
        total += m * (m + 1) * (m + 2) / 3;
        total += alpha * static_cast<long double>(n3) * (m + 1) * (m + 2) / 2;
    }
    return total;
}

int nu_from_s(std::uint64_t s, const BigRat& alpha) {
    if (s < 1) throw std::invalid_argument("nu_from_s: s must be >= 1");
    if (alpha <= 0) throw std::invalid_argument("nu_from_s: alpha must be > 0");
    for (int nu = 0;; ++nu) {
        BigInt c = tetra_count_leq(BigRat(nu), alpha);
        if (c >= BigInt(static_cast<unsigned long>(s))) return nu;
    }
}

int nu_from_s(std::uint64_t s, long double alpha) {
    if (s < 1) throw std::invalid_argument("nu_from_s: s must be >= 1");
    if (!(alpha > 0)) throw std::invalid_argument("nu_from_s: alpha must be > 0");
    for (int nu = 0;; ++nu)
        if (tetra_count_real(static_cast<long double>(nu), alpha) >= s) return nu;
}

std::uint64_t s_from_delta(int delta) {
    if (delta < 1) throw std::invalid_argument("s_from_delta: delta must be >= 1");
    std::uint64_t d = static_cast<std::uint64_t>(delta);
    return (d + 1) * (d + 2) * (d + 3) / 6;
}

double exponent_main(int k) {
    if (k < 3) throw std::invalid_argument("exponent_main: k must be >= 3");
    double dk = static_cast<double>(k);
    double head = 16.0 / (3.0 * std::sqrt(3.0 * dk));
    double tail = std::max(2.0 / std::sqrt(dk), 1.0 / std::sqrt(dk) + 6.0 / (dk + 3.0));
    return head + tail;
}

namespace {

// Shared tail of both selection variants: M from the alpha relation, then
// the delta ascent until beta < -1. t_eff = k - logN/logB.
void select_tail(ParameterSelection& sel, long double t_eff) {
    const long double alpha = sel.alpha;
    const long double lnB2 = logl(static_cast<long double>(sel.B) / 2.0L);
    const long double lnN = ln_big(sel.N);
    const long double lnM0 = logl(static_cast<long double>(sel.M0));

    long double lc = 1.0L / 6.0L - t_eff / (8.0L * powl(alpha, 2.0L / 3.0L));
    sel.beta_leading_coeff = lc;
    if (lc >= 0)
        throw ParameterError(
            "select_parameters: leading coefficient 1/6 - (k - logN/logB)/(8 alpha^{2/3}) "
            "is nonnegative (B too small relative to N); beta cannot reach -1");

    long double lnM = (static_cast<long double>(sel.k) * lnB2 - lnN) / alpha - lnM0;
    sel.M_real = expl(lnM);
    sel.M_rounded = BigInt(std::floor(static_cast<double>(sel.M_real)));
    if (sel.M_rounded < 0) sel.M_rounded = 0;

    int nu = 0;
    std::uint64_t count_at = tetra_count_real(0.0L, alpha);
    long double beta_prev = 0;
    for (int delta = 1; delta <= 2000000; ++delta) {
        std::uint64_t s = s_from_delta(delta);
        while (count_at < s) {
            ++nu;
            count_at = tetra_count_real(static_cast<long double>(nu), alpha);
        }
        long double fsum = tetra_fsum_real(static_cast<long double>(nu), alpha);
        long double beta = static_cast<long double>(s) * static_cast<long double>(delta) -
                           (fsum / alpha) * t_eff;
        if (beta < -1.0L) {
            sel.delta = delta;
            sel.s = s;
            sel.nu = nu;
            sel.beta = beta;
            sel.beta_prev = beta_prev;
            return;
        }
        beta_prev = beta;
    }
    throw ParameterError("select_parameters: no delta below the cap reached beta < -1");
}

void check_common(int k, double eps, const BigInt& N, std::int64_t B, std::int64_t M0) {
    if (k < 3) throw ParameterError("select_parameters: k must be >= 3");
    if (!(eps > 0)) throw ParameterError("select_parameters: eps must be > 0");
    if (N < 1) throw ParameterError("select_parameters: N must be >= 1");
    if (B < 2) throw ParameterError("select_parameters: B must be >= 2");
    if (M0 < 1) throw ParameterError("select_parameters: M0 must be >= 1");
}

}  // namespace

ParameterSelection select_parameters(int k, double eps, const BigInt& N, std::int64_t B,
                                     std::int64_t M0) {
    check_common(k, eps, N, B, M0);

    ParameterSelection sel;
    sel.k = k;
    sel.eps = eps;
    sel.N = N;
    sel.B = B;
    sel.M0 = M0;

    double c = 16.0 / (3.0 * std::sqrt(3.0 * k));
    sel.lambda = eps / (c + eps);  // makes 2k/alpha = c + eps exactly
    sel.alpha = (1.0 - sel.lambda) * std::pow(3.0 * k / 4.0, 1.5);
    if (sel.alpha <= 1.0)
        throw ParameterError(
            "select_parameters: (1-lambda)*(3k/4)^{3/2} <= 1; k too small for this eps");
    sel.predicted_exponent = c + eps;
    sel.t = static_cast<double>(k);

    long double t_eff = static_cast<long double>(k) -
                        ln_big(N) / logl(static_cast<long double>(B));
    select_tail(sel, t_eff);
    return sel;
}

ParameterSelection select_parameters_bigN(int k, double tau, double eps, const BigInt& N,
                                          std::int64_t B, std::int64_t M0) {
    check_common(k, eps, N, B, M0);
    if (!(tau > 4.0 / 3.0 && tau < static_cast<double>(k)))
        throw ParameterError("select_parameters_bigN: tau must satisfy 4/3 < tau < k");

    long double gamma = ln_big(N) / logl(static_cast<long double>(B));
    if (gamma > static_cast<long double>(k) - static_cast<long double>(tau) + 1e-12L)
        throw ParameterError("select_parameters_bigN: N exceeds B^{k-tau}");

    ParameterSelection sel;
    sel.k = k;
    sel.eps = eps;
    sel.N = N;
    sel.B = B;
    sel.M0 = M0;
    sel.tau = tau;

    double t = static_cast<double>(static_cast<long double>(k) - gamma);
    t = std::min(std::max(t, tau), static_cast<double>(k));
    sel.t = t;

    double ct = 16.0 / (3.0 * std::sqrt(3.0 * t));
    sel.lambda = eps / (ct + eps);
    sel.alpha = (1.0 - sel.lambda) * std::pow(3.0 * t / 4.0, 1.5);
    if (sel.alpha <= 1.0)
        throw ParameterError(
            "select_parameters_bigN: (1-lambda)*(3t/4)^{3/2} <= 1; t too small for this eps");

    double ck = 16.0 / (3.0 * std::sqrt(3.0 * k));
    sel.predicted_exponent = ck + eps;
    sel.exponent_pair = {ck + eps,
                         24.0 / std::pow(3.0 * tau, 1.5) - 16.0 / std::pow(3.0 * k, 1.5)};

    select_tail(sel, static_cast<long double>(t));
    return sel;
}

std::vector<std::array<int, 4>> monomials_deg4(int delta) {
    std::vector<std::array<int, 4>> mons;
    for (int e1 = delta; e1 >= 0; --e1)
        for (int e2 = delta - e1; e2 >= 0; --e2)
            for (int e3 = delta - e1 - e2; e3 >= 0; --e3)
                mons.push_back({e1, e2, e3, delta - e1 - e2 - e3});
    return mons;
}

BigInt AuxiliaryForm::evaluate(std::span<const std::int64_t> x) const {
    if (x.size() != 4) throw std::invalid_argument("AuxiliaryForm::evaluate: need 4 coordinates");
    BigInt sum = 0;
    for (size_t t = 0; t < exponents.size(); ++t) {
        if (coeffs[t] == 0) continue;
        BigInt term = coeffs[t];
        for (int v = 0; v < 4; ++v)
            term *= pow_exact(BigInt(static_cast<long>(x[static_cast<size_t>(v)])),
                              static_cast<unsigned>(exponents[t][static_cast<size_t>(v)]));
        sum += term;
    }
    return sum;
}

AuxiliaryForm auxiliary_form(const std::vector<std::array<std::int64_t, 4>>& points, int delta) {
    if (points.empty()) throw std::invalid_argument("auxiliary_form: need at least one point");
    if (delta < 1) throw std::invalid_argument("auxiliary_form: delta must be >= 1");

    auto mons = monomials_deg4(delta);
    const size_t s = mons.size();
    const size_t J = points.size();

    // Rows are points, columns are monomials; we need the right kernel.
    std::vector<std::vector<BigInt>> A(J, std::vector<BigInt>(s));
    for (size_t j = 0; j < J; ++j)
        for (size_t i = 0; i < s; ++i) {
            BigInt v = 1;
            for (int c = 0; c < 4; ++c)
                v *= pow_exact(BigInt(static_cast<long>(points[j][static_cast<size_t>(c)])),
                               static_cast<unsigned>(mons[i][static_cast<size_t>(c)]));
            A[j][i] = v;
        }

    // Fraction-free row echelon; rows stay integral, content-reduced.
    std::vector<size_t> pivcols;
    size_t r = 0;
    std::optional<size_t> free_col;
    for (size_t col = 0; col < s; ++col) {
        size_t p = r;
        while (p < J && A[p][col] == 0) ++p;
        if (p == J) {
            free_col = col;
            break;
        }
        std::swap(A[r], A[p]);
        for (size_t q = r + 1; q < J; ++q) {
            if (A[q][col] == 0) continue;
            BigInt g = gcd(A[r][col], A[q][col]);
            BigInt fq = A[r][col] / g, fr = A[q][col] / g;
            BigInt content = 0;
            for (size_t c2 = col; c2 < s; ++c2) {
                A[q][c2] = fq * A[q][c2] - fr * A[r][c2];
                content = gcd(content, A[q][c2]);
            }
            if (content > 1)
                for (size_t c2 = col; c2 < s; ++c2) A[q][c2] /= content;
        }
        pivcols.push_back(col);
        ++r;
    }
    if (!free_col)
        throw RankError("auxiliary_form: monomial-evaluation matrix has full rank " +
                            std::to_string(s) + "; no degree-" + std::to_string(delta) +
                            " form vanishes on all points",
                        static_cast<int>(s));

    // Kernel vector: free coordinate 1, back-substitute the pivot rows.
    std::vector<BigRat> x(s, BigRat(0));
    x[*free_col] = 1;
    for (size_t ii = pivcols.size(); ii-- > 0;) {
        size_t pc = pivcols[ii];
        BigRat sum = 0;
        for (size_t c2 = pc + 1; c2 < s; ++c2)
            if (x[c2] != 0 && A[ii][c2] != 0) sum += BigRat(A[ii][c2]) * x[c2];
        x[pc] = -sum / BigRat(A[ii][pc]);
        x[pc].canonicalize();
    }

    // Clear denominators, reduce to gcd 1, leading coefficient positive.
    BigInt lcm = 1;
    for (const auto& q : x)
        if (q != 0) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den_mpz_t());
    std::vector<BigInt> c(s);
    for (size_t i = 0; i < s; ++i) {
        BigRat scaled = x[i] * BigRat(lcm);
        scaled.canonicalize();
        c[i] = scaled.get_num();
    }
    BigInt g = 0;
    for (const auto& v : c) g = gcd(g, v);
    if (g > 1)
        for (auto& v : c) v /= g;
    for (const auto& v : c) {
        if (v == 0) continue;
        if (v < 0)
            for (auto& w : c) w = -w;
        break;
    }

    AuxiliaryForm form;
    form.delta = delta;
    form.exponents = std::move(mons);
    form.coeffs = std::move(c);
    return form;
}

BigRat RatPoly::eval(std::span<const BigRat> x) const {
    BigRat sum = 0;
    for (const auto& [exps, coeff] : terms) {
        if (exps.size() != x.size())
            throw std::invalid_argument("RatPoly::eval: dimension mismatch");
        BigRat term = coeff;
        for (size_t i = 0; i < exps.size(); ++i)
            term *= rat_pow(x[i], static_cast<unsigned>(exps[i]));
        sum += term;
    }
    sum.canonicalize();
    return sum;
}

namespace {

// term list with repeated exponent vectors collapsed
std::map<std::vector<int>, BigRat> collect_terms(const RatPoly& f) {
    std::map<std::vector<int>, BigRat> m;
    for (const auto& [exps, coeff] : f.terms) {
        auto& c = m[exps];
        c += coeff;
        c.canonicalize();
    }
    return m;
}

}  // namespace

int RatPoly::total_degree() const {
    int d = 0;
    for (const auto& [exps, coeff] : collect_terms(*this)) {
        if (coeff == 0) continue;
        int t = 0;
        for (int e : exps) t += e;
        d = std::max(d, t);
    }
    return d;
}

BigRat RatPoly::height() const {
    BigRat h = 0;
    for (const auto& [exps, coeff] : collect_terms(*this)) h = std::max(h, BigRat(abs(coeff)));
    return h;
}

namespace {

BigRat gauss_det(std::vector<std::vector<BigRat>> m) {
    const size_t H = m.size();
    BigRat det = 1;
    for (size_t col = 0; col < H; ++col) {
        size_t p = col;
        while (p < H && m[p][col] == 0) ++p;
        if (p == H) return BigRat(0);
        if (p != col) {
            std::swap(m[p], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (size_t q = col + 1; q < H; ++q) {
            if (m[q][col] == 0) continue;
            BigRat f = m[q][col] / m[col][col];
            for (size_t c2 = col; c2 < H; ++c2) {
                m[q][c2] -= f * m[col][c2];
                m[q][c2].canonicalize();
            }
        }
    }
    det.canonicalize();
    return det;
}

// The H largest monomial sizes prod X_i^{e_i} over all monomials in n
// variables, exact. With some X_i = 1 there are infinitely many size-1
// monomials, so the answer is all ones.
std::vector<BigRat> top_monomial_sizes(const std::vector<BigRat>& X, size_t H) {
    for (const auto& xi : X)
        if (xi == 1) return std::vector<BigRat>(H, BigRat(1));

    BigRat maxX = X[0];
    for (const auto& xi : X) maxX = std::max(maxX, xi);

    std::vector<BigRat> best;
    const size_t n = X.size();
    std::vector<int> e(n, 0);

    auto visit_degree = [&](int d, auto&& self, size_t pos, int rem) -> void {
        if (pos == n - 1) {
            e[pos] = rem;
            BigRat sz = 1;
            for (size_t i = 0; i < n; ++i) sz *= rat_pow(X[i], static_cast<unsigned>(e[i]));
            sz.canonicalize();
            best.push_back(sz);
            return;
        }
        for (int v = rem; v >= 0; --v) {
            e[pos] = v;
            self(d, self, pos + 1, rem - v);
        }
    };

    BigRat cap = 1;  // maxX^{d+1}
    for (int d = 0;; ++d) {
        visit_degree(d, visit_degree, 0, d);
        std::sort(best.begin(), best.end(), std::greater<BigRat>());
        if (best.size() > 4 * H + 8) best.resize(4 * H + 8);
        cap *= maxX;
        if (best.size() >= H && cap <= best[H - 1]) {
            best.resize(H);
            return best;
        }
    }
}

}  // namespace

VdmCheck vandermonde_bound_check(const std::vector<RatPoly>& polys,
                                 const std::vector<std::vector<BigRat>>& points,
                                 const std::vector<BigRat>& X) {
    const size_t H = polys.size();
    const size_t n = X.size();
    if (H == 0) throw std::invalid_argument("vandermonde_bound_check: need H >= 1 polynomials");
    if (points.size() != H)
        throw std::invalid_argument("vandermonde_bound_check: need as many points as polynomials");
    for (const auto& xi : X)
        if (!(xi > 0 && xi <= 1))
            throw std::invalid_argument("vandermonde_bound_check: X_i must be in (0,1]");
    for (const auto& pt : points) {
        if (pt.size() != n)
            throw std::invalid_argument("vandermonde_bound_check: point dimension mismatch");
        for (size_t i = 0; i < n; ++i)
            if (abs(pt[i]) > X[i])
                throw std::invalid_argument("vandermonde_bound_check: |x_i| must be <= X_i");
    }

    int D = 0;
    for (const auto& f : polys) D = std::max(D, f.total_degree());

    std::vector<std::vector<BigRat>> m(H, std::vector<BigRat>(H));
    for (size_t i = 0; i < H; ++i)
        for (size_t j = 0; j < H; ++j) m[i][j] = polys[i].eval(points[j]);

    VdmCheck chk;
    chk.det = gauss_det(std::move(m));

    BigInt T = binom(static_cast<unsigned long>(n) + static_cast<unsigned long>(D),
                     static_cast<unsigned long>(n));
    BigInt tuples = 0;
    if (T >= BigInt(static_cast<unsigned long>(H))) {
        // C(T, H) for big T
        tuples = 1;
        for (size_t i = 0; i < H; ++i) tuples *= T - static_cast<long>(i);
        tuples /= factorial(static_cast<unsigned long>(H));
    }

    BigRat hmax = 0;
    for (const auto& f : polys) hmax = std::max(hmax, f.height());

    BigRat sizes_prod = 1;
    for (const auto& sz : top_monomial_sizes(X, H)) sizes_prod *= sz;

    BigRat fac(factorial(static_cast<unsigned long>(H)));
    chk.bound = BigRat(tuples) * fac * fac * rat_pow(hmax, static_cast<unsigned>(H)) * sizes_prod;
    chk.bound.canonicalize();
    chk.ok = abs(chk.det) <= chk.bound;
    return chk;
}

const BigRat& sqrt3_upper() {
    // 17320508075688773 / 10^16 > sqrt(3); verified exactly in the tests.
    static const BigRat v(BigInt("17320508075688773"), BigInt("10000000000000000"));
    return v;
}

BigRat default_gradient_bound(const DiagonalForm& form) {
    if (form.arity() != 4)
        throw std::invalid_argument("default_gradient_bound: form must have 4 variables");
    BigInt sum = 0;
    for (int i = 0; i < 3; ++i) sum += abs(form.coeff(i));
    return BigRat(form.degree() * sum);
}

GoodCubeReport good_cube_scan(const DiagonalForm& form, std::int64_t M, std::int64_t M0,
                              const BigRat& L, bool collect_cubes,
                              std::uint64_t mem_budget_bytes) {
    if (form.arity() != 4)
        throw std::invalid_argument("good_cube_scan: form must have 4 variables");
    if (M < 1 || M0 < 1) throw std::invalid_argument("good_cube_scan: M, M0 must be >= 1");
    if (L <= 0) throw std::invalid_argument("good_cube_scan: L must be > 0");

    BigInt Dbig = 2 * BigInt(static_cast<long>(M0)) * BigInt(static_cast<long>(M));
    BigInt total = pow_exact(Dbig, 3);  // cubes per axis = 2 M0 M, side 1/(M0 M)
    if (total > BigInt(static_cast<unsigned long>(std::max<std::uint64_t>(mem_budget_bytes, 1))))
        throw BudgetError("good_cube_scan: (2 M0 M)^3 = " + total.get_str() +
                              " cubes exceed the budget",
                          M);
    const std::int64_t D = Dbig.get_si();

    const unsigned k = static_cast<unsigned>(form.degree());
    GoodCubeReport rep;
    rep.M = M;
    rep.M0 = M0;
    rep.total_cubes = total;

    // center c_j = (2j+1-D)/D; F(c,1) = (sum a_i num_i + a4 D^k) / D^k
    std::vector<BigInt> pw(static_cast<size_t>(D));
    for (std::int64_t j = 0; j < D; ++j)
        pw[static_cast<size_t>(j)] = pow_exact(BigInt(static_cast<long>(2 * j + 1 - D)), k);
    BigInt Dk = pow_exact(BigInt(static_cast<long>(D)), k);
    BigInt a4Dk = form.coeff(3) * Dk;

    // |F(center,1)| <= 2/D + L*sqrt3/D  <=>  |Fnum| <= (2 + L sqrt3) D^{k-1}
    BigRat rhs = (BigRat(2) + L * sqrt3_upper()) *
                 BigRat(pow_exact(BigInt(static_cast<long>(D)), k - 1));
    rhs.canonicalize();
    rep.threshold = (BigRat(2) + L * sqrt3_upper()) / BigRat(static_cast<long>(D));
    rep.threshold.canonicalize();
    const BigInt rhs_num = rhs.get_num(), rhs_den = rhs.get_den();

    // corner gradient numerators: |dF/dx_i| = k |a_i| |2j-D|^{k-1} / D^{k-1}
    std::vector<BigInt> gw(static_cast<size_t>(D));
    for (std::int64_t j = 0; j < D; ++j)
        gw[static_cast<size_t>(j)] = pow_exact(BigInt(static_cast<long>(std::llabs(2 * j - D))), k - 1);
    BigInt Dk1 = pow_exact(BigInt(static_cast<long>(D)), k - 1);

    BigInt min_grad_num = -1;
    BigInt fnum, tmp;
    for (std::int64_t j1 = 0; j1 < D; ++j1) {
        BigInt p1 = form.coeff(0) * pw[static_cast<size_t>(j1)] + a4Dk;
        for (std::int64_t j2 = 0; j2 < D; ++j2) {
            BigInt p2 = p1 + form.coeff(1) * pw[static_cast<size_t>(j2)];
            for (std::int64_t j3 = 0; j3 < D; ++j3) {
                fnum = p2 + form.coeff(2) * pw[static_cast<size_t>(j3)];
                tmp = abs(fnum) * rhs_den;
                if (tmp <= rhs_num) {
                    ++rep.flagged;
                    if (collect_cubes) {
                        if ((rep.cubes.size() + 1) * sizeof(std::array<std::int64_t, 3>) >
                            mem_budget_bytes)
                            throw BudgetError("good_cube_scan: flagged-cube list exceeds budget", M);
                        rep.cubes.push_back({j1, j2, j3});
                    }
                    BigInt g1 = form.degree() * abs(form.coeff(0)) * gw[static_cast<size_t>(j1)];
                    BigInt g2 = form.degree() * abs(form.coeff(1)) * gw[static_cast<size_t>(j2)];
                    BigInt g3 = form.degree() * abs(form.coeff(2)) * gw[static_cast<size_t>(j3)];
                    BigInt gmax = std::max({g1, g2, g3});
                    if (min_grad_num < 0 || gmax < min_grad_num) min_grad_num = gmax;
                }
            }
        }
    }

    rep.flagged_over_M2 =
        static_cast<double>(rep.flagged) / (static_cast<double>(M) * static_cast<double>(M));
    if (min_grad_num >= 0) {
        rep.min_max_gradient = BigRat(min_grad_num) / BigRat(Dk1);
        rep.min_max_gradient.canonicalize();
    }
    return rep;
}

}  // namespace fourpow
