#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fourpow/detmethod.hpp"
#include "oracles.hpp"

#include <cmath>
#include <set>

using namespace fourpow;

TEST_CASE("monomial_order: xi slots in between degree 3 and 4 of the u's") {
    auto mons = monomial_order(0.5, 0.5, 0.1, 11);
    REQUIRE(mons.size() == 11);
    for (size_t i = 1; i < mons.size(); ++i) CHECK(mons[i - 1].size >= mons[i].size);
    // first 10 are the pure-u monomials of degree <= 3, the 11th is xi
    for (size_t i = 0; i < 10; ++i) {
        CHECK(mons[i].n3 == 0);
        CHECK(mons[i].n1 + mons[i].n2 <= 3);
    }
    CHECK(mons[10].n1 == 0);
    CHECK(mons[10].n2 == 0);
    CHECK(mons[10].n3 == 1);
    CHECK(mons[10].size == doctest::Approx(0.1));
}

TEST_CASE("monomial_order: all sizes one, graded-lex tie break") {
    auto mons = monomial_order(1, 1, 1, 4);
    REQUIRE(mons.size() == 4);
    CHECK((mons[0].n1 == 0 && mons[0].n2 == 0 && mons[0].n3 == 0));
    for (size_t i = 1; i < 4; ++i) CHECK(mons[i].n1 + mons[i].n2 + mons[i].n3 == 1);
    CHECK(mons[1].n1 == 1);  // x1-heaviest lex order within a degree
    CHECK(mons[2].n2 == 1);
    CHECK(mons[3].n3 == 1);
}

TEST_CASE("monomial_order: equal halves give exactly total degree <= 2") {
    auto mons = monomial_order(0.5, 0.5, 0.5, 10);
    REQUIRE(mons.size() == 10);
    for (const auto& m : mons) CHECK(m.n1 + m.n2 + m.n3 <= 2);
}

TEST_CASE("monomial_order matches full enumeration as a set of top sizes") {
    // brute force: all monomials of degree <= 8, take the s largest sizes
    const double X1 = 0.7, X2 = 0.4, X3 = 0.25;
    for (int s : {1, 5, 12, 30}) {
        auto mons = monomial_order(X1, X2, X3, s);
        std::vector<double> all;
        for (int n1 = 0; n1 <= 8; ++n1)
            for (int n2 = 0; n2 <= 8; ++n2)
                for (int n3 = 0; n3 <= 8; ++n3)
                    all.push_back(std::pow(X1, n1) * std::pow(X2, n2) * std::pow(X3, n3));
        std::sort(all.begin(), all.end(), std::greater<double>());
        for (int i = 0; i < s; ++i)
            CHECK(mons[static_cast<size_t>(i)].size ==
                  doctest::Approx(all[static_cast<size_t>(i)]).epsilon(1e-12));
    }
}

TEST_CASE("tetra_stats stock examples") {
    auto s1 = tetra_stats(BigRat(2), BigRat(1));
    CHECK(s1.count == 4);
    CHECK(s1.fsum == BigRat(3));

    auto s2 = tetra_stats(BigRat(3), BigRat(2));
    CHECK(s2.count == 7);
    CHECK(s2.fsum == BigRat(10));

    auto s3 = tetra_stats(BigRat(1), BigRat(5));
    CHECK(s3.count == 1);
    CHECK(s3.fsum == 0);
    CHECK(s3.lower == 0);
    CHECK(s3.lower < BigRat(s3.count));
}

TEST_CASE("tetra_stats against the direct lattice oracle") {
    // alpha = an/ad, nu integer; count at nu-1 and fsum over nu-1
    const std::array<std::pair<long, long>, 5> alphas{{{1, 1}, {3, 2}, {2, 1}, {27, 8}, {5, 1}}};
    for (auto [an, ad] : alphas)
        for (long nu = 1; nu <= 21; nu += 2) {
            BigRat alpha(an, ad), rnu(nu);
            auto st = tetra_stats(rnu, alpha);
            CHECK(st.count == BigInt(static_cast<unsigned long>(
                                  oracle::tetra_count_oracle(nu - 1, 1, an, ad))));
            CHECK(st.count_at_nu == BigInt(static_cast<unsigned long>(
                                        oracle::tetra_count_oracle(nu, 1, an, ad))));
            auto [fn, fd] = oracle::tetra_fsum_oracle(nu - 1, 1, an, ad);
            BigRat want(static_cast<long>(fn), static_cast<long>(fd));
            want.canonicalize();
            CHECK(st.fsum == want);
        }
}

TEST_CASE("tetra sandwich and integral chain hold exactly") {
    const std::array<std::pair<long, long>, 5> alphas{{{1, 1}, {3, 2}, {2, 1}, {27, 8}, {5, 1}}};
    for (auto [an, ad] : alphas) {
        BigRat alpha(an, ad);
        for (long nu = 2; nu <= 50; ++nu) {
            auto st = tetra_stats(BigRat(nu), alpha);
            CHECK(st.lower < BigRat(st.count));
            CHECK(BigRat(st.count) < st.upper);
            // (nu-1)^4 / (8 alpha) < fsum + (2+alpha) * count
            BigRat lhs = BigRat((nu - 1)) * (nu - 1) * (nu - 1) * (nu - 1) / (8 * alpha);
            BigRat rhs = st.fsum + (2 + alpha) * BigRat(st.count);
            CHECK(lhs < rhs);
        }
    }
}

TEST_CASE("nu_from_s stock examples and left inverse") {
    CHECK(nu_from_s(10, BigRat(2)) == 3);  // counts 7 < 10 <= 13
    CHECK(nu_from_s(1, BigRat(1)) == 0);
    CHECK(nu_from_s(4, BigRat(1)) == 1);

    for (std::uint64_t s : {1ull, 2ull, 5ull, 17ull, 100ull, 1234ull}) {
        for (auto [an, ad] : std::array<std::pair<long, long>, 3>{{{1, 1}, {3, 2}, {4, 1}}}) {
            BigRat alpha(an, ad);
            int nu = nu_from_s(s, alpha);
            auto at = tetra_stats(BigRat(nu + 1), alpha);  // count field is at nu
            CHECK(at.count >= BigInt(static_cast<unsigned long>(s)));
            if (nu > 0) {
                auto below = tetra_stats(BigRat(nu), alpha);
                CHECK(below.count < BigInt(static_cast<unsigned long>(s)));
            }
        }
    }
}

TEST_CASE("s_from_delta") {
    CHECK(s_from_delta(1) == 4);
    CHECK(s_from_delta(2) == 10);
    CHECK(s_from_delta(5) == 56);
}

TEST_CASE("select_parameters pins the exponent identity") {
    auto p = select_parameters(3, 0.1, 1, 2, 1);
    CHECK(p.lambda == doctest::Approx(0.05325).epsilon(1e-3));
    CHECK(p.alpha == doctest::Approx(3.1953).epsilon(1e-4));
    CHECK(std::abs(2.0 * 3 / p.alpha - (16.0 / 9 + 0.1)) < 1e-12);
    CHECK(p.M_real == doctest::Approx(1.0));  // (B/2) = 1

    // alpha relation (M0 M)^alpha = N^{-1} (B/2)^k, relative 1e-12, on a grid.
    // N > 1 needs B >= B_0(N,k,eps), so the growing-N rows use a huge B.
    struct Case {
        int k;
        double eps;
        long N;
        std::int64_t B;
    };
    std::vector<Case> grid;
    for (int k : {4, 8, 16})
        for (double eps : {0.05, 0.3})
            for (std::int64_t B : {64LL, 1000000LL}) grid.push_back({k, eps, 1L, B});
    grid.push_back({8, 0.3, 17L, 1000000000000000LL});
    grid.push_back({16, 0.1, 100L, 1000000000000000LL});
    for (const auto& c : grid) {
        auto q = select_parameters(c.k, c.eps, c.N, c.B, 2);
        long double lhs = q.alpha * logl(2.0L * q.M_real) + logl(static_cast<long double>(c.N));
        long double rhs = c.k * logl(static_cast<long double>(c.B) / 2);
        CHECK(std::abs(static_cast<double>(lhs - rhs)) <
              1e-12 * std::max(1.0, std::abs(static_cast<double>(rhs))));
        CHECK(std::abs(2.0 * c.k / q.alpha - q.predicted_exponent) < 1e-12);
    }
}

TEST_CASE("select_parameters delta is minimal with beta < -1") {
    auto q = select_parameters(10, 0.05, 1, 1000000, 1);
    CHECK(q.beta < -1.0L);
    CHECK(q.beta_prev >= -1.0L);
    CHECK(q.beta_leading_coeff < 0.0L);
    // beta approaches its quartic leading term from below as delta doubles
    long double prev_ratio = 0;
    for (int mult : {2, 4, 8}) {
        int d = q.delta * mult;
        std::uint64_t s = s_from_delta(d);
        int nu = nu_from_s(s, static_cast<long double>(q.alpha));
        long double fs = tetra_fsum_real(static_cast<long double>(nu), q.alpha);
        long double beta = static_cast<long double>(s) * d - (fs / q.alpha) * 10;
        long double asym = q.beta_leading_coeff * powl(static_cast<long double>(d), 4.0L);
        long double ratio = beta / asym;
        CHECK(ratio > prev_ratio);
        CHECK(ratio < 1.0L);
        prev_ratio = ratio;
    }
    CHECK(prev_ratio > 0.8L);
    // independent recomputation of beta at delta and delta-1
    for (int d : {q.delta - 1, q.delta}) {
        std::uint64_t s = s_from_delta(d);
        int nu = nu_from_s(s, static_cast<long double>(q.alpha));
        long double fs = tetra_fsum_real(static_cast<long double>(nu), q.alpha);
        long double beta = static_cast<long double>(s) * d - (fs / q.alpha) * 10;
        if (d == q.delta) {
            CHECK(beta < -1.0L);
            CHECK(beta == doctest::Approx(static_cast<double>(q.beta)));
        } else {
            CHECK(beta >= -1.0L);
        }
    }
}

TEST_CASE("select_parameters rejects impossible configurations") {
    // eps so large that (1-lambda)(3k/4)^{3/2} <= 1
    CHECK_THROWS_AS(select_parameters(3, 1000.0, 1, 100, 1), ParameterError);
    // N so large relative to B that beta cannot turn negative
    CHECK_THROWS_AS(select_parameters(3, 0.1, BigInt("100000000000"), 2, 1), ParameterError);
    CHECK_THROWS_AS(select_parameters(3, -0.1, 1, 100, 1), ParameterError);
    CHECK_THROWS_AS(select_parameters(3, 0.1, 1, 1, 1), ParameterError);
}

TEST_CASE("select_parameters_bigN clamps to the fixed-N behaviour at N=1") {
    auto a = select_parameters_bigN(12, 2.0, 0.05, 1, 1000, 1);
    auto b = select_parameters(12, 0.05, 1, 1000, 1);
    CHECK(a.t == doctest::Approx(12.0));
    CHECK(a.alpha == doctest::Approx(b.alpha).epsilon(1e-12));
    CHECK(a.delta == b.delta);
    REQUIRE(a.exponent_pair.has_value());
    CHECK(a.exponent_pair->second ==
          doctest::Approx(24.0 / std::pow(6.0, 1.5) - 16.0 / 216.0).epsilon(1e-12));
}

TEST_CASE("select_parameters_bigN rejects tau outside (4/3, k)") {
    CHECK_THROWS_AS(select_parameters_bigN(6, 1.3, 0.1, 1, 100, 1), ParameterError);
    CHECK_THROWS_AS(select_parameters_bigN(6, 6.0, 0.1, 1, 100, 1), ParameterError);
    CHECK_THROWS_AS(select_parameters_bigN(6, 2.0, 0.1, BigInt("10000000000"), 10, 1),
                    ParameterError);
    CHECK_NOTHROW(select_parameters_bigN(6, 1.5, 0.1, 1, 100, 1));
}

TEST_CASE("exponent_main thresholds") {
    CHECK(exponent_main(8) == doctest::Approx(1.9877).epsilon(1e-4));
    CHECK(exponent_main(8) < 2.0);
    CHECK(exponent_main(7) > 2.0);
    CHECK(exponent_main(27) == doctest::Approx(0.9850).epsilon(1e-4));
    CHECK(exponent_main(27) <= 1.0);
    CHECK(exponent_main(26) == doctest::Approx(1.0069).epsilon(1e-4));
    CHECK(exponent_main(26) > 1.0);
}

TEST_CASE("auxiliary_form: points on the hyperplane x1 = 0") {
    std::vector<std::array<std::int64_t, 4>> pts{{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    auto form = auxiliary_form(pts, 1);
    REQUIRE(form.coeffs.size() == 4);
    CHECK(form.coeffs[0] == 1);  // leading coefficient normalized positive
    CHECK(form.coeffs[1] == 0);
    CHECK(form.coeffs[2] == 0);
    CHECK(form.coeffs[3] == 0);
}

TEST_CASE("auxiliary_form: J < s always yields an exact vanishing form") {
    auto gen = oracle::rng(31337);
    std::uniform_int_distribution<std::int64_t> dx(-9, 9);
    for (int trial = 0; trial < 30; ++trial) {
        int delta = 1 + trial % 3;
        size_t s = static_cast<size_t>(s_from_delta(delta));
        size_t J = 1 + static_cast<size_t>(gen() % (s - 1));
        std::vector<std::array<std::int64_t, 4>> pts;
        for (size_t j = 0; j < J; ++j) pts.push_back({dx(gen), dx(gen), dx(gen), dx(gen)});
        auto form = auxiliary_form(pts, delta);

        BigInt g = 0;
        bool nonzero = false;
        for (const auto& c : form.coeffs) {
            g = gcd(g, c);
            if (c != 0) nonzero = true;
        }
        CHECK(nonzero);
        CHECK(g == 1);
        for (const auto& p : pts) {
            std::vector<std::int64_t> x(p.begin(), p.end());
            CHECK(form.evaluate(x) == 0);
        }
    }
}

TEST_CASE("auxiliary_form: generic points of full rank raise RankError") {
    std::vector<std::array<std::int64_t, 4>> pts{
        {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    try {
        auxiliary_form(pts, 1);
        FAIL("expected RankError");
    } catch (const RankError& e) {
        CHECK(e.rank == 4);
    }
}

TEST_CASE("vandermonde_bound_check: constant polynomial") {
    RatPoly f;
    f.terms.push_back({{0}, BigRat(-7, 2)});
    std::vector<std::vector<BigRat>> pts{{BigRat(1, 3)}};
    auto chk = vandermonde_bound_check({f}, pts, {BigRat(1)});
    CHECK(chk.det == BigRat(-7, 2));
    CHECK(chk.ok);
    CHECK(chk.bound == BigRat(7, 2));
}

TEST_CASE("vandermonde_bound_check: classical Vandermonde at 0, 1/2, 1") {
    std::vector<RatPoly> fs(3);
    for (int i = 0; i < 3; ++i)
        fs[static_cast<size_t>(i)].terms.push_back({{i}, BigRat(1)});
    std::vector<std::vector<BigRat>> pts{{BigRat(0)}, {BigRat(1, 2)}, {BigRat(1)}};
    auto chk = vandermonde_bound_check(fs, pts, {BigRat(1)});
    CHECK(abs(chk.det) == BigRat(1, 4));  // (1/2)(1)(1/2)
    CHECK(chk.ok);
}

TEST_CASE("vandermonde_bound_check: repeated point vanishes") {
    std::vector<RatPoly> fs(2);
    fs[0].terms.push_back({{1, 0}, BigRat(3)});
    fs[1].terms.push_back({{0, 2}, BigRat(-5, 7)});
    std::vector<std::vector<BigRat>> pts{{BigRat(1, 2), BigRat(1, 3)},
                                         {BigRat(1, 2), BigRat(1, 3)}};
    auto chk = vandermonde_bound_check(fs, pts, {BigRat(1, 2), BigRat(1, 2)});
    CHECK(chk.det == 0);
    CHECK(chk.ok);
}

TEST_CASE("vandermonde_bound_check rejects out-of-box points") {
    RatPoly f;
    f.terms.push_back({{1}, BigRat(1)});
    std::vector<std::vector<BigRat>> pts{{BigRat(3, 4)}};
    CHECK_THROWS_AS(vandermonde_bound_check({f}, pts, {BigRat(1, 2)}), std::invalid_argument);
}

TEST_CASE("vandermonde_bound_check on random rational configurations") {
    auto gen = oracle::rng(555);
    std::uniform_int_distribution<int> dn(1, 3), dD(0, 4), dH(1, 6), dnum(-8, 8), dden(1, 8);
    for (int trial = 0; trial < 40; ++trial) {
        int n = dn(gen), D = dD(gen), H = dH(gen);
        std::vector<BigRat> X;
        for (int i = 0; i < n; ++i) {
            int den = dden(gen);
            int num = 1 + static_cast<int>(gen() % static_cast<unsigned>(den));
            X.emplace_back(num, den);  // in (0,1]
        }
        std::vector<RatPoly> fs;
        for (int i = 0; i < H; ++i) {
            RatPoly f;
            int terms = 1 + static_cast<int>(gen() % 4);
            for (int t = 0; t < terms; ++t) {
                std::vector<int> e(static_cast<size_t>(n));
                int rem = D;
                for (int v = 0; v < n; ++v) {
                    e[static_cast<size_t>(v)] = static_cast<int>(gen() % static_cast<unsigned>(rem + 1));
                    rem -= e[static_cast<size_t>(v)];
                }
                int num = dnum(gen), den = dden(gen);
                f.terms.push_back({e, BigRat(num, den)});
            }
            fs.push_back(f);
        }
        std::vector<std::vector<BigRat>> pts;
        for (int j = 0; j < H; ++j) {
            std::vector<BigRat> p;
            for (int i = 0; i < n; ++i) {
                // random rational in [-X_i, X_i]
                int den = dden(gen);
                int num = static_cast<int>(gen() % static_cast<unsigned>(2 * den + 1)) - den;
                p.push_back(X[static_cast<size_t>(i)] * BigRat(num, den));
            }
            pts.push_back(p);
        }
        auto chk = vandermonde_bound_check(fs, pts, X);
        CHECK(chk.ok);
    }
}

TEST_CASE("sqrt3_upper really is an upper bound") {
    const BigRat& r = sqrt3_upper();
    CHECK(BigRat(r.get_num()) * r.get_num() > BigRat(3) * r.get_den() * r.get_den());
    CHECK(r < BigRat(17321, 10000));
}

TEST_CASE("good_cube_scan: single cell partition") {
    DiagonalForm f(3, {1, 1, 1, -1});
    auto rep = good_cube_scan(f, 1, 1, default_gradient_bound(f));
    CHECK(rep.total_cubes == 8);
    CHECK(rep.flagged <= 8);
}

TEST_CASE("good_cube_scan: positive quartic form flags nothing once cubes are fine") {
    DiagonalForm f(4, {1, 1, 1, 1});
    // |F(t,1)| >= 1 everywhere; threshold (2 + 12 sqrt3)/(2 M0 M) < 1 for M0 M = 16
    auto rep = good_cube_scan(f, 16, 1, default_gradient_bound(f));
    CHECK(rep.threshold < 1);
    CHECK(rep.flagged == 0);
    CHECK(rep.flagged_over_M2 == 0.0);
}

TEST_CASE("good_cube_scan: flagged set contains every exactly-good center") {
    // centers with |F(c,1)| <= 1/(M0 M) must always be flagged
    DiagonalForm f(3, {1, 1, 1, -1});
    const std::int64_t M = 6, M0 = 1, D = 2 * M0 * M;
    auto rep = good_cube_scan(f, M, M0, default_gradient_bound(f), true);
    std::set<std::array<std::int64_t, 3>> flagged(rep.cubes.begin(), rep.cubes.end());
    std::uint64_t exact_good = 0;
    for (std::int64_t j1 = 0; j1 < D; ++j1)
        for (std::int64_t j2 = 0; j2 < D; ++j2)
            for (std::int64_t j3 = 0; j3 < D; ++j3) {
                // F(center,1) numerator over D^3
                BigInt num = 0;
                std::array<std::int64_t, 3> js{j1, j2, j3};
                for (int i = 0; i < 3; ++i)
                    num += f.coeff(i) *
                           pow_exact(BigInt(static_cast<long>(2 * js[static_cast<size_t>(i)] + 1 - D)), 3);
                num += f.coeff(3) * pow_exact(BigInt(static_cast<long>(D)), 3);
                // |num| / D^3 <= 1/(M0 M) = 2/D  <=>  |num| <= 2 D^2
                if (abs(num) <= 2 * D * D) {
                    ++exact_good;
                    CHECK(flagged.count(js) == 1);
                }
            }
    CHECK(exact_good > 0);
    CHECK(rep.flagged >= exact_good);
    CHECK(rep.min_max_gradient >= 0);
}

TEST_CASE("good_cube_scan budget guard") {
    DiagonalForm f(3, {1, 1, 1, -1});
    CHECK_THROWS_AS(good_cube_scan(f, 1000000, 1000000, BigRat(9)), BudgetError);
}
