#pragma once

// Determinant-method machinery: monomial-size orderings, tetrahedron lattice
// counts and weighted sums with their volume sandwich, parameter selection
// (lambda, alpha, M, delta, beta), closed-form exponents, exact auxiliary-form
// construction by fraction-free elimination, the explicit Vandermonde-type
// determinant bound, and the good-cube scan.

#include "fourpow/forms.hpp"

#include <array>
#include <optional>
#include <utility>

namespace fourpow {

struct MonomialExp {
    int n1 = 0, n2 = 0, n3 = 0;
    double size = 1.0;  // X1^n1 X2^n2 X3^n3
};

// First s monomials in (u1,u2,xi) by nonincreasing size X1^n1 X2^n2 X3^n3,
// ties by total degree then lexicographically on (n1,n2,n3) with n1 heaviest.
std::vector<MonomialExp> monomial_order(double X1, double X2, double X3, int s);

// Exact lattice statistics for the tetrahedron n1 + n2 + alpha*n3 <= nu - 1.
struct TetraStats {
    BigRat nu, alpha;
    BigInt count;        // points with n1 + n2 + alpha n3 <= nu - 1
    BigInt count_at_nu;  // points with n1 + n2 + alpha n3 <= nu
    BigRat fsum;         // sum of n1 + n2 + alpha n3 over the first set
    BigRat lower;        // (nu-1)^3 / (6 alpha)
    BigRat upper;        // (nu+1+alpha)^3 / (6 alpha)
};
TetraStats tetra_stats(const BigRat& nu, const BigRat& alpha);

// Float-threshold variants used when alpha is irrational (parameter
// selection); counts are exact integers per row, the threshold comparison
// uses long double.
std::uint64_t tetra_count_real(long double nu, long double alpha);   // <= nu
long double tetra_fsum_real(long double nu, long double alpha);      // over <= nu - 1

// Smallest integer nu with #{n1+n2+alpha*n3 <= nu} >= s.
int nu_from_s(std::uint64_t s, const BigRat& alpha);
int nu_from_s(std::uint64_t s, long double alpha);

// Number of degree-delta monomials in 4 variables: C(delta+3, 3).
std::uint64_t s_from_delta(int delta);

class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ParameterSelection {
    // inputs
    int k = 0;
    double eps = 0;
    BigInt N;
    std::int64_t B = 0;
    std::int64_t M0 = 1;
    // selection
    double lambda = 0;        // pinned by 2k/alpha = 16/(3 sqrt(3k)) + eps
    double alpha = 0;
    long double M_real = 0;   // M0^{-1} N^{-1/alpha} (B/2)^{k/alpha}
    BigInt M_rounded;         // floor(M_real), used by the cube scan
    int delta = 0;            // minimal degree with beta < -1
    std::uint64_t s = 0;      // C(delta+3,3)
    int nu = 0;               // nu_from_s(s, alpha)
    long double beta = 0;     // s*delta - (fsum/alpha)(k - logN/logB), exact sums
    long double beta_prev = 0;  // beta at delta-1 (if delta > 1)
    // leading coefficient of the delta^4 asymptotic of beta,
    // 1/6 - (k - logN/logB)/(8 alpha^{2/3}); negative whenever selection
    // succeeds
    long double beta_leading_coeff = 0;
    double predicted_exponent = 0;  // 16/(3 sqrt(3k)) + eps
    bool thresholds_exact = false;  // alpha is irrational here; lattice
                                    // thresholds use long double floors
    // big-N variant extras
    std::optional<double> tau;
    double t = 0;  // k - logN/logB, clamped to [tau, k]
    std::optional<std::pair<double, double>> exponent_pair;  // (B-exp, N-exp)
};

// Fixed-N selection: lambda = eps/(16/(3 sqrt(3k)) + eps),
// alpha = (1-lambda)(3k/4)^{3/2}, M from (M0 M)^alpha = N^{-1} (B/2)^k,
// then delta grows from 1 until beta < -1.
ParameterSelection select_parameters(int k, double eps, const BigInt& N, std::int64_t B,
                                     std::int64_t M0 = 1);

// Growing-N selection: t = k - logN/logB in [tau, k], alpha from t, plus the
// predicted exponent pair (16/(3 sqrt(3k)) + eps on B,
// 24/(3 tau)^{3/2} - 16/(3k)^{3/2} on N).
ParameterSelection select_parameters_bigN(int k, double tau, double eps, const BigInt& N,
                                          std::int64_t B, std::int64_t M0 = 1);

// The eps-free exponent 16/(3 sqrt(3k)) + max(2/sqrt(k), 1/sqrt(k) + 6/(k+3)).
double exponent_main(int k);

// A homogeneous degree-delta integer form in 4 variables; coefficients are
// aligned with the graded-lex list of exponent vectors, gcd 1, first nonzero
// coefficient positive.
struct AuxiliaryForm {
    int delta = 0;
    std::vector<std::array<int, 4>> exponents;
    std::vector<BigInt> coeffs;

    BigInt evaluate(std::span<const std::int64_t> x) const;
};

class RankError : public std::runtime_error {
public:
    RankError(const std::string& msg, int rank) : std::runtime_error(msg), rank(rank) {}
    int rank;
};

// Degree-delta exponent vectors in 4 variables, graded-lex (x1 heaviest).
std::vector<std::array<int, 4>> monomials_deg4(int delta);

// A nonzero integer form of degree delta vanishing at every point, found in
// the left kernel of the monomial-evaluation matrix by fraction-free
// elimination. Throws RankError when the matrix has rank s.
AuxiliaryForm auxiliary_form(const std::vector<std::array<std::int64_t, 4>>& points, int delta);

// Sparse rational polynomial for the determinant bound check.
struct RatPoly {
    // (exponent vector, coefficient); variables match the point dimension
    std::vector<std::pair<std::vector<int>, BigRat>> terms;

    BigRat eval(std::span<const BigRat> x) const;
    int total_degree() const;
    BigRat height() const;  // max |coefficient|
};

struct VdmCheck {
    BigRat det;    // exact determinant of (f_i(x^(j)))
    BigRat bound;  // fully explicit size-product bound
    bool ok = false;
};

// Exact determinant of the H x H evaluation matrix against the fully
// explicit bound C(T,H) * H! * H! * (max height)^H * prod of the H largest
// monomial sizes, T = C(n+D, n). Points must satisfy |x_i| <= X_i <= 1.
VdmCheck vandermonde_bound_check(const std::vector<RatPoly>& polys,
                                 const std::vector<std::vector<BigRat>>& points,
                                 const std::vector<BigRat>& X);

// Rational upper bound for sqrt(3) used by the cube-scan threshold.
const BigRat& sqrt3_upper();

struct GoodCubeReport {
    std::int64_t M = 0, M0 = 1;
    BigInt total_cubes;          // (2 M0 M)^3
    std::uint64_t flagged = 0;   // centers within the Lipschitz threshold
    double flagged_over_M2 = 0;
    BigRat threshold;            // 1/(M0 M) + L sqrt3 / (2 M0 M)
    BigRat min_max_gradient;     // min over flagged cubes of max_i |dF/dx_i(corner,1)|
    std::vector<std::array<std::int64_t, 3>> cubes;  // flagged indices, if collected
};

// Gradient bound k * (|a1| + |a2| + |a3|) >= sup |grad F(.,1)| on [-1,1]^3.
BigRat default_gradient_bound(const DiagonalForm& form);

// Partitions [-1,1]^3 into (2 M0 M)^3 cubes of side 1/(M0 M) and flags every
// cube whose center c satisfies |F(c,1)| <= 1/(M0 M) + L sqrt3/(2 M0 M) -- a
// certified superset of the cubes containing |F| <= 1/(M0 M).
GoodCubeReport good_cube_scan(const DiagonalForm& form, std::int64_t M, std::int64_t M0,
                              const BigRat& L, bool collect_cubes = false,
                              std::uint64_t mem_budget_bytes = 4ull << 30);

}  // namespace fourpow
