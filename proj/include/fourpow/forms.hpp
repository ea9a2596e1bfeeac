#pragma once

// Exact arithmetic substrate: diagonal forms a_1 x_1^k + ... + a_n x_n^k,
// big-integer evaluation, integer k-th roots, and the shared solution types.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fourpow {

using BigInt = mpz_class;
using BigRat = mpq_class;

// b^e, exact, any sign of b
BigInt pow_exact(const BigInt& base, unsigned e);

// A diagonal form a_1 x_1^k + ... + a_n x_n^k with k >= 3,
// n in {2,3,4} and every a_i nonzero.
class DiagonalForm {
public:
    DiagonalForm(int k, std::vector<BigInt> coeffs);

    int degree() const { return k_; }
    int arity() const { return static_cast<int>(coeffs_.size()); }
    const std::vector<BigInt>& coeffs() const { return coeffs_; }
    const BigInt& coeff(int i) const { return coeffs_[static_cast<size_t>(i)]; }  // 0-based

    // "x1^3 + 2*x2^3 - x3^3" style echo for logs and reports
    std::string to_string() const;

private:
    int k_;
    std::vector<BigInt> coeffs_;
};

// Thrown when an operation would exceed its memory budget; carries the
// largest parameter (box radius or cube count driver) that would fit.
class BudgetError : public std::runtime_error {
public:
    BudgetError(const std::string& msg, std::int64_t limiting)
        : std::runtime_error(msg), limiting(limiting) {}
    std::int64_t limiting;
};

enum class Region { Signed, NonNegative };

// The box [-B,B]^n (Signed) or [0,B]^n (NonNegative).
struct SearchRegion {
    std::int64_t B = 0;
    Region mode = Region::Signed;

    std::int64_t lo() const { return mode == Region::Signed ? -B : 0; }
    std::int64_t hi() const { return B; }
    std::string to_string() const;
};

// Classification of a solution: a_i x_i^k = N for a single index,
// a_i x_i^k + a_j x_j^k = N for a pair, or neither. Indices are 1-based
// and always the smallest admissible (single first, then lex-smallest pair).
struct SolutionClass {
    enum Kind { NonSpecial, SpecialSingle, SpecialPair };
    Kind kind = NonSpecial;
    int i = 0;
    int j = 0;

    bool special() const { return kind != NonSpecial; }
    std::string to_string() const;
    friend bool operator==(const SolutionClass&, const SolutionClass&) = default;
};

struct SolutionRecord {
    std::vector<std::int64_t> x;
    BigInt value;  // exact evaluation of the owning form at x
    SolutionClass cls;
};

// Sum a_i x_i^k, exact at any input size. Throws std::invalid_argument on
// arity mismatch.
BigInt evaluate(const DiagonalForm& form, std::span<const std::int64_t> x);
BigInt evaluate(const DiagonalForm& form, std::span<const BigInt> x);

// The integer r with r^k = v, if one exists. Sign rules: odd k accepts any
// sign of v; even k accepts only v >= 0 and returns the nonnegative root.
// Total function (k >= 1); even k with v < 0 yields empty, not an error.
std::optional<BigInt> integer_kth_root(const BigInt& v, int k);

// floor(v^{1/k}) for v >= 0, k >= 1.
BigInt kth_root_floor(const BigInt& v, int k);

}  // namespace fourpow
