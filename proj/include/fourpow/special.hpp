#pragma once

// Special-solution classification, standard-line membership, bounded Thue
// solving, and the primitive/total Moebius identity for ternary zero forms.

#include "fourpow/forms.hpp"

#include <array>
#include <utility>

namespace fourpow {

// A partition {0,...,4} = pair ∪ triple indexing a standard line of the
// projective closure; index 0 is the homogenizing coordinate, whose
// coefficient is -N.
struct LinePartition {
    std::array<int, 2> pair;
    std::array<int, 3> triple;
};

// All 10 partitions: pair = {0,i} matches V_i, pair = {i,j} (i,j >= 1)
// matches W of the complementary pair.
const std::array<LinePartition, 10>& standard_line_partitions();

// Classification of a solution x of form = N (precondition checked).
// Smallest single index wins, then the lexicographically smallest pair.
SolutionClass classify(const DiagonalForm& form, const BigInt& N,
                       std::span<const std::int64_t> x);

// Membership of an arbitrary integer tuple in some V_i (a_i x_i^k = N and
// the other terms sum to 0) or W_{i,j} (a_i x_i^k + a_j x_j^k = N and the
// other two terms sum to 0).
bool on_standard_line(const DiagonalForm& form, const BigInt& N,
                      std::span<const std::int64_t> x);

// Degree gates under which curves on the Fermat hypersurfaces must be
// (standard) lines: ((k+1)/3, (k+3)/6) as exact rationals.
std::pair<BigRat, BigRat> degree_thresholds(int k);

struct ThueResult {
    std::vector<std::pair<std::int64_t, std::int64_t>> solutions;  // sorted
    std::int64_t search_bound = 0;
    // Bounded search: everything inside |x|,|y| <= search_bound is found,
    // nothing is certified beyond it.
    bool certified_complete = false;
};

// All (x,y) with |x|,|y| <= search_bound and a x^k + b y^k = h, by probing
// integer k-th roots with an exact divisibility check.
ThueResult solve_thue(const BigInt& a, const BigInt& b, int k, const BigInt& h,
                      std::int64_t search_bound);

// Number of distinct prime divisors of |h| (trial division; h != 0).
int omega(const BigInt& h);

struct EvertseReport {
    struct Entry {
        long h;
        std::uint64_t count;
        double allowed;  // C^{1+omega(h)}
    };
    std::vector<Entry> violations;
    double max_ratio = 0.0;  // max over h of count / C^{1+omega(h)}
    long checked = 0;
};

// Compares bounded Thue solution counts against C^{1+omega(h)} over an
// h-range (0 skipped).
EvertseReport evertse_check(const BigInt& a, const BigInt& b, int k, long h_lo,
                            long h_hi, std::int64_t search_bound, double C);

// Nonzero triples in [-B,B]^3 with a_1 x_1^k + a_2 x_2^k + a_3 x_3^k = 0;
// primitive_only restricts to gcd(|x_1|,|x_2|,|x_3|) = 1.
std::uint64_t count_zero_form(const DiagonalForm& form, std::int64_t B,
                              bool primitive_only);

// Exact check of total(B) = sum_{d=1..B} primitive(floor(B/d)), both sides
// computed independently.
bool moebius_identity_check(const DiagonalForm& form, std::int64_t B);

}  // namespace fourpow
