#pragma once

// Exact enumeration and counting of solutions in boxes: the full quaternary
// box counts, R_k(N), R_{k,l}(N) by hyperplane slicing, and the ternary
// quantity r_0(M,B).

#include "fourpow/forms.hpp"

#include <cstdint>

namespace fourpow {

struct CountSummary {
    std::uint64_t total = 0;
    std::uint64_t special = 0;     // some a_i x_i^k = N or a pair sums to N
    std::uint64_t nonspecial = 0;  // total - special
    // parameter echo
    int k = 0;
    std::vector<BigInt> coeffs;
    BigInt N;
    SearchRegion region;
};

struct EnumerateOptions {
    int threads = 1;
    std::uint64_t mem_budget_bytes = 4ull << 30;
};

// Every tuple in the region with form = N, exactly once, classified and
// sorted lexicographically. Requires a 4-variable form.
std::vector<SolutionRecord> enumerate_solutions(const DiagonalForm& form, const BigInt& N,
                                                SearchRegion region,
                                                const EnumerateOptions& opts = {});

// Counts of the enumeration without materializing records.
CountSummary count_representations(const DiagonalForm& form, const BigInt& N,
                                   SearchRegion region, const EnumerateOptions& opts = {});

// R_k(N): representations of N >= 1 as x_1^k + ... + x_4^k in nonnegative
// integers (box radius floor(N^{1/k}) covers all of them).
std::uint64_t count_Rk(const BigInt& N, int k, const EnumerateOptions& opts = {});

// R_{k,l}(N): x_1^k + x_2^k + x_3^k + x_4^l = N in nonnegative integers,
// computed by slicing over x_4 = a and counting exact ternary slices.
std::uint64_t count_Rkl(const BigInt& N, int k, int l, const EnumerateOptions& opts = {});

// Ternary split used by r_0 and the scaling studies: all solutions of
// form = M in [-B,B]^3 and how many of them have some a_i x_i^k = M.
struct TernarySplit {
    std::uint64_t total = 0;
    std::uint64_t excluded = 0;  // some a_i x_i^k = M
    std::uint64_t r0() const { return total - excluded; }
};
TernarySplit count_ternary_split(const DiagonalForm& form, const BigInt& M, std::int64_t B);

// r_0(M,B): signed solutions of the ternary equation with |x_i| <= B and
// a_i x_i^k != M for every i.
std::uint64_t count_r0(const DiagonalForm& form, const BigInt& M, std::int64_t B);

}  // namespace fourpow
