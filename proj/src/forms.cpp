#include "fourpow/forms.hpp"

#include <cmath>
#include <sstream>

namespace fourpow {

BigInt pow_exact(const BigInt& base, unsigned e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

DiagonalForm::DiagonalForm(int k, std::vector<BigInt> coeffs)
    : k_(k), coeffs_(std::move(coeffs)) {
    if (k_ < 3)
        throw std::invalid_argument("DiagonalForm: degree k must be >= 3");
    if (coeffs_.size() < 2 || coeffs_.size() > 4)
        throw std::invalid_argument("DiagonalForm: need 2..4 coefficients");
    for (const auto& a : coeffs_)
        if (a == 0)
            throw std::invalid_argument("DiagonalForm: zero coefficient");
}

std::string DiagonalForm::to_string() const {
    std::ostringstream os;
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        const BigInt& a = coeffs_[i];
        BigInt mag = abs(a);
        if (i == 0) {
            if (a < 0) os << "-";
        } else {
            os << (a < 0 ? " - " : " + ");
        }
        if (mag != 1) os << mag.get_str() << "*";
        os << "x" << (i + 1) << "^" << k_;
    }
    return os.str();
}

std::string SearchRegion::to_string() const {
    std::ostringstream os;
    os << (mode == Region::Signed ? "signed" : "nonneg") << " B=" << B;
    return os.str();
}

std::string SolutionClass::to_string() const {
    switch (kind) {
        case NonSpecial: return "nonspecial";
        case SpecialSingle: return "special-single(" + std::to_string(i) + ")";
        case SpecialPair:
            return "special-pair(" + std::to_string(i) + "," + std::to_string(j) + ")";
    }
    return "?";
}

BigInt evaluate(const DiagonalForm& form, std::span<const std::int64_t> x) {
    if (static_cast<int>(x.size()) != form.arity())
        throw std::invalid_argument("evaluate: arity mismatch");
    BigInt sum = 0;
    for (size_t i = 0; i < x.size(); ++i)
        sum += form.coeff(static_cast<int>(i)) *
               pow_exact(BigInt(static_cast<long>(x[i])), static_cast<unsigned>(form.degree()));
    return sum;
}

BigInt evaluate(const DiagonalForm& form, std::span<const BigInt> x) {
    if (static_cast<int>(x.size()) != form.arity())
        throw std::invalid_argument("evaluate: arity mismatch");
    BigInt sum = 0;
    for (size_t i = 0; i < x.size(); ++i)
        sum += form.coeff(static_cast<int>(i)) * pow_exact(x[i], static_cast<unsigned>(form.degree()));
    return sum;
}

BigInt kth_root_floor(const BigInt& v, int k) {
    if (k < 1) throw std::invalid_argument("kth_root_floor: k must be >= 1");
    if (v < 0) throw std::invalid_argument("kth_root_floor: v must be >= 0");
    if (v == 0) return 0;
    if (k == 1) return v;

    const unsigned uk = static_cast<unsigned>(k);

    // Float seed where the double conversion is finite; the bit-length seed
    // 2^ceil(bits/k) is always an upper bound and covers the overflow case.
    BigInt x;
    double d = v.get_d();
    if (std::isfinite(d) && d > 0) {
        double est = std::pow(d, 1.0 / k);
        if (std::isfinite(est) && est < 9e18) {
            x = BigInt(static_cast<long>(est)) + 2;
        }
    }
    if (x == 0 || pow_exact(x, uk) < v) {
        size_t bits = mpz_sizeinbase(v.get_mpz_t(), 2);
        size_t e = (bits + uk - 1) / uk;
        x = 1;
        x <<= e;  // 2^e >= v^{1/k}
    }

    // Integer Newton descent from an upper seed:
    //   y = ((k-1) x + v div x^{k-1}) div k
    for (;;) {
        BigInt y = ((k - 1) * x + v / pow_exact(x, uk - 1)) / k;
        if (y >= x) break;
        x = y;
    }
    // exact correction to floor(v^{1/k})
    while (pow_exact(x, uk) > v) --x;
    while (pow_exact(x + 1, uk) <= v) ++x;
    return x;
}

std::optional<BigInt> integer_kth_root(const BigInt& v, int k) {
    if (k < 1) throw std::invalid_argument("integer_kth_root: k must be >= 1");
    if (v == 0) return BigInt(0);
    if (k == 1) return v;
    if (v < 0) {
        if (k % 2 == 0) return std::nullopt;
        auto r = integer_kth_root(BigInt(-v), k);
        if (!r) return std::nullopt;
        return BigInt(-*r);
    }
    BigInt r = kth_root_floor(v, k);
    if (pow_exact(r, static_cast<unsigned>(k)) == v) return r;
    return std::nullopt;
}

}  // namespace fourpow
