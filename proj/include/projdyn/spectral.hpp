#pragma once

// Jordan data of rational matrices with split spectra, the growth class of a
// Jordan type, and the exact finite-order / quasi-unipotent test for integer
// matrices.

#include "projdyn/exact_numbers.hpp"
#include "projdyn/matrix.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace projdyn {

struct JordanBlock {
    Eigenvalue eigenvalue;
    std::size_t size = 1;
    friend bool operator==(const JordanBlock&, const JordanBlock&) = default;
};

struct SpectralData {
    std::vector<JordanBlock> blocks;
    bool normalized = false;

    std::size_t dimension() const {
        std::size_t n = 0;
        for (const auto& b : blocks) n += b.size;
        return n;
    }
    bool is_semisimple() const {
        return std::all_of(blocks.begin(), blocks.end(), [](const JordanBlock& b) { return b.size == 1; });
    }
    friend bool operator==(const SpectralData&, const SpectralData&) = default;
};

// Divides every eigenvalue by the first one.
inline SpectralData normalize(SpectralData s) {
    if (s.blocks.empty()) throw std::domain_error("spectral data has no blocks");
    const Eigenvalue scale = s.blocks.front().eigenvalue.inverse();
    for (auto& b : s.blocks) b.eigenvalue = b.eigenvalue * scale;
    s.normalized = true;
    return s;
}

// ---------------------------------------------------------------------------
// Univariate polynomials over Q, coefficients low degree first.

using UniPolyQ = std::vector<Rational>;

inline void trim(UniPolyQ& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

// Faddeev-LeVerrier; exact in characteristic 0. Monic, degree n.
inline UniPolyQ characteristic_polynomial(const QMatrix& a) {
    if (!a.is_square()) throw std::invalid_argument("characteristic polynomial of a non-square matrix");
    const std::size_t n = a.rows();
    UniPolyQ c(n + 1, Rational(0));
    c[n] = 1;
    QMatrix m(n, n);
    const QMatrix id = QMatrix::identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
        m = a * m + c[n - k + 1] * id;
        const QMatrix am = a * m;
        Rational tr = 0;
        for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
        c[n - k] = -tr / static_cast<long>(k);
    }
    return c;
}

inline Rational evaluate(const UniPolyQ& p, const Rational& x) {
    Rational acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

// p / (x - r), assuming r is a root.
inline UniPolyQ deflate(const UniPolyQ& p, const Rational& r) {
    UniPolyQ q(p.size() - 1, Rational(0));
    Rational carry = 0;
    for (std::size_t i = p.size() - 1; i-- > 0;) {
        carry = carry * r + p[i + 1];
        q[i] = carry;
    }
    return q;
}

inline std::string to_string(const UniPolyQ& p, const std::string& var = "x") {
    std::string s;
    for (std::size_t i = p.size(); i-- > 0;) {
        const Rational& c = p[i];
        if (c == 0) continue;
        const bool neg = c < 0;
        const Rational mag = neg ? Rational(-c) : c;
        if (!s.empty()) s += neg ? "-" : "+";
        else if (neg) s += "-";
        if (i == 0 || mag != 1) s += to_string(mag);
        if (i > 0) s += var;
        if (i > 1) s += "^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
}

namespace detail {

inline std::vector<BigInt> positive_divisors(const BigInt& n) {
    std::vector<BigInt> divs{1};
    for (const auto& [p, e] : factor_integer(n)) {
        const std::size_t existing = divs.size();
        BigInt pk = 1;
        for (BigInt k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < existing; ++i) divs.push_back(divs[i] * pk);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

}  // namespace detail

struct RationalRoots {
    std::vector<std::pair<Rational, std::size_t>> roots;  // ascending, with multiplicity
    UniPolyQ remainder;                                   // factor with no rational roots (monic)
};

inline RationalRoots rational_roots(UniPolyQ p) {
    trim(p);
    if (p.empty()) throw std::domain_error("zero polynomial has no finite root set");
    RationalRoots out;
    std::size_t zero_mult = 0;
    while (p.size() > 1 && p.front() == 0) {
        p.erase(p.begin());
        ++zero_mult;
    }
    if (zero_mult) out.roots.push_back({Rational(0), zero_mult});
    if (p.size() > 1) {
        BigInt den_lcm = 1;
        for (const auto& c : p) den_lcm = lcm(den_lcm, boost::multiprecision::denominator(c));
        const BigInt c0 = boost::multiprecision::numerator(Rational(p.front() * den_lcm));
        const BigInt cn = boost::multiprecision::numerator(Rational(p.back() * den_lcm));
        std::vector<Rational> candidates;
        for (const auto& num : detail::positive_divisors(c0))
            for (const auto& den : detail::positive_divisors(cn)) {
                candidates.emplace_back(num, den);
                candidates.emplace_back(-num, den);
            }
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        for (const auto& r : candidates) {
            std::size_t mult = 0;
            while (p.size() > 1 && evaluate(p, r) == 0) {
                p = deflate(p, r);
                ++mult;
            }
            if (mult) out.roots.push_back({r, mult});
        }
    }
    const Rational lead = p.back();
    for (auto& c : p) c /= lead;
    out.remainder = std::move(p);
    std::sort(out.roots.begin(), out.roots.end());
    return out;
}

class IrrationalSpectrum : public std::domain_error {
public:
    explicit IrrationalSpectrum(const UniPolyQ& factor)
        : std::domain_error(factor.size() <= 4 ? "irrational spectrum: factor " + to_string(factor) +
                                                     " is irreducible over Q"
                                               : "irrational spectrum: factor " + to_string(factor) +
                                                     " has no rational roots"),
          factor_(factor) {}
    const UniPolyQ& factor() const { return factor_; }

private:
    UniPolyQ factor_;
};

// Jordan type of a rational matrix whose characteristic polynomial splits over Q.
// Eigenvalues ascend by value, block sizes ascend within an eigenvalue; the
// result is rescaled so the first eigenvalue is 1.
inline SpectralData jordan_data_rational(const QMatrix& m) {
    if (!m.is_square() || m.rows() == 0) throw std::domain_error("need a nonempty square matrix");
    const std::size_t n = m.rows();
    const auto roots = rational_roots(characteristic_polynomial(m));
    if (roots.remainder.size() > 1) throw IrrationalSpectrum(roots.remainder);

    SpectralData s;
    const QMatrix id = QMatrix::identity(n);
    for (const auto& [lambda, mult] : roots.roots) {
        if (lambda == 0) throw std::domain_error("matrix is singular (eigenvalue 0)");
        const QMatrix shifted = m - lambda * id;
        std::vector<std::size_t> kernel_dim{0};
        QMatrix pw = id;
        while (kernel_dim.back() < mult) {
            pw = pw * shifted;
            kernel_dim.push_back(n - rank(pw));
        }
        // at_least[j] = number of blocks of size >= j
        const std::size_t top = kernel_dim.size() - 1;
        std::vector<std::size_t> at_least(top + 2, 0);
        for (std::size_t j = 1; j <= top; ++j) at_least[j] = kernel_dim[j] - kernel_dim[j - 1];
        const Eigenvalue ev = factor_rational(lambda);
        for (std::size_t size = 1; size <= top; ++size)
            for (std::size_t c = 0; c < at_least[size] - at_least[size + 1]; ++c) s.blocks.push_back({ev, size});
    }
    return normalize(std::move(s));
}

// ---------------------------------------------------------------------------

struct GrowthClass {
    enum class Kind { Exponential, Polynomial, Bounded };
    Kind kind = Kind::Bounded;
    double rate = 1.0;                  // Exponential only
    std::optional<Rational> exact_rate; // Exponential, when the rate is rational
    bool approximate = false;           // rate is a float estimate
    std::size_t degree = 0;             // Polynomial only

    static GrowthClass bounded() { return {}; }
    static GrowthClass polynomial(std::size_t degree) { return {Kind::Polynomial, 1.0, std::nullopt, false, degree}; }
    static GrowthClass exponential(double rate, std::optional<Rational> exact = std::nullopt, bool approx = false) {
        return {Kind::Exponential, rate, std::move(exact), approx, 0};
    }
};

inline std::string tag(const GrowthClass& g) {
    switch (g.kind) {
        case GrowthClass::Kind::Exponential: return "Exponential";
        case GrowthClass::Kind::Polynomial: return "Polynomial";
        case GrowthClass::Kind::Bounded: return "Bounded";
    }
    return "";
}

inline std::string to_string(const GrowthClass& g) {
    switch (g.kind) {
        case GrowthClass::Kind::Polynomial: return "Polynomial(" + std::to_string(g.degree) + ")";
        case GrowthClass::Kind::Bounded: return "Bounded";
        case GrowthClass::Kind::Exponential: break;
    }
    if (g.exact_rate) return "Exponential(" + to_string(*g.exact_rate) + ")";
    char buf[64];
    std::snprintf(buf, sizeof buf, "Exponential(%.6f)", g.rate);
    return buf;
}

inline GrowthClass growth_class(const SpectralData& s) {
    if (!s.normalized) throw std::domain_error("growth_class expects normalized spectral data");
    if (s.blocks.empty()) throw std::domain_error("spectral data has no blocks");
    Rational rho = 0;
    for (const auto& b : s.blocks) rho = std::max(rho, b.eigenvalue.magnitude().value());
    if (rho > 1) return GrowthClass::exponential(to_double(rho), rho);
    std::size_t s_max = 0;
    for (const auto& b : s.blocks)
        if (b.eigenvalue.magnitude().is_one()) s_max = std::max(s_max, b.size);
    if (s_max >= 2) return GrowthClass::polynomial(s_max - 1);
    return GrowthClass::bounded();
}

// ---------------------------------------------------------------------------

inline BigInt euler_phi(BigInt m) {
    if (m <= 0) throw std::domain_error("euler_phi of a nonpositive integer");
    BigInt result = m;
    for (BigInt p = 2; p * p <= m; ++p) {
        if (m % p != 0) continue;
        while (m % p == 0) m /= p;
        result -= result / p;
    }
    if (m > 1) result -= result / m;
    return result;
}

// lcm{m : phi(m) <= r}. phi(m) >= sqrt(m/2), so m <= 2 r^2 bounds the search.
inline BigInt cyclotomic_order_bound(std::size_t r) {
    BigInt out = 1;
    const BigInt limit = BigInt(2) * r * r + 2;
    for (BigInt m = 1; m <= limit; ++m)
        if (euler_phi(m) <= r) out = lcm(out, m);
    return out;
}

struct QuasiUnipotentResult {
    enum class Kind { FiniteOrder, QuasiUnipotentInfinite, HasEigenvalueOffUnitCircle };
    Kind kind = Kind::FiniteOrder;
    BigInt order = 0;                // FiniteOrder: exact multiplicative order
    std::size_t unipotent_index = 0; // nilpotency index of A^M - I (1 when finite order)
    BigInt bound = 0;                // M(r)
};

inline std::string to_string(QuasiUnipotentResult::Kind k) {
    switch (k) {
        case QuasiUnipotentResult::Kind::FiniteOrder: return "FiniteOrder";
        case QuasiUnipotentResult::Kind::QuasiUnipotentInfinite: return "QuasiUnipotentInfinite";
        case QuasiUnipotentResult::Kind::HasEigenvalueOffUnitCircle: return "HasEigenvalueOffUnitCircle";
    }
    return "";
}

inline QuasiUnipotentResult quasi_unipotent_test(const IntMatrix& a) {
    if (!a.is_square() || a.rows() == 0) throw std::domain_error("quasi_unipotent_test needs a nonempty square matrix");
    if (determinant(a) == 0) throw std::domain_error("matrix is singular");
    const std::size_t r = a.rows();
    QuasiUnipotentResult out;
    out.bound = cyclotomic_order_bound(r);
    const IntMatrix big_power = power(a, out.bound);
    if (big_power.is_identity()) {
        out.kind = QuasiUnipotentResult::Kind::FiniteOrder;
        out.unipotent_index = 1;
        out.order = out.bound;
        for (const auto& d : detail::positive_divisors(out.bound))
            if (power(a, d).is_identity()) {
                out.order = d;
                break;
            }
        return out;
    }
    const IntMatrix nil = big_power - IntMatrix::identity(r);
    IntMatrix pw = nil;
    for (std::size_t j = 1; j <= r; ++j) {
        if (pw.is_zero()) {
            out.kind = QuasiUnipotentResult::Kind::QuasiUnipotentInfinite;
            out.unipotent_index = j;
            return out;
        }
        pw = pw * nil;
    }
    out.kind = QuasiUnipotentResult::Kind::HasEigenvalueOffUnitCircle;
    return out;
}

// Largest eigenvalue modulus. Eigen's QR iteration gives the estimate; when the
// dominant eigenvalue is real it is refined by bisection on the exact
// characteristic polynomial to 1e-9.
inline double spectral_radius_estimate(const QMatrix& a) {
    if (!a.is_square() || a.rows() == 0) throw std::domain_error("need a nonempty square matrix");
    const auto n = static_cast<Eigen::Index>(a.rows());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = to_double(a(i, j));
    const Eigen::VectorXcd ev = m.eigenvalues();
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < n; ++i)
        if (std::abs(ev(i)) > std::abs(ev(best))) best = i;
    const double rho = std::abs(ev(best));
    if (std::abs(ev(best).imag()) > 1e-7 * std::max(1.0, rho)) return rho;

    const UniPolyQ cp = characteristic_polynomial(a);
    auto eval = [&](double x) {
        long double acc = 0;
        for (auto it = cp.rbegin(); it != cp.rend(); ++it) acc = acc * x + to_double(*it);
        return acc;
    };
    const double root = ev(best).real();
    double lo = root - 1e-6 * std::max(1.0, rho), hi = root + 1e-6 * std::max(1.0, rho);
    if ((eval(lo) < 0) == (eval(hi) < 0)) return rho;  // even multiplicity: keep the QR estimate
    while (hi - lo > 1e-12 * std::max(1.0, rho)) {
        const double mid = 0.5 * (lo + hi);
        ((eval(mid) < 0) == (eval(lo) < 0) ? lo : hi) = mid;
    }
    return std::abs(0.5 * (lo + hi));
}

}  // namespace projdyn
