#pragma once

// Eigenvalues of the form zeta * q: a root of unity times a positive rational
// kept as a prime factorization. Every value has exactly one canonical
// representation, so structural equality is semantic equality.

#include "projdyn/bigint.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace projdyn {

// Positive rational prod p^e; primes sorted, exponents nonzero, empty map = 1.
class FactoredRational {
public:
    using FactorMap = std::map<BigInt, BigInt>;

    FactoredRational() = default;
    explicit FactoredRational(FactorMap factors) : factors_(std::move(factors)) { normalize(); }

    const FactorMap& factors() const { return factors_; }
    bool is_one() const { return factors_.empty(); }

    // this * other^power
    void multiply_power(const FactoredRational& other, const BigInt& power) {
        if (power == 0) return;
        for (const auto& [p, e] : other.factors_) factors_[p] += e * power;
        normalize();
    }

    FactoredRational inverse() const {
        FactoredRational out = *this;
        for (auto& [p, e] : out.factors_) e = -e;
        return out;
    }

    Rational value() const {
        BigInt num = 1, den = 1;
        for (const auto& [p, e] : factors_) {
            BigInt pe = boost::multiprecision::pow(p, static_cast<unsigned>(abs(e)));
            (e > 0 ? num : den) *= pe;
        }
        return Rational(num, den);
    }

    double log() const {
        double s = 0;
        for (const auto& [p, e] : factors_) s += e.convert_to<double>() * std::log(p.convert_to<double>());
        return s;
    }

    // Sign of log(value): -1, 0 or +1, decided exactly.
    int compare_to_one() const {
        if (is_one()) return 0;
        const Rational v = value();
        return v > 1 ? 1 : -1;
    }

    friend bool operator==(const FactoredRational&, const FactoredRational&) = default;
    friend bool operator<(const FactoredRational& a, const FactoredRational& b) { return a.factors_ < b.factors_; }

private:
    void normalize() {
        for (auto it = factors_.begin(); it != factors_.end();) {
            if (it->first < 2) throw std::domain_error("factor base must be a prime >= 2");
            it = (it->second == 0) ? factors_.erase(it) : std::next(it);
        }
    }

    FactorMap factors_;
};

// exp(2 pi i exponent / order), reduced so that order is the exact multiplicative order.
class RootOfUnity {
public:
    RootOfUnity() = default;
    RootOfUnity(BigInt exponent, BigInt order) {
        if (order <= 0) throw std::domain_error("root of unity order must be positive");
        exponent = mod_floor(exponent, order);
        if (exponent == 0) return;
        const BigInt g = gcd(exponent, order);
        exponent_ = exponent / g;
        order_ = order / g;
    }

    // zeta_n^1
    static RootOfUnity primitive(const BigInt& order) { return RootOfUnity(1, order); }
    static RootOfUnity minus_one() { return RootOfUnity(1, 2); }

    const BigInt& order() const { return order_; }
    const BigInt& exponent() const { return exponent_; }
    bool is_one() const { return order_ == 1; }
    Rational turn() const { return Rational(exponent_, order_); }

    friend bool operator==(const RootOfUnity&, const RootOfUnity&) = default;
    friend bool operator<(const RootOfUnity& a, const RootOfUnity& b) {
        return std::tie(a.order_, a.exponent_) < std::tie(b.order_, b.exponent_);
    }

private:
    BigInt exponent_ = 0;
    BigInt order_ = 1;
};

class Eigenvalue {
public:
    Eigenvalue() = default;
    Eigenvalue(RootOfUnity torsion, FactoredRational magnitude)
        : torsion_(std::move(torsion)), magnitude_(std::move(magnitude)) {}

    static Eigenvalue one() { return {}; }

    const RootOfUnity& torsion() const { return torsion_; }
    const FactoredRational& magnitude() const { return magnitude_; }

    bool is_one() const { return torsion_.is_one() && magnitude_.is_one(); }

    // Exact value when the torsion part is +-1.
    std::optional<Rational> rational_value() const {
        if (torsion_.is_one()) return magnitude_.value();
        if (torsion_ == RootOfUnity::minus_one()) return Rational(-magnitude_.value());
        return std::nullopt;
    }

    std::complex<double> to_complex() const {
        const double angle = 2 * std::numbers::pi * to_double(torsion_.turn());
        return std::polar(std::exp(magnitude_.log()), angle);
    }

    Eigenvalue inverse() const {
        return {RootOfUnity(-torsion_.exponent(), torsion_.order()), magnitude_.inverse()};
    }

    friend Eigenvalue operator*(const Eigenvalue& a, const Eigenvalue& b);

    friend bool operator==(const Eigenvalue&, const Eigenvalue&) = default;
    friend bool operator<(const Eigenvalue& a, const Eigenvalue& b) {
        if (a.torsion_ == b.torsion_) return a.magnitude_ < b.magnitude_;
        return a.torsion_ < b.torsion_;
    }

private:
    RootOfUnity torsion_;
    FactoredRational magnitude_;
};

namespace detail {

inline BigInt pollard_rho(const BigInt& n) {
    if (n % 2 == 0) return 2;
    for (BigInt c = 1;; ++c) {
        BigInt x = 2, y = 2, d = 1;
        auto step = [&](const BigInt& v) { return (v * v + c) % n; };
        while (d == 1) {
            x = step(x);
            y = step(step(y));
            d = gcd(x - y, n);
        }
        if (d != n) return d;
    }
}

inline void factor_into(BigInt n, FactoredRational::FactorMap& out, const BigInt& sign) {
    for (BigInt p = 2; p * p <= n && p < 100000; p += (p == 2 ? 1 : 2)) {
        while (n % p == 0) {
            out[p] += sign;
            n /= p;
        }
    }
    if (n == 1) return;
    if (is_probable_prime(n)) {
        out[n] += sign;
        return;
    }
    const BigInt d = pollard_rho(n);
    factor_into(d, out, sign);
    factor_into(n / d, out, sign);
}

}  // namespace detail

// Prime factorization of |n| as a map, n != 0.
inline FactoredRational::FactorMap factor_integer(const BigInt& n) {
    if (n == 0) throw std::domain_error("cannot factor zero");
    FactoredRational::FactorMap out;
    detail::factor_into(abs(n), out, 1);
    return out;
}

inline Eigenvalue factor_rational(const BigInt& numerator, const BigInt& denominator) {
    if (numerator == 0) throw std::domain_error("zero is not a valid eigenvalue");
    if (denominator == 0) throw std::domain_error("zero denominator");
    const bool negative = (numerator < 0) != (denominator < 0);
    FactoredRational::FactorMap f;
    detail::factor_into(abs(numerator), f, 1);
    detail::factor_into(abs(denominator), f, -1);
    return {negative ? RootOfUnity::minus_one() : RootOfUnity(), FactoredRational(std::move(f))};
}

inline Eigenvalue factor_rational(const Rational& q) {
    return factor_rational(boost::multiprecision::numerator(q), boost::multiprecision::denominator(q));
}

// prod values[i]^exponents[i], normalized.
inline Eigenvalue eigen_mul_pow(std::span<const Eigenvalue> values, std::span<const BigInt> exponents) {
    if (values.size() != exponents.size() || values.empty())
        throw std::invalid_argument("eigen_mul_pow needs equal nonzero-length lists");
    Rational turn = 0;
    FactoredRational magnitude;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (exponents[i] == 0) continue;
        turn += values[i].torsion().turn() * exponents[i];
        magnitude.multiply_power(values[i].magnitude(), exponents[i]);
    }
    return {RootOfUnity(boost::multiprecision::numerator(turn), boost::multiprecision::denominator(turn)),
            std::move(magnitude)};
}

inline Eigenvalue operator*(const Eigenvalue& a, const Eigenvalue& b) {
    const Eigenvalue vals[2] = {a, b};
    const BigInt ones[2] = {1, 1};
    return eigen_mul_pow(vals, ones);
}

inline Eigenvalue pow(const Eigenvalue& v, const BigInt& e) {
    const BigInt exps[1] = {e};
    return eigen_mul_pow(std::span<const Eigenvalue>(&v, 1), exps);
}

inline std::optional<BigInt> is_root_of_unity(const Eigenvalue& v) {
    if (!v.magnitude().is_one()) return std::nullopt;
    return v.torsion().order();
}

// Canonical text: "3/2", "-1", "zeta(6)^1", "zeta(6)^5 * 5/4".
inline std::string to_string(const Eigenvalue& v) {
    const std::string mag = to_string(v.magnitude().value());
    if (v.torsion().is_one()) return mag;
    if (v.torsion() == RootOfUnity::minus_one()) return "-" + mag;
    std::string s = "zeta(" + v.torsion().order().str() + ")^" + v.torsion().exponent().str();
    if (!v.magnitude().is_one()) s += " * " + mag;
    return s;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

inline Eigenvalue parse_factor(std::string_view f) {
    f = trim(f);
    bool negate = false;
    if (!f.empty() && f.front() == '-' && f.substr(1, 4) == "zeta") {
        negate = true;
        f.remove_prefix(1);
    }
    if (f.substr(0, 5) == "zeta(") {
        const auto close = f.find(')');
        if (close == std::string_view::npos) throw std::invalid_argument("unterminated zeta(");
        const BigInt order = parse_bigint(trim(f.substr(5, close - 5)));
        BigInt exponent = 1;
        auto rest = trim(f.substr(close + 1));
        if (!rest.empty()) {
            if (rest.front() != '^') throw std::invalid_argument("expected ^ after zeta(n)");
            exponent = parse_bigint(trim(rest.substr(1)));
        }
        if (order <= 0) throw std::domain_error("zeta order must be positive");
        Eigenvalue z(RootOfUnity(exponent, order), {});
        return negate ? z * Eigenvalue(RootOfUnity::minus_one(), {}) : z;
    }
    if (f.empty()) throw std::invalid_argument("empty eigenvalue factor");
    return factor_rational(parse_rational(f));
}

}  // namespace detail

// Parses the shorthand accepted by the CLI; ASCII '-' or U+2212 for minus.
inline Eigenvalue parse_eigenvalue(std::string_view text) {
    std::string s(text);
    for (std::size_t pos; (pos = s.find("\xE2\x88\x92")) != std::string::npos;) s.replace(pos, 3, "-");
    Eigenvalue out;
    std::string_view rest = s;
    while (true) {
        const auto star = rest.find('*');
        out = out * detail::parse_factor(rest.substr(0, star));
        if (star == std::string_view::npos) break;
        rest.remove_prefix(star + 1);
    }
    return out;
}

}  // namespace projdyn
