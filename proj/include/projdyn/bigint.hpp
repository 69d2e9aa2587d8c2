#pragma once

// Arbitrary-precision integer and rational aliases plus the handful of
// number-theoretic helpers shared by the rest of the library.

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/miller_rabin.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace projdyn {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt abs(const BigInt& a) { return a < 0 ? BigInt(-a) : a; }

inline BigInt gcd(const BigInt& a, const BigInt& b) {
    return boost::multiprecision::gcd(abs(a), abs(b));
}

inline BigInt lcm(const BigInt& a, const BigInt& b) {
    if (a == 0 || b == 0) return 0;
    return abs(a) / gcd(a, b) * abs(b);
}

// Floor division and the matching nonnegative remainder (for b > 0).
inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline BigInt mod_floor(const BigInt& a, const BigInt& b) { return a - floor_div(a, b) * b; }

struct ExtendedGcd {
    BigInt g, x, y;  // g = x*a + y*b, g >= 0
};

inline ExtendedGcd extended_gcd(const BigInt& a, const BigInt& b) {
    BigInt old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        BigInt q = old_r / r;
        BigInt tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    if (old_r < 0) return {BigInt(-old_r), BigInt(-old_s), BigInt(-old_t)};
    return {old_r, old_s, old_t};
}

inline std::string to_string(const BigInt& a) { return a.str(); }

inline std::string to_string(const Rational& q) {
    const BigInt& num = boost::multiprecision::numerator(q);
    const BigInt& den = boost::multiprecision::denominator(q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

inline BigInt parse_bigint(std::string_view text) {
    std::string s(text);
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (start == s.size()) throw std::invalid_argument("empty integer literal");
    for (std::size_t i = start; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("bad integer literal: " + s);
    if (s[0] == '+') s.erase(0, 1);
    return BigInt(s);
}

// Accepts "p", "-p", "p/q".
inline Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_bigint(text));
    BigInt den = parse_bigint(text.substr(slash + 1));
    if (den == 0) throw std::domain_error("zero denominator in " + std::string(text));
    return Rational(parse_bigint(text.substr(0, slash)), den);
}

inline bool is_probable_prime(const BigInt& n) {
    if (n < 2) return false;
    return boost::multiprecision::miller_rabin_test(n, 25);
}

inline std::int64_t to_int64(const BigInt& a) {
    if (a > BigInt(INT64_MAX) || a < BigInt(INT64_MIN)) throw std::overflow_error("integer exceeds 64 bits: " + a.str());
    return static_cast<std::int64_t>(a);
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace projdyn
