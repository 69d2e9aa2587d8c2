#pragma once

// Sparse multivariate polynomials over Q in variables x0..x_{n}, plus the
// coefficient-vector bridge to exact linear algebra in a fixed degree.

#include "projdyn/bigint.hpp"
#include "projdyn/matrix.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace projdyn {

struct MultiIndex {
    std::vector<std::uint32_t> exponents;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<std::uint32_t> e) : exponents(std::move(e)) {}
    static MultiIndex zero(std::size_t n_vars) { return MultiIndex(std::vector<std::uint32_t>(n_vars, 0)); }
    static MultiIndex variable(std::size_t n_vars, std::size_t i, std::uint32_t power = 1) {
        auto m = zero(n_vars);
        m.exponents.at(i) = power;
        return m;
    }

    std::size_t n_vars() const { return exponents.size(); }
    std::uint32_t degree() const { return std::accumulate(exponents.begin(), exponents.end(), std::uint32_t{0}); }
    std::uint32_t operator[](std::size_t i) const { return exponents[i]; }
    bool is_one() const { return degree() == 0; }

    bool divides(const MultiIndex& other) const {
        for (std::size_t i = 0; i < exponents.size(); ++i)
            if (exponents[i] > other.exponents[i]) return false;
        return true;
    }

    friend MultiIndex operator*(MultiIndex a, const MultiIndex& b) {
        for (std::size_t i = 0; i < a.exponents.size(); ++i) a.exponents[i] += b.exponents[i];
        return a;
    }
    // Requires b | a.
    friend MultiIndex operator/(MultiIndex a, const MultiIndex& b) {
        for (std::size_t i = 0; i < a.exponents.size(); ++i) {
            if (b.exponents[i] > a.exponents[i]) throw std::domain_error("monomial does not divide");
            a.exponents[i] -= b.exponents[i];
        }
        return a;
    }

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

// Graded lexicographic with x0 most significant.
struct GradedLex {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        const auto da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        return a.exponents < b.exponents;
    }
};

inline MultiIndex monomial_gcd(const MultiIndex& a, const MultiIndex& b) {
    MultiIndex g = a;
    for (std::size_t i = 0; i < g.exponents.size(); ++i) g.exponents[i] = std::min(a.exponents[i], b.exponents[i]);
    return g;
}

inline std::string to_string(const MultiIndex& m) {
    std::string s;
    for (std::size_t i = 0; i < m.n_vars(); ++i) {
        if (m[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += "x" + std::to_string(i);
        if (m[i] > 1) s += "^" + std::to_string(m[i]);
    }
    return s.empty() ? "1" : s;
}

// All monomials of degree d in n_vars variables, graded-lex descending (x0^d first).
inline std::vector<MultiIndex> monomials_of_degree(std::size_t n_vars, std::uint32_t d) {
    std::vector<MultiIndex> out;
    if (n_vars == 0) {
        if (d == 0) out.emplace_back();
        return out;
    }
    std::vector<std::uint32_t> e(n_vars, 0);
    auto rec = [&](auto&& self, std::size_t i, std::uint32_t left) -> void {
        if (i + 1 == n_vars) {
            e[i] = left;
            out.emplace_back(e);
            return;
        }
        for (std::uint32_t k = left + 1; k-- > 0;) {
            e[i] = k;
            self(self, i + 1, left - k);
        }
    };
    rec(rec, 0, d);
    return out;
}

class PolynomialQ {
public:
    using TermMap = std::map<MultiIndex, Rational, GradedLex>;

    PolynomialQ() = default;
    explicit PolynomialQ(std::size_t n_vars) : n_vars_(n_vars) {}
    PolynomialQ(std::size_t n_vars, const MultiIndex& m, Rational c = 1) : n_vars_(n_vars) { add_term(m, std::move(c)); }

    static PolynomialQ constant(std::size_t n_vars, Rational c) { return {n_vars, MultiIndex::zero(n_vars), std::move(c)}; }
    static PolynomialQ variable(std::size_t n_vars, std::size_t i) { return {n_vars, MultiIndex::variable(n_vars, i)}; }

    std::size_t n_vars() const { return n_vars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add_term(const MultiIndex& m, const Rational& c) {
        if (m.n_vars() != n_vars_) throw std::invalid_argument("monomial has the wrong number of variables");
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Rational coefficient(const MultiIndex& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    // Leading term in graded-lex order.
    const std::pair<const MultiIndex, Rational>& leading() const {
        if (terms_.empty()) throw std::domain_error("zero polynomial has no leading term");
        return *terms_.rbegin();
    }

    std::uint32_t degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first.degree(); }

    bool is_homogeneous() const {
        if (terms_.empty()) return true;
        const auto d = terms_.begin()->first.degree();
        return terms_.rbegin()->first.degree() == d;
    }

    bool uses_variable(std::size_t i) const {
        for (const auto& [m, c] : terms_)
            if (m[i] > 0) return true;
        return false;
    }

    // Largest monomial dividing every term.
    MultiIndex content_monomial() const {
        if (terms_.empty()) return MultiIndex::zero(n_vars_);
        MultiIndex g = terms_.begin()->first;
        for (const auto& [m, c] : terms_) g = monomial_gcd(g, m);
        return g;
    }

    PolynomialQ divide_monomial(const MultiIndex& m) const {
        PolynomialQ out(n_vars_);
        for (const auto& [t, c] : terms_) out.terms_.emplace(t / m, c);
        return out;
    }

    PolynomialQ multiply_monomial(const MultiIndex& m) const {
        PolynomialQ out(n_vars_);
        for (const auto& [t, c] : terms_) out.terms_.emplace(t * m, c);
        return out;
    }

    PolynomialQ scaled(const Rational& s) const {
        if (s == 0) return PolynomialQ(n_vars_);
        PolynomialQ out = *this;
        for (auto& [m, c] : out.terms_) c *= s;
        return out;
    }

    PolynomialQ monic() const { return is_zero() ? *this : scaled(1 / leading().second); }

    // Set x_i = value (a constant).
    PolynomialQ evaluate_variable(std::size_t i, const Rational& value) const {
        PolynomialQ out(n_vars_);
        for (const auto& [key, c] : terms_) {
            MultiIndex m = key;
            const auto e = m.exponents[i];
            m.exponents[i] = 0;
            Rational f = 1;
            for (std::uint32_t k = 0; k < e; ++k) f *= value;
            out.add_term(m, c * f);
        }
        return out;
    }

    // Keep only the terms whose monomial satisfies pred.
    template <typename Pred>
    PolynomialQ filter(Pred pred) const {
        PolynomialQ out(n_vars_);
        for (const auto& [m, c] : terms_)
            if (pred(m)) out.terms_.emplace(m, c);
        return out;
    }

    PolynomialQ& operator+=(const PolynomialQ& o) {
        check_compatible(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    PolynomialQ& operator-=(const PolynomialQ& o) {
        check_compatible(o);
        for (const auto& [m, c] : o.terms_) add_term(m, Rational(-c));
        return *this;
    }
    friend PolynomialQ operator+(PolynomialQ a, const PolynomialQ& b) { return a += b; }
    friend PolynomialQ operator-(PolynomialQ a, const PolynomialQ& b) { return a -= b; }
    friend PolynomialQ operator*(const PolynomialQ& a, const PolynomialQ& b) {
        a.check_compatible(b);
        PolynomialQ out(a.n_vars_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
        return out;
    }
    friend PolynomialQ operator*(const Rational& s, const PolynomialQ& p) { return p.scaled(s); }

    friend bool operator==(const PolynomialQ& a, const PolynomialQ& b) {
        return a.n_vars_ == b.n_vars_ && a.terms_ == b.terms_;
    }

private:
    void check_compatible(const PolynomialQ& o) const {
        if (o.n_vars_ != n_vars_) throw std::invalid_argument("polynomials live in different rings");
    }

    std::size_t n_vars_ = 0;
    TermMap terms_;
};

inline PolynomialQ pow(const PolynomialQ& p, std::uint32_t e) {
    PolynomialQ out = PolynomialQ::constant(p.n_vars(), 1);
    for (std::uint32_t i = 0; i < e; ++i) out = out * p;
    return out;
}

// Substitute x_i -> forms[i] for every variable.
inline PolynomialQ substitute(const PolynomialQ& p, const std::vector<PolynomialQ>& forms) {
    if (forms.size() != p.n_vars()) throw std::invalid_argument("substitution needs one form per variable");
    PolynomialQ out(p.n_vars());
    for (const auto& [m, c] : p.terms()) {
        PolynomialQ t = PolynomialQ::constant(p.n_vars(), c);
        for (std::size_t i = 0; i < m.n_vars(); ++i)
            if (m[i] > 0) t = t * pow(forms[i], m[i]);
        out += t;
    }
    return out;
}

// Linear change x_i -> sum_j a(i,j) x_j.
inline PolynomialQ linear_substitute(const PolynomialQ& p, const QMatrix& a) {
    if (a.rows() != p.n_vars() || a.cols() != p.n_vars()) throw std::invalid_argument("substitution matrix size mismatch");
    std::vector<PolynomialQ> forms;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        PolynomialQ f(p.n_vars());
        for (std::size_t j = 0; j < a.cols(); ++j) f.add_term(MultiIndex::variable(p.n_vars(), j), a(i, j));
        forms.push_back(std::move(f));
    }
    return substitute(p, forms);
}

inline std::string to_string(const PolynomialQ& p) {
    if (p.is_zero()) return "0";
    std::string s;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto& [m, c] = *it;
        const bool neg = c < 0;
        const Rational mag = neg ? Rational(-c) : c;
        if (!s.empty()) s += neg ? " - " : " + ";
        else if (neg) s += "-";
        if (m.is_one()) s += to_string(mag);
        else if (mag == 1) s += to_string(m);
        else s += to_string(mag) + "*" + to_string(m);
    }
    return s;
}

// Coordinates of homogeneous degree-d polynomials in the monomial basis.
class MonomialBasis {
public:
    MonomialBasis(std::size_t n_vars, std::uint32_t degree)
        : n_vars_(n_vars), degree_(degree), monomials_(monomials_of_degree(n_vars, degree)) {
        for (std::size_t i = 0; i < monomials_.size(); ++i) index_.emplace(monomials_[i], i);
    }

    std::size_t n_vars() const { return n_vars_; }
    std::uint32_t degree() const { return degree_; }
    std::size_t size() const { return monomials_.size(); }
    const std::vector<MultiIndex>& monomials() const { return monomials_; }
    std::size_t index_of(const MultiIndex& m) const {
        auto it = index_.find(m);
        if (it == index_.end()) throw std::domain_error("monomial " + to_string(m) + " is not of the basis degree");
        return it->second;
    }

    std::vector<Rational> coordinates(const PolynomialQ& p) const {
        if (p.n_vars() != n_vars_) throw std::domain_error("polynomial has the wrong number of variables");
        std::vector<Rational> v(monomials_.size(), Rational(0));
        for (const auto& [m, c] : p.terms()) v[index_of(m)] = c;
        return v;
    }

    PolynomialQ polynomial(std::span<const Rational> v) const {
        PolynomialQ p(n_vars_);
        for (std::size_t i = 0; i < v.size(); ++i) p.add_term(monomials_[i], v[i]);
        return p;
    }

    QMatrix matrix(const std::vector<PolynomialQ>& polys) const {
        QMatrix a(polys.size(), monomials_.size());
        for (std::size_t i = 0; i < polys.size(); ++i) {
            const auto v = coordinates(polys[i]);
            for (std::size_t j = 0; j < v.size(); ++j) a(i, j) = v[j];
        }
        return a;
    }

    // Canonical (RREF) basis of the span.
    std::vector<PolynomialQ> span_basis(const std::vector<PolynomialQ>& polys) const {
        const QMatrix b = row_space_basis(matrix(polys));
        std::vector<PolynomialQ> out;
        for (std::size_t i = 0; i < b.rows(); ++i) out.push_back(polynomial(b.row(i)));
        return out;
    }

private:
    std::size_t n_vars_;
    std::uint32_t degree_;
    std::vector<MultiIndex> monomials_;
    std::map<MultiIndex, std::size_t, GradedLex> index_;
};

// Common degree of a nonempty list of nonzero homogeneous polynomials.
inline std::uint32_t common_degree(const std::vector<PolynomialQ>& polys) {
    std::optional<std::uint32_t> d;
    for (const auto& p : polys) {
        if (p.is_zero()) continue;
        if (!p.is_homogeneous()) throw std::domain_error("polynomial " + to_string(p) + " is not homogeneous");
        if (d && *d != p.degree()) throw std::domain_error("generators have mixed degrees");
        d = p.degree();
    }
    if (!d) throw std::domain_error("subspace has no nonzero generator");
    return *d;
}

}  // namespace projdyn
