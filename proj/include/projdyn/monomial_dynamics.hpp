#pragma once

// Monomial birational self-maps of P^n: homogenization of torus maps y -> y^A,
// composition, exact degree sequences and an empirical growth classifier.

#include "projdyn/polynomial.hpp"
#include "projdyn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace projdyn {

struct HomogeneousMonomialMap {
    std::vector<MultiIndex> components;  // n + 1 monomials of equal degree
    IntMatrix torus_matrix;

    std::size_t n() const { return torus_matrix.rows(); }
    std::uint32_t degree() const { return components.front().degree(); }
    bool is_identity() const { return torus_matrix.is_identity() && degree() == 1; }

    friend bool operator==(const HomogeneousMonomialMap&, const HomogeneousMonomialMap&) = default;
};

namespace detail {

inline std::uint32_t to_exponent(const BigInt& v) {
    if (v < 0 || v > std::numeric_limits<std::uint32_t>::max())
        throw std::overflow_error("monomial exponent out of range");
    return v.convert_to<std::uint32_t>();
}

// Shift each variable so its minimum exponent across components is zero.
inline std::vector<MultiIndex> strip_common(const std::vector<std::vector<BigInt>>& e) {
    const std::size_t vars = e.front().size();
    std::vector<BigInt> low(vars);
    for (std::size_t l = 0; l < vars; ++l) {
        low[l] = e.front()[l];
        for (const auto& row : e) low[l] = std::min(low[l], row[l]);
    }
    std::vector<MultiIndex> out;
    for (const auto& row : e) {
        std::vector<std::uint32_t> m(vars);
        for (std::size_t l = 0; l < vars; ++l) m[l] = to_exponent(row[l] - low[l]);
        out.emplace_back(std::move(m));
    }
    return out;
}

}  // namespace detail

// Component 0 is 1 and component i is prod_j (x_j / x0)^{A_ij}, before clearing denominators.
inline HomogeneousMonomialMap homogenize(const IntMatrix& a) {
    if (!is_unimodular(a)) throw std::domain_error("monomial map needs a unimodular matrix");
    const std::size_t n = a.rows();
    std::vector<std::vector<BigInt>> e(n + 1, std::vector<BigInt>(n + 1, BigInt(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            e[i + 1][j + 1] = a(i, j);
            e[i + 1][0] -= a(i, j);
        }
    return {detail::strip_common(e), a};
}

// Removes any monomial factor common to all components.
inline HomogeneousMonomialMap normalize(const HomogeneousMonomialMap& f) {
    std::vector<std::vector<BigInt>> e;
    for (const auto& m : f.components) e.emplace_back(m.exponents.begin(), m.exponents.end());
    return {detail::strip_common(e), f.torus_matrix};
}

// (f o g)(x) = f(g(x)).
inline HomogeneousMonomialMap compose(const HomogeneousMonomialMap& f, const HomogeneousMonomialMap& g) {
    if (f.n() != g.n()) throw std::domain_error("cannot compose maps of different dimension");
    const std::size_t vars = f.n() + 1;
    std::vector<std::vector<BigInt>> e(vars, std::vector<BigInt>(vars, BigInt(0)));
    for (std::size_t i = 0; i < vars; ++i)
        for (std::size_t l = 0; l < vars; ++l) {
            const std::uint32_t c = f.components[i][l];
            if (c == 0) continue;
            for (std::size_t v = 0; v < vars; ++v) e[i][v] += BigInt(c) * g.components[l][v];
        }
    return {detail::strip_common(e), f.torus_matrix * g.torus_matrix};
}

// [deg f, deg f^2, ..., deg f^N], checked against direct homogenization of A^N.
inline std::vector<BigInt> degree_sequence(const IntMatrix& a, std::size_t n_max) {
    if (n_max == 0) throw std::domain_error("need at least one step");
    const auto f = homogenize(a);
    std::vector<BigInt> out;
    auto iterate = f;
    IntMatrix a_power = a;
    for (std::size_t step = 1; step <= n_max; ++step) {
        if (step > 1) {
            iterate = compose(f, iterate);
            a_power = a * a_power;
        }
        const auto direct = homogenize(a_power);
        if (!(direct == iterate)) throw std::logic_error("iterated composition disagrees with homogenize(A^N)");
        out.emplace_back(iterate.degree());
    }
    return out;
}

namespace detail {

inline double residual(std::span<const double> x, std::span<const double> y, double* slope) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double b = sxy / sxx;
    double r = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = y[i] - (my + b * (x[i] - mx));
        r += d * d;
    }
    if (slope) *slope = b;
    return r;
}

}  // namespace detail

// Classifies a degree sequence seq[i] = deg f^{i+1}.
inline GrowthClass empirical_growth(std::span<const BigInt> seq) {
    const std::size_t len = seq.size();
    if (len < 6) throw std::domain_error("empirical growth needs at least 6 terms");
    for (const auto& s : seq)
        if (s <= 0) throw std::domain_error("degrees must be positive");

    // Eventual periodicity: a repeated (value, successor) pair that persists to the end.
    for (std::size_t j = 1; j + 1 < len; ++j)
        for (std::size_t i = 0; i < j; ++i) {
            if (seq[i] != seq[j] || seq[i + 1] != seq[j + 1]) continue;
            const std::size_t period = j - i;
            bool periodic = true;
            for (std::size_t k = i; k + period < len; ++k) periodic = periodic && seq[k] == seq[k + period];
            if (periodic) return GrowthClass::bounded();
        }

    const std::size_t first = len / 2;
    std::vector<double> step, logn, logs;
    for (std::size_t i = first; i < len; ++i) {
        step.push_back(static_cast<double>(i + 1));
        logn.push_back(std::log(static_cast<double>(i + 1)));
        logs.push_back(std::log(to_double(seq[i])));
    }

    std::vector<double> ratios;
    for (std::size_t i = first; i + 1 < len; ++i) ratios.push_back(to_double(seq[i + 1]) / to_double(seq[i]));
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    double poly_slope = 0;
    const double poly_fit = detail::residual(logn, logs, &poly_slope);
    const double exp_fit = detail::residual(step, logs, nullptr);
    if (*lo > 1.05 && (*hi - *lo) / *lo <= 0.15 && exp_fit <= poly_fit) {
        double log_sum = 0;
        for (double r : ratios) log_sum += std::log(r);
        return GrowthClass::exponential(std::exp(log_sum / static_cast<double>(ratios.size())), std::nullopt, true);
    }
    const long k = std::lround(poly_slope);
    if (k < 1) return GrowthClass::bounded();
    return GrowthClass::polynomial(static_cast<std::size_t>(k));
}

inline GrowthClass predicted_growth(const IntMatrix& a) {
    if (!is_unimodular(a)) throw std::domain_error("monomial map needs a unimodular matrix");
    const auto q = quasi_unipotent_test(a);
    switch (q.kind) {
        case QuasiUnipotentResult::Kind::FiniteOrder: return GrowthClass::bounded();
        case QuasiUnipotentResult::Kind::QuasiUnipotentInfinite: return GrowthClass::polynomial(q.unipotent_index - 1);
        case QuasiUnipotentResult::Kind::HasEigenvalueOffUnitCircle: break;
    }
    return GrowthClass::exponential(spectral_radius_estimate(to_rational(a)), std::nullopt, true);
}

}  // namespace projdyn
