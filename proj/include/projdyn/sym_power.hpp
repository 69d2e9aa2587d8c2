#pragma once

// Pullback action of a normal-form automorphism on degree-d forms, weight
// decompositions in the semisimple case, Jordan chains in the unipotent case,
// and the shift-equation solver behind the chain structure.
//
// The action x -> M^t x is kept split into its semisimple part (a character
// per variable, stored as exact Eigenvalues) and its unipotent part (a rational
// substitution matrix). All subspace computations stay over Q: eigenspaces of
// the semisimple part are spanned by monomials, so projections onto them are
// coordinate restrictions.

#include "projdyn/mult_relations.hpp"
#include "projdyn/polynomial.hpp"
#include "projdyn/spectral.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace projdyn {

struct PullbackAction {
    std::size_t n_vars = 0;
    std::vector<Eigenvalue> scale;  // character of each variable
    QMatrix unipotent;              // x_i -> sum_j unipotent(i, j) x_j
    bool has_unipotent = false;
};

// Blocks of size >= 2 must carry eigenvalue 1 (as in the M2 normal form).
inline PullbackAction pullback_action(const SpectralData& s) {
    PullbackAction a;
    a.n_vars = s.dimension();
    a.unipotent = QMatrix::identity(a.n_vars);
    std::size_t var = 0;
    for (const auto& b : s.blocks) {
        if (b.size >= 2 && !b.eigenvalue.is_one())
            throw std::domain_error("pullback supports Jordan blocks of size >= 2 only with eigenvalue 1");
        for (std::size_t i = 0; i < b.size; ++i, ++var) {
            a.scale.push_back(b.eigenvalue);
            if (i > 0) {
                a.unipotent(var, var - 1) = 1;
                a.has_unipotent = true;
            }
        }
    }
    return a;
}

inline PullbackAction power(const PullbackAction& a, const BigInt& e) {
    PullbackAction out = a;
    for (auto& s : out.scale) s = pow(s, e);
    if (a.has_unipotent) out.unipotent = power(a.unipotent, e);
    return out;
}

inline Eigenvalue monomial_character(const PullbackAction& a, const MultiIndex& m) {
    if (a.n_vars == 0) return Eigenvalue::one();
    std::vector<BigInt> e(m.exponents.begin(), m.exponents.end());
    return eigen_mul_pow(a.scale, e);
}

// Terms of p grouped by the character of their monomial.
inline std::map<Eigenvalue, PolynomialQ> split_by_character(const PullbackAction& a, const PolynomialQ& p) {
    std::map<Eigenvalue, PolynomialQ> parts;
    for (const auto& [m, c] : p.terms()) {
        auto [it, _] = parts.try_emplace(monomial_character(a, m), PolynomialQ(p.n_vars()));
        it->second.add_term(m, c);
    }
    return parts;
}

// sum_c c * P_c with distinct exact scalars c.
struct ScaledPolynomial {
    std::size_t n_vars = 0;
    std::map<Eigenvalue, PolynomialQ> parts;

    void add(const Eigenvalue& c, const PolynomialQ& p) {
        if (p.is_zero()) return;
        auto [it, inserted] = parts.try_emplace(c, p);
        if (!inserted) {
            it->second += p;
            if (it->second.is_zero()) parts.erase(it);
        }
    }

    bool is_zero() const { return parts.empty(); }

    // Collapses to a rational polynomial when every scalar is rational.
    std::optional<PolynomialQ> as_rational() const {
        PolynomialQ out(n_vars);
        for (const auto& [c, p] : parts) {
            const auto r = c.rational_value();
            if (!r) return std::nullopt;
            out += p.scaled(*r);
        }
        return out;
    }

    friend ScaledPolynomial operator*(const ScaledPolynomial& a, const ScaledPolynomial& b) {
        ScaledPolynomial out{a.n_vars, {}};
        for (const auto& [ca, pa] : a.parts)
            for (const auto& [cb, pb] : b.parts) out.add(ca * cb, pa * pb);
        return out;
    }

    friend bool operator==(const ScaledPolynomial&, const ScaledPolynomial&) = default;
};

inline ScaledPolynomial pullback(const PullbackAction& a, const PolynomialQ& p) {
    if (p.n_vars() != a.n_vars) throw std::domain_error("polynomial variable count does not match the automorphism");
    ScaledPolynomial out{a.n_vars, {}};
    for (const auto& [c, part] : split_by_character(a, p))
        out.add(c, a.has_unipotent ? linear_substitute(part, a.unipotent) : part);
    return out;
}

inline ScaledPolynomial pullback(const PullbackAction& a, const ScaledPolynomial& p) {
    ScaledPolynomial out{a.n_vars, {}};
    for (const auto& [c, part] : p.parts)
        for (const auto& [c2, image] : pullback(a, part).parts) out.add(c * c2, image);
    return out;
}

// P(M^t x) for the automorphism with Jordan type s.
inline ScaledPolynomial pullback_poly(const SpectralData& s, const PolynomialQ& p) { return pullback(pullback_action(s), p); }

// Exact invariance of span(w) over Q: w must be closed under the projections
// onto the eigenspaces of the semisimple part and under the unipotent part.
// Together these are equivalent to closure under the pullback itself.
inline bool invariant_subspace_test(const PullbackAction& a, const std::vector<PolynomialQ>& w) {
    const auto d = common_degree(w);
    const MonomialBasis mb(a.n_vars, d);
    const QMatrix span = row_space_basis(mb.matrix(w));
    auto inside = [&](const PolynomialQ& p) { return in_row_space(span, mb.coordinates(p)); };
    for (const auto& g : w) {
        if (g.n_vars() != a.n_vars) throw std::domain_error("polynomial variable count does not match the automorphism");
        for (const auto& [c, part] : split_by_character(a, g))
            if (!inside(part)) return false;
        if (a.has_unipotent && !inside(linear_substitute(g, a.unipotent))) return false;
    }
    return true;
}

inline bool invariant_subspace_test(const SpectralData& s, const std::vector<PolynomialQ>& w) {
    return invariant_subspace_test(pullback_action(s), w);
}

// ---------------------------------------------------------------------------
// Normal-form layouts.

struct NormalFormLayout {
    bool jordan = false;      // M2 when true
    std::size_t k = 0;        // torsion count in the normal-form indexing
    BigInt torsion_lcm = 1;   // lcm of the torsion orders
};

namespace detail {

// Validates torsion-prefix then independent-tail of values[first..].
inline NormalFormLayout layout_from_diagonal(const std::vector<Eigenvalue>& values, std::size_t first, bool jordan) {
    NormalFormLayout out;
    out.jordan = jordan;
    std::size_t i = first;
    for (; i < values.size(); ++i) {
        const auto o = is_root_of_unity(values[i]);
        if (!o) break;
        out.torsion_lcm = lcm(out.torsion_lcm, *o);
    }
    out.k = i - 1;  // values[j] is the eigenvalue of x_j
    const std::vector<Eigenvalue> tail(values.begin() + static_cast<std::ptrdiff_t>(i), values.end());
    for (const auto& v : tail)
        if (is_root_of_unity(v)) throw std::domain_error("not a normal form: torsion eigenvalue after an independent one");
    if (!tail.empty() && !is_multiplicatively_independent(tail))
        throw std::domain_error("not a normal form: trailing eigenvalues are not multiplicatively independent");
    return out;
}

}  // namespace detail

// Semisimple normal form diag(1, torsion..., independent...).
inline NormalFormLayout m1_layout(const SpectralData& s) {
    if (s.blocks.empty() || !s.is_semisimple() || !s.blocks.front().eigenvalue.is_one())
        throw std::domain_error("not an M1 normal form: expected diag(1, lambda_1, ..., lambda_n)");
    std::vector<Eigenvalue> v;
    for (const auto& b : s.blocks) v.push_back(b.eigenvalue);
    return detail::layout_from_diagonal(v, 1, false);
}

// Jordan normal form: one unipotent 2-block on (x0, x1) then diag(mu_2, ..., mu_n).
inline NormalFormLayout m2_layout(const SpectralData& s) {
    if (s.blocks.empty() || s.blocks.front().size != 2 || !s.blocks.front().eigenvalue.is_one())
        throw std::domain_error("not an M2 normal form: expected a leading unipotent block of size 2");
    std::vector<Eigenvalue> v{Eigenvalue::one(), Eigenvalue::one()};
    for (std::size_t i = 1; i < s.blocks.size(); ++i) {
        if (s.blocks[i].size != 1) throw std::domain_error("not an M2 normal form: extra Jordan block of size >= 2");
        v.push_back(s.blocks[i].eigenvalue);
    }
    return detail::layout_from_diagonal(v, 2, true);
}

// Exponents of the independent variables x_{k+1}..x_n, as a monomial.
inline MultiIndex independent_part(const MultiIndex& m, std::size_t k) {
    MultiIndex q = MultiIndex::zero(m.n_vars());
    for (std::size_t i = k + 1; i < m.n_vars(); ++i) q.exponents[i] = m[i];
    return q;
}

// ---------------------------------------------------------------------------
// Semisimple case.

struct WeightComponent {
    std::vector<std::uint32_t> character;  // exponents of x_{k+1}..x_n
    BigInt torsion_index = 0;              // torsion character as a multiple of 1/torsion_modulus
    BigInt torsion_modulus = 1;
    std::vector<MultiIndex> basis;
};

inline std::vector<WeightComponent> weight_decomposition(const SpectralData& s, std::uint32_t d) {
    const auto layout = m1_layout(s);
    const std::size_t n_vars = s.dimension();
    std::vector<Eigenvalue> torsion;
    for (std::size_t i = 0; i <= layout.k; ++i) torsion.push_back(s.blocks[i].eigenvalue);

    std::map<std::pair<std::vector<std::uint32_t>, BigInt>, std::vector<MultiIndex>> groups;
    for (const auto& m : monomials_of_degree(n_vars, d)) {
        std::vector<std::uint32_t> ch(m.exponents.begin() + static_cast<std::ptrdiff_t>(layout.k + 1), m.exponents.end());
        const std::vector<BigInt> e(m.exponents.begin(), m.exponents.begin() + static_cast<std::ptrdiff_t>(layout.k + 1));
        const Eigenvalue t = eigen_mul_pow(torsion, e);
        const BigInt index = t.torsion().exponent() * (layout.torsion_lcm / t.torsion().order());
        groups[{std::move(ch), index}].push_back(m);
    }
    std::vector<WeightComponent> out;
    for (auto& [key, basis] : groups) out.push_back({key.first, key.second, layout.torsion_lcm, std::move(basis)});
    return out;
}

struct M1Generator {
    PolynomialQ p;  // in x0..x_k
    MultiIndex q;   // monomial in x_{k+1}..x_n
};

namespace detail {

// Projections of span(w) onto the classes of `key`, each reduced to an RREF basis.
template <typename Key>
std::map<MultiIndex, std::vector<PolynomialQ>, GradedLex> project_by(const MonomialBasis& mb,
                                                                     const std::vector<PolynomialQ>& w, Key key) {
    std::map<MultiIndex, std::vector<PolynomialQ>, GradedLex> parts;
    for (const auto& g : mb.span_basis(w)) {
        std::map<MultiIndex, PolynomialQ, GradedLex> split;
        for (const auto& [m, c] : g.terms()) split.try_emplace(key(m), g.n_vars()).first->second.add_term(m, c);
        for (auto& [k, part] : split) parts[k].push_back(std::move(part));
    }
    for (auto& [k, polys] : parts) polys = mb.span_basis(polys);
    return parts;
}

}  // namespace detail

inline std::vector<M1Generator> m1_invariant_structure(const SpectralData& s, const std::vector<PolynomialQ>& w) {
    const auto layout = m1_layout(s);
    if (!invariant_subspace_test(s, w)) throw std::domain_error("subspace is not invariant");
    const MonomialBasis mb(s.dimension(), common_degree(w));
    std::vector<M1Generator> out;
    for (const auto& [q, basis] : detail::project_by(mb, w, [&](const MultiIndex& m) { return independent_part(m, layout.k); }))
        for (const auto& b : basis) out.push_back({b.divide_monomial(q), q});
    return out;
}

// ---------------------------------------------------------------------------
// Jordan case.

struct ChainDecomposition {
    PolynomialQ chain_top;
    std::vector<PolynomialQ> chain;  // R_0 .. R_m with T R_i = R_i + R_{i-1}
    MultiIndex q;                    // common monomial in x_{k+1}..x_n
    PolynomialQ base_poly;           // R_0, monic, free of x1
    BigInt iterate = 1;              // T = scalar^{-1} * (f^*)^iterate
    Eigenvalue scalar;
};

class ReducibleSubspace : public std::domain_error {
public:
    explicit ReducibleSubspace(std::vector<std::size_t> sizes)
        : std::domain_error(message(sizes)), block_sizes_(std::move(sizes)) {}
    const std::vector<std::size_t>& block_sizes() const { return block_sizes_; }

private:
    static std::string message(const std::vector<std::size_t>& sizes) {
        std::string s = "reducible: nilpotent part has Jordan blocks of sizes [";
        for (std::size_t i = 0; i < sizes.size(); ++i) s += (i ? ", " : "") + std::to_string(sizes[i]);
        return s + "]";
    }
    std::vector<std::size_t> block_sizes_;
};

namespace detail {

// Jordan chains (top vector, length) of a nilpotent matrix acting on column vectors.
inline std::vector<std::pair<std::vector<Rational>, std::size_t>> nilpotent_chains(const QMatrix& n) {
    const std::size_t r = n.rows();
    std::vector<QMatrix> powers{QMatrix::identity(r)};
    while (!powers.back().is_zero()) {
        powers.push_back(powers.back() * n);
        if (powers.size() > r + 1) throw std::logic_error("operator is not nilpotent");
    }
    const std::size_t index = powers.size() - 1;
    auto apply = [](const QMatrix& a, const std::vector<Rational>& v) {
        std::vector<Rational> out(a.rows(), Rational(0));
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * v[j];
        return out;
    };
    std::vector<std::pair<std::vector<Rational>, std::size_t>> chains;
    for (std::size_t j = index; j >= 1; --j) {
        std::vector<std::vector<Rational>> gens;
        const QMatrix lower = nullspace(powers[j - 1]);
        for (std::size_t i = 0; i < lower.rows(); ++i) gens.push_back(lower.row_vector(i));
        for (const auto& [top, len] : chains) gens.push_back(apply(powers[len - j], top));
        const QMatrix level = nullspace(powers[j]);
        for (std::size_t i = 0; i < level.rows(); ++i) {
            const auto u = level.row_vector(i);
            if (!gens.empty() && in_row_space(QMatrix::from_rows(gens, r), u)) continue;
            gens.push_back(u);
            chains.push_back({u, j});
        }
    }
    return chains;
}

struct JordanSetup {
    NormalFormLayout layout;
    PullbackAction iterate_action;
    MonomialBasis mb;
    std::map<MultiIndex, std::vector<PolynomialQ>, GradedLex> classes;
};

inline JordanSetup jordan_setup(const SpectralData& s, const std::vector<PolynomialQ>& w) {
    const auto layout = m2_layout(s);
    const auto action = pullback_action(s);
    if (!invariant_subspace_test(action, w)) throw std::domain_error("subspace is not invariant");
    MonomialBasis mb(s.dimension(), common_degree(w));
    auto classes = project_by(mb, w, [&](const MultiIndex& m) { return independent_part(m, layout.k); });
    return {layout, power(action, layout.torsion_lcm), std::move(mb), std::move(classes)};
}

inline std::vector<ChainDecomposition> chains_in_class(const JordanSetup& js, const MultiIndex& q,
                                                       const std::vector<PolynomialQ>& basis) {
    const QMatrix span = js.mb.matrix(basis);
    const std::size_t r = basis.size();
    auto coords = [&](const PolynomialQ& p) {
        auto c = solve_row_combination(span, js.mb.coordinates(p));
        if (!c) throw std::logic_error("iterate does not preserve the weight class");
        return *c;
    };
    auto to_poly = [&](const std::vector<Rational>& c) {
        PolynomialQ p(js.mb.n_vars());
        for (std::size_t i = 0; i < r; ++i) p += basis[i].scaled(c[i]);
        return p;
    };
    const Eigenvalue scalar = monomial_character(js.iterate_action, basis.front().leading().first);
    QMatrix nil(r, r);
    for (std::size_t j = 0; j < r; ++j) {
        const PolynomialQ image = linear_substitute(basis[j], js.iterate_action.unipotent) - basis[j];
        const auto c = coords(image);
        for (std::size_t i = 0; i < r; ++i) nil(i, j) = c[i];
    }
    std::vector<ChainDecomposition> out;
    for (const auto& [top, len] : nilpotent_chains(nil)) {
        std::vector<std::vector<Rational>> vecs(len);
        vecs[len - 1] = top;
        for (std::size_t i = len - 1; i > 0; --i) {
            vecs[i - 1].assign(r, Rational(0));
            for (std::size_t a = 0; a < r; ++a)
                for (std::size_t b = 0; b < r; ++b) vecs[i - 1][a] += nil(a, b) * vecs[i][b];
        }
        ChainDecomposition cd;
        const PolynomialQ r0 = to_poly(vecs[0]);
        const Rational norm = 1 / r0.leading().second;
        for (const auto& v : vecs) cd.chain.push_back(to_poly(v).scaled(norm));
        cd.chain_top = cd.chain.back();
        cd.base_poly = cd.chain.front();
        cd.q = q;
        cd.iterate = js.layout.torsion_lcm;
        cd.scalar = scalar;
        if (cd.base_poly.uses_variable(1)) throw std::logic_error("chain base polynomial depends on x1");
        out.push_back(std::move(cd));
    }
    return out;
}

}  // namespace detail

// Splits an invariant subspace into irreducible Jordan chains of the iterate.
inline std::vector<ChainDecomposition> m2_chain_decomposition(const SpectralData& s, const std::vector<PolynomialQ>& w) {
    const auto js = detail::jordan_setup(s, w);
    std::vector<ChainDecomposition> out;
    for (const auto& [q, basis] : js.classes)
        for (auto& c : detail::chains_in_class(js, q, basis)) out.push_back(std::move(c));
    return out;
}

inline ChainDecomposition m2_irreducible_chain(const SpectralData& s, const std::vector<PolynomialQ>& w) {
    auto chains = m2_chain_decomposition(s, w);
    if (chains.size() != 1) {
        std::vector<std::size_t> sizes;
        for (const auto& c : chains) sizes.push_back(c.chain.size());
        throw ReducibleSubspace(std::move(sizes));
    }
    return std::move(chains.front());
}

// ---------------------------------------------------------------------------
// P(x + r) = P(x) + Q with P a polynomial in x over Q[vars].

struct UnivariateOverRing {
    std::size_t n_vars = 0;
    std::vector<PolynomialQ> coefficients;  // a_0, a_1, ...
};

struct ShiftSolution {
    PolynomialQ q_prime;  // P = q_prime * x + alpha
    PolynomialQ alpha;
    PolynomialQ q;        // P(x + r) - P(x) = r * q_prime
};

inline std::optional<ShiftSolution> shift_equation_solve(const UnivariateOverRing& p, const PolynomialQ& r) {
    if (r.is_zero()) throw std::domain_error("shift must be a nonzero ring element");
    if (r.n_vars() != p.n_vars) throw std::domain_error("shift lives in a different ring");
    std::vector<PolynomialQ> a = p.coefficients;
    while (!a.empty() && a.back().is_zero()) a.pop_back();
    const std::size_t deg = a.size();  // number of coefficients
    // Coefficient of x^i in P(x + r) - P(x), i >= 1: sum_{j > i} C(j, i) a_j r^{j - i}.
    for (std::size_t i = 1; i < deg; ++i) {
        PolynomialQ c(p.n_vars);
        PolynomialQ rp = r;
        BigInt binom = i + 1;  // C(i+1, i)
        for (std::size_t j = i + 1; j < deg; ++j) {
            c += (a[j] * rp).scaled(Rational(binom));
            rp = rp * r;
            binom = binom * (j + 1) / (j + 1 - i);
        }
        if (!c.is_zero()) return std::nullopt;
    }
    if (deg > 2) return std::nullopt;  // unreachable over a domain
    ShiftSolution out{PolynomialQ(p.n_vars), PolynomialQ(p.n_vars), PolynomialQ(p.n_vars)};
    if (deg >= 1) out.alpha = a[0];
    if (deg == 2) out.q_prime = a[1];
    out.q = r * out.q_prime;
    return out;
}

}  // namespace projdyn
