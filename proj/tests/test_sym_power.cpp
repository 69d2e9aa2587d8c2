#include "projdyn/sym_power.hpp"
#include "printers.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace projdyn;

namespace {

Eigenvalue q(long num, long den = 1) { return factor_rational(num, den); }
Eigenvalue zeta(long order) { return {RootOfUnity::primitive(order), {}}; }

SpectralData diag(std::vector<Eigenvalue> values) {
    SpectralData s;
    for (auto& v : values) s.blocks.push_back({v, 1});
    s.normalized = true;
    return s;
}

SpectralData m2(std::vector<Eigenvalue> mu) {
    SpectralData s;
    s.blocks.push_back({q(1), 2});
    for (auto& v : mu) s.blocks.push_back({v, 1});
    s.normalized = true;
    return s;
}

PolynomialQ mono(std::vector<std::uint32_t> e, Rational c = 1) {
    const std::size_t n = e.size();
    return {n, MultiIndex(std::move(e)), std::move(c)};
}

PolynomialQ random_form(std::mt19937_64& rng, std::size_t n_vars, std::uint32_t d, int terms) {
    const auto all = monomials_of_degree(n_vars, d);
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    std::uniform_int_distribution<int> coeff(-3, 3);
    PolynomialQ p(n_vars);
    for (int i = 0; i < terms; ++i) p.add_term(all[pick(rng)], coeff(rng));
    if (p.is_zero()) p.add_term(all.front(), 1);
    return p;
}

// Rational pullback for a rational diagonal action, written out term by term.
PolynomialQ diagonal_pullback(const std::vector<Rational>& scale, const PolynomialQ& p) {
    PolynomialQ out(p.n_vars());
    for (const auto& [m, c] : p.terms()) {
        Rational f = c;
        for (std::size_t i = 0; i < m.n_vars(); ++i)
            for (std::uint32_t e = 0; e < m[i]; ++e) f *= scale[i];
        out.add_term(m, f);
    }
    return out;
}

std::size_t binomial(std::size_t n, std::size_t k) {
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

TEST(SymPower, PullbackExamples) {
    const auto unip = pullback_poly(m2({}), mono({0, 2}));
    EXPECT_EQ(unip.as_rational(), mono({2, 0}) + mono({1, 1}, 2) + mono({0, 2}));

    const Eigenvalue lambda = q(5, 3);
    const auto d = pullback_poly(diag({q(1), lambda}), mono({1, 1}));
    ASSERT_EQ(d.parts.size(), 1u);
    EXPECT_EQ(d.parts.begin()->first, lambda);
    EXPECT_EQ(d.parts.begin()->second, mono({1, 1}));

    EXPECT_EQ(pullback_poly(m2({q(1)}), mono({1, 0, 1})).as_rational(), mono({1, 0, 1}));
    EXPECT_THROW(pullback_poly(m2({}), mono({1, 0, 1})), std::domain_error);
}

TEST(SymPower, PullbackWithTorsionIsNotRational) {
    const auto p = pullback_poly(diag({q(1), zeta(3)}), mono({1, 1}) + mono({2, 0}));
    EXPECT_EQ(p.parts.size(), 2u);
    EXPECT_FALSE(p.as_rational());
}

TEST(SymPowerProperty, PullbackIsMultiplicative) {
    std::mt19937_64 rng(61);
    const std::vector<SpectralData> cases{diag({q(1), zeta(4), q(2)}), m2({zeta(3)}), m2({q(3, 2)}), diag({q(1), q(-1), q(5)})};
    for (const auto& s : cases) {
        const auto a = pullback_action(s);
        for (int t = 0; t < 20; ++t) {
            const auto p = random_form(rng, 3, 2, 4);
            const auto r = random_form(rng, 3, 1, 3);
            EXPECT_EQ(pullback(a, p * r), pullback(a, p) * pullback(a, r));
        }
    }
}

TEST(SymPower, WeightDecompositionExamples) {
    const auto lambda = q(2);
    const auto c = weight_decomposition(diag({q(1), q(1), lambda}), 2);
    ASSERT_EQ(c.size(), 3u);
    EXPECT_EQ(c[0].character, std::vector<std::uint32_t>{0});
    EXPECT_EQ(c[0].basis, (std::vector<MultiIndex>{MultiIndex({2, 0, 0}), MultiIndex({1, 1, 0}), MultiIndex({0, 2, 0})}));
    EXPECT_EQ(c[1].character, std::vector<std::uint32_t>{1});
    EXPECT_EQ(c[1].basis, (std::vector<MultiIndex>{MultiIndex({1, 0, 1}), MultiIndex({0, 1, 1})}));
    EXPECT_EQ(c[2].basis, (std::vector<MultiIndex>{MultiIndex({0, 0, 2})}));

    const auto six = weight_decomposition(diag({q(1), q(2), q(3)}), 2);
    EXPECT_EQ(six.size(), 6u);
    for (const auto& w : six) EXPECT_EQ(w.basis.size(), 1u);

    const auto line = weight_decomposition(diag({q(1), q(2)}), 1);
    ASSERT_EQ(line.size(), 2u);
    EXPECT_EQ(line[0].basis, std::vector<MultiIndex>{MultiIndex({1, 0})});
    EXPECT_EQ(line[1].basis, std::vector<MultiIndex>{MultiIndex({0, 1})});
}

TEST(SymPower, WeightDecompositionSplitsTorsionCharacters) {
    // diag(1, -1, 2): x0^2 and x1^2 share a character, x0*x1 does not; likewise x0*x2 and x1*x2 split.
    const auto c = weight_decomposition(diag({q(1), q(-1), q(2)}), 2);
    std::size_t total = 0;
    for (const auto& w : c) {
        total += w.basis.size();
        EXPECT_EQ(w.torsion_modulus, 2);
    }
    EXPECT_EQ(total, 6u);
    EXPECT_EQ(c.size(), 5u);
    EXPECT_THROW(weight_decomposition(diag({q(1), q(2), q(4)}), 2), std::domain_error);
}

TEST(SymPowerProperty, WeightComponentsPartitionAndAreInvariant) {
    const std::vector<SpectralData> cases{diag({q(1), q(2)}), diag({q(1), zeta(3), q(2)}), diag({q(1), q(2), q(3)}),
                                          diag({q(1), q(-1), zeta(4), q(7, 2)})};
    for (const auto& s : cases)
        for (std::uint32_t d = 1; d <= 3; ++d) {
            const auto comps = weight_decomposition(s, d);
            std::size_t total = 0;
            for (const auto& w : comps) {
                total += w.basis.size();
                std::vector<PolynomialQ> gens;
                for (const auto& m : w.basis) gens.push_back(PolynomialQ(s.dimension(), m));
                EXPECT_TRUE(invariant_subspace_test(s, gens));
                EXPECT_EQ(pullback_poly(s, gens.front()).parts.size(), 1u);
            }
            EXPECT_EQ(total, binomial(s.dimension() - 1 + d, d));
        }
}

TEST(SymPower, InvariantSubspaceExamples) {
    const auto s = diag({q(1), q(1), q(2)});
    EXPECT_TRUE(invariant_subspace_test(s, {mono({1, 0, 1}), mono({0, 1, 1})}));
    EXPECT_FALSE(invariant_subspace_test(s, {mono({1, 0, 0}) + mono({0, 0, 1})}));
    EXPECT_TRUE(invariant_subspace_test(m2({}), {mono({2, 0}), mono({1, 1}), mono({0, 2})}));
    EXPECT_FALSE(invariant_subspace_test(m2({}), {mono({0, 2})}));
    EXPECT_THROW(invariant_subspace_test(s, {mono({1, 0, 0}), mono({1, 1, 0})}), std::domain_error);
}

TEST(SymPowerProperty, InvariantIffDirectSumOfProjections) {
    // Independent tail, no torsion: every weight component is a single monomial.
    const std::vector<Rational> scale{1, 2, 3};
    const auto s = diag({q(1), q(2), q(3)});
    std::mt19937_64 rng(62);
    for (std::uint32_t d = 1; d <= 3; ++d) {
        const auto all = monomials_of_degree(3, d);
        const MonomialBasis mb(3, d);
        auto oracle = [&](const std::vector<PolynomialQ>& w) {
            const auto r = rank(mb.matrix(w));
            std::vector<PolynomialQ> with_images = w;
            for (const auto& g : w) with_images.push_back(diagonal_pullback(scale, g));
            return rank(mb.matrix(with_images)) == r;
        };
        auto direct_sum = [&](const std::vector<PolynomialQ>& w) {
            const QMatrix span = row_space_basis(mb.matrix(w));
            for (const auto& g : w)
                for (const auto& [m, c] : g.terms())
                    if (!in_row_space(span, mb.coordinates(PolynomialQ(3, m)))) return false;
            return true;
        };
        for (std::uint32_t mask = 1; mask < (1u << all.size()); ++mask) {
            std::vector<PolynomialQ> w;
            for (std::size_t i = 0; i < all.size(); ++i)
                if (mask >> i & 1u) w.push_back(PolynomialQ(3, all[i]));
            EXPECT_TRUE(invariant_subspace_test(s, w));
            // Glue two monomials: invariant exactly when one of them already lies in W.
            std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
            const std::size_t a = pick(rng), b = pick(rng);
            if (a == b) continue;
            w.push_back(PolynomialQ(3, all[a]) + PolynomialQ(3, all[b]));
            const bool expect = (mask >> a & 1u) || (mask >> b & 1u);
            EXPECT_EQ(invariant_subspace_test(s, w), expect);
            EXPECT_EQ(oracle(w), expect);
            EXPECT_EQ(direct_sum(w), expect);
        }
        for (int t = 0; t < 50; ++t) {
            std::vector<PolynomialQ> w;
            for (int i = 0; i < 2; ++i) w.push_back(random_form(rng, 3, d, 3));
            EXPECT_EQ(invariant_subspace_test(s, w), oracle(w));
            EXPECT_EQ(invariant_subspace_test(s, w), direct_sum(w));
        }
    }
}

TEST(SymPower, M1InvariantStructureExamples) {
    const auto s = diag({q(1), q(1), q(2)});
    const auto a = m1_invariant_structure(s, {mono({1, 0, 1}), mono({0, 1, 1})});
    ASSERT_EQ(a.size(), 2u);
    EXPECT_EQ(a[0].p, mono({1, 0, 0}));
    EXPECT_EQ(a[0].q, MultiIndex({0, 0, 1}));
    EXPECT_EQ(a[1].p, mono({0, 1, 0}));
    EXPECT_EQ(a[1].q, MultiIndex({0, 0, 1}));

    const auto b = m1_invariant_structure(s, {mono({0, 0, 2})});
    ASSERT_EQ(b.size(), 1u);
    EXPECT_EQ(b[0].p, mono({0, 0, 0}));
    EXPECT_EQ(b[0].q, MultiIndex({0, 0, 2}));

    const auto c = m1_invariant_structure(s, {mono({2, 0, 0}) - mono({0, 2, 0})});
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0].p, mono({2, 0, 0}) - mono({0, 2, 0}));
    EXPECT_EQ(c[0].q, MultiIndex::zero(3));

    EXPECT_THROW(m1_invariant_structure(s, {mono({1, 0, 0}) + mono({0, 0, 1})}), std::domain_error);
}

TEST(SymPowerProperty, M1StructureSpansW) {
    std::mt19937_64 rng(63);
    const auto s = diag({q(1), q(-1), q(2), q(3)});
    const auto comps = weight_decomposition(s, 2);
    for (int t = 0; t < 40; ++t) {
        // Random invariant W: random combinations inside two random components.
        std::vector<PolynomialQ> w;
        std::uniform_int_distribution<std::size_t> pick(0, comps.size() - 1);
        std::uniform_int_distribution<int> coeff(-2, 2);
        for (int c = 0; c < 2; ++c) {
            const auto& comp = comps[pick(rng)];
            PolynomialQ g(4);
            for (const auto& m : comp.basis) g.add_term(m, coeff(rng));
            if (!g.is_zero()) w.push_back(g);
        }
        if (w.empty()) continue;
        const auto gens = m1_invariant_structure(s, w);
        std::vector<PolynomialQ> products;
        for (const auto& g : gens) {
            for (std::size_t i = 2; i < 4; ++i) EXPECT_FALSE(g.p.uses_variable(i));
            EXPECT_EQ(g.q[0] + g.q[1], 0u);
            products.push_back(g.p.multiply_monomial(g.q));
        }
        const MonomialBasis mb(4, 2);
        EXPECT_EQ(row_space_basis(mb.matrix(products)), row_space_basis(mb.matrix(w)));
    }
}

TEST(SymPower, M2ChainExamples) {
    const auto c = m2_irreducible_chain(m2({}), {mono({2, 0}), mono({1, 1}), mono({0, 2})});
    ASSERT_EQ(c.chain.size(), 3u);
    EXPECT_EQ(c.base_poly, mono({2, 0}));
    EXPECT_EQ(c.chain[1], mono({1, 1}) + mono({2, 0}, Rational(1, 2)));
    EXPECT_EQ(c.chain_top, mono({0, 2}, Rational(1, 2)));
    EXPECT_FALSE(c.base_poly.uses_variable(1));

    const auto single = m2_irreducible_chain(m2({}), {mono({1, 0})});
    EXPECT_EQ(single.chain.size(), 1u);
    EXPECT_EQ(single.base_poly, mono({1, 0}));

    try {
        m2_irreducible_chain(m2({q(1)}), {mono({1, 0, 0}), mono({0, 0, 1})});
        FAIL() << "expected reducible";
    } catch (const ReducibleSubspace& e) {
        EXPECT_EQ(e.block_sizes(), (std::vector<std::size_t>{1, 1}));
        EXPECT_NE(std::string(e.what()).find("reducible"), std::string::npos);
    }
}

TEST(SymPower, M2ChainUsesTorsionIterate) {
    // mu_2 = -1: f* scales x2 by -1, so the chain is taken for the square.
    const auto s = m2({q(-1), q(2)});
    const auto c = m2_irreducible_chain(s, {mono({1, 0, 1, 0}), mono({0, 1, 1, 0})});
    EXPECT_EQ(c.iterate, 2);
    EXPECT_EQ(c.chain.size(), 2u);
    EXPECT_EQ(c.q, MultiIndex::zero(4));
    EXPECT_EQ(c.base_poly, mono({1, 0, 1, 0}));

    const auto q2 = m2_irreducible_chain(s, {mono({1, 0, 0, 1}), mono({0, 1, 0, 1})});
    EXPECT_EQ(q2.q, MultiIndex({0, 0, 0, 1}));
    EXPECT_EQ(q2.scalar, q(4));
}

TEST(SymPowerProperty, ChainLawOnFullDecomposition) {
    const std::vector<SpectralData> cases{m2({}), m2({q(1)}), m2({zeta(3), q(2)}), m2({q(-1), q(3)}), m2({q(2), q(3)})};
    for (const auto& s : cases)
        for (std::uint32_t d = 1; d <= 3; ++d) {
            const auto all = monomials_of_degree(s.dimension(), d);
            std::vector<PolynomialQ> w;
            for (const auto& m : all) w.push_back(PolynomialQ(s.dimension(), m));
            const auto chains = m2_chain_decomposition(s, w);
            const auto it = power(pullback_action(s), chains.front().iterate);
            std::size_t total = 0;
            std::vector<PolynomialQ> everything;
            for (const auto& c : chains) {
                total += c.chain.size();
                EXPECT_FALSE(c.base_poly.uses_variable(1));
                EXPECT_EQ(c.base_poly.leading().second, 1);
                for (std::size_t i = 0; i < c.chain.size(); ++i) {
                    ScaledPolynomial expect{s.dimension(), {}};
                    expect.add(c.scalar, i == 0 ? c.chain[0] : c.chain[i] + c.chain[i - 1]);
                    EXPECT_EQ(pullback(it, c.chain[i]), expect);
                    everything.push_back(c.chain[i]);
                }
            }
            EXPECT_EQ(total, all.size());
            EXPECT_EQ(rank(MonomialBasis(s.dimension(), d).matrix(everything)), all.size());
        }
}

TEST(SymPower, ShiftEquation) {
    const std::size_t n = 2;
    const PolynomialQ a1 = mono({1, 0}) + mono({0, 1}, 3);
    const PolynomialQ a0 = mono({2, 0});
    const PolynomialQ r = mono({0, 1});
    const auto lin = shift_equation_solve({n, {a0, a1}}, r);
    ASSERT_TRUE(lin);
    EXPECT_EQ(lin->q_prime, a1);
    EXPECT_EQ(lin->alpha, a0);
    EXPECT_EQ(lin->q, r * a1);

    const PolynomialQ one = PolynomialQ::constant(n, 1);
    EXPECT_FALSE(shift_equation_solve({n, {PolynomialQ(n), PolynomialQ(n), one}}, one));

    const auto c = shift_equation_solve({n, {PolynomialQ::constant(n, 5)}}, PolynomialQ::constant(n, 3));
    ASSERT_TRUE(c);
    EXPECT_TRUE(c->q_prime.is_zero());
    EXPECT_EQ(c->alpha, PolynomialQ::constant(n, 5));
    EXPECT_THROW(shift_equation_solve({n, {one}}, PolynomialQ(n)), std::domain_error);
}
