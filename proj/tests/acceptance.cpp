// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "growth_suite.hpp"
#include "oracles.hpp"
#include "projdyn/cone.hpp"
#include "projdyn/monomial_dynamics.hpp"
#include "projdyn/mult_relations.hpp"
#include "projdyn/normal_form.hpp"
#include "projdyn/spectral.hpp"
#include "projdyn/sym_power.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

using namespace projdyn;

namespace {

struct Outcome {
    std::size_t failures = 0;
    std::size_t cases = 0;
    std::string note;
};

bool report(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.failures = 1;
        o.note = std::string("exception: ") + e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = limit_s <= 0 || s < limit_s;
    const bool pass = o.failures == 0 && in_time;
    std::printf("criterion %d %s: %s (%zu cases, %zu failures, %.2f s", id, title, pass ? "PASS" : "FAIL", o.cases,
                o.failures, s);
    if (limit_s > 0) std::printf(", limit %.0f s", limit_s);
    if (!o.note.empty()) std::printf(", %s", o.note.c_str());
    std::printf(")\n");
    std::fflush(stdout);
    return pass;
}

Eigenvalue q(long num, long den = 1) { return factor_rational(num, den); }

std::vector<Eigenvalue> random_tuple(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> len_d(1, 4);
    std::vector<Eigenvalue> v;
    for (int i = len_d(rng); i > 0; --i) v.push_back(oracle::random_eigenvalue(rng, 6, 2));
    return v;
}

std::size_t binomial(std::size_t n, std::size_t k) {
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// ---------------------------------------------------------------------------

Outcome relation_lattice_vs_box() {
    std::mt19937_64 rng(1001);
    Outcome o;
    for (int t = 0; t < 200; ++t, ++o.cases) {
        const auto v = random_tuple(rng);
        const auto lat = relation_lattice(v).exact;
        const auto found = oracle::box_relations(v, 5);
        std::set<std::vector<std::int64_t>> found_set(found.begin(), found.end());
        bool ok = true;
        for (const auto& m : found) {
            const std::vector<BigInt> b(m.begin(), m.end());
            ok = ok && lattice_contains(lat, b);
        }
        for (std::size_t i = 0; i < lat.rank(); ++i) {
            std::vector<std::int64_t> row;
            bool fits = true;
            for (const auto& x : lat.basis.row(i)) {
                fits = fits && abs(x) <= 5;
                if (fits) row.push_back(to_int64(x));
            }
            if (fits) ok = ok && found_set.contains(row);
        }
        o.failures += !ok;
    }
    return o;
}

Outcome partition_soundness() {
    std::mt19937_64 rng(1002);
    Outcome o;
    for (int t = 0; t < 100; ++t, ++o.cases) {
        const auto v = random_tuple(rng);
        const auto p = independence_partition(v);
        bool ok = is_unimodular(p.conjugator) && p.transformed == apply_exponent_rows(v, p.conjugator);
        for (std::size_t i = 0; i < p.k_torsion; ++i) ok = ok && is_root_of_unity(p.transformed[i]).has_value();
        const std::vector<Eigenvalue> tail(p.transformed.begin() + static_cast<std::ptrdiff_t>(p.k_torsion), p.transformed.end());
        if (!tail.empty()) {
            ok = ok && relation_lattice(tail).exact.is_trivial();
            ok = ok && oracle::box_relations(tail, 4).empty();
        }
        o.failures += !ok;
    }
    return o;
}

std::optional<int> explicit_order(const std::array<std::int64_t, 9>& a, int limit) {
    std::array<std::int64_t, 9> p = a;
    const std::array<std::int64_t, 9> id{1, 0, 0, 0, 1, 0, 0, 0, 1};
    for (int m = 1; m <= limit; ++m) {
        if (p == id) return m;
        std::array<std::int64_t, 9> next{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) next[3 * i + j] += p[3 * i + k] * a[3 * k + j];
        p = next;
    }
    return std::nullopt;
}

Outcome quasi_unipotent_exhaustive() {
    Outcome o;
    std::array<std::int64_t, 9> a{};
    for (int code = 0; code < 19683; ++code) {
        int c = code;
        for (auto& x : a) {
            x = c % 3 - 1;
            c /= 3;
        }
        const std::int64_t det = a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
                                 a[2] * (a[3] * a[7] - a[4] * a[6]);
        if (det != 1 && det != -1) continue;
        ++o.cases;
        IntMatrix m(3, 3);
        for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = a[i];
        const auto r = quasi_unipotent_test(m);
        const auto ord = explicit_order(a, 12);
        const bool finite = r.kind == QuasiUnipotentResult::Kind::FiniteOrder;
        o.failures += finite != ord.has_value() || (ord && r.order != *ord);
    }
    return o;
}

Outcome growth_end_to_end() {
    Outcome o;
    std::size_t classes[3] = {0, 0, 0};
    for (const auto& c : suite::growth_cases()) {
        ++o.cases;
        const auto predicted = predicted_growth(c.a);
        const auto empirical = empirical_growth(degree_sequence(c.a, 12));
        bool ok = tag(predicted) == tag(empirical);
        if (ok && predicted.kind == GrowthClass::Kind::Exponential)
            ok = std::abs(empirical.rate - predicted.rate) <= 0.15 * predicted.rate;
        ++classes[static_cast<int>(predicted.kind)];
        if (!ok) {
            o.note += c.name + " ";
            ++o.failures;
        }
    }
    if (o.cases < 20 || !classes[0] || !classes[1] || !classes[2]) {
        ++o.failures;
        o.note += "suite does not cover all classes";
    }
    return o;
}

Outcome weight_decomposition_exhaustive() {
    Outcome o;
    const std::vector<Eigenvalue> independent{q(2), q(3), q(5)};
    for (std::size_t n = 1; n <= 3; ++n) {
        SpectralData s;
        s.normalized = true;
        s.blocks.push_back({q(1), 1});
        for (std::size_t i = 0; i < n; ++i) s.blocks.push_back({independent[i], 1});
        const auto action = pullback_action(s);
        for (std::uint32_t d = 1; d <= 4; ++d) {
            ++o.cases;
            const auto comps = weight_decomposition(s, d);
            std::set<std::vector<std::uint32_t>> seen;
            std::size_t total = 0;
            bool ok = true;
            std::map<MultiIndex, std::size_t, GradedLex> component_of;
            for (std::size_t c = 0; c < comps.size(); ++c) {
                std::vector<PolynomialQ> gens;
                for (const auto& m : comps[c].basis) {
                    ok = ok && seen.insert(m.exponents).second;
                    component_of[m] = c;
                    gens.emplace_back(n + 1, m);
                    ++total;
                }
                ok = ok && invariant_subspace_test(action, gens);
            }
            ok = ok && total == binomial(n + d, d) && seen.size() == total;

            if (n <= 2 && d <= 3) {
                const auto all = monomials_of_degree(n + 1, d);
                const MonomialBasis mb(n + 1, d);
                for (std::uint32_t mask = 1; mask < (1u << all.size()); ++mask) {
                    std::vector<PolynomialQ> w;
                    for (std::size_t i = 0; i < all.size(); ++i)
                        if (mask >> i & 1u) w.emplace_back(n + 1, all[i]);
                    // Sum of weight projections of W.
                    std::vector<PolynomialQ> projections;
                    for (const auto& g : w)
                        for (std::size_t c = 0; c < comps.size(); ++c) {
                            auto part = g.filter([&](const MultiIndex& m) { return component_of.at(m) == c; });
                            if (!part.is_zero()) projections.push_back(part);
                        }
                    ok = ok && invariant_subspace_test(action, w) &&
                         row_space_basis(mb.matrix(projections)) == row_space_basis(mb.matrix(w));
                }
            }
            o.failures += !ok;
        }
    }
    return o;
}

// Builds an M2 normal form on P^n and an irreducible invariant subspace from
// the chain template: top = Q * sum_j P_j x1^j with P_j in the vertex variables.
Outcome m2_chain_extraction() {
    std::mt19937_64 rng(1006);
    Outcome o;
    std::size_t longest = 0;
    const std::vector<Eigenvalue> torsion_pool{q(-1), Eigenvalue(RootOfUnity::primitive(3), {}),
                                               Eigenvalue(RootOfUnity::primitive(4), {}), q(1)};
    const std::vector<Eigenvalue> independent_pool{q(2), q(3), q(5, 7)};
    while (o.cases < 50) {
        std::uniform_int_distribution<std::size_t> n_d(1, 3), d_d(1, 4);
        const std::size_t n = n_d(rng);
        const std::uint32_t d = static_cast<std::uint32_t>(d_d(rng));
        const std::size_t k = std::uniform_int_distribution<std::size_t>(1, n)(rng);
        SpectralData s;
        s.normalized = true;
        s.blocks.push_back({q(1), 2});
        for (std::size_t j = 2; j <= n; ++j) {
            const auto& pool = j <= k ? torsion_pool : independent_pool;
            s.blocks.push_back({j <= k ? pool[rng() % pool.size()] : pool[j - k - 1], 1});
        }
        const std::size_t vars = n + 1;
        const auto action = pullback_action(s);

        // Q: monomial in x_{k+1}..x_n.
        std::vector<std::uint32_t> qe(vars, 0);
        std::uint32_t qdeg = 0;
        for (std::size_t i = k + 1; i < vars; ++i) {
            const std::uint32_t e = static_cast<std::uint32_t>(rng() % (d - qdeg + 1));
            qe[i] = e;
            qdeg += e;
            if (qdeg == d) break;
        }
        const MultiIndex qm(qe);
        const std::uint32_t e = d - qdeg;
        const std::uint32_t m = static_cast<std::uint32_t>(rng() % (e + 1));

        // P_j of degree e - j in x0, x2..xk, all sharing one torsion character.
        std::vector<std::size_t> vertex{0};
        for (std::size_t i = 2; i <= k && i < vars; ++i) vertex.push_back(i);
        std::optional<Eigenvalue> chi;
        PolynomialQ top(vars);
        bool have_top_term = false;
        for (std::uint32_t j = 0; j <= m; ++j) {
            for (const auto& mono : monomials_of_degree(vertex.size(), e - j)) {
                if (rng() % 2) continue;
                std::vector<std::uint32_t> full(vars, 0);
                for (std::size_t a = 0; a < vertex.size(); ++a) full[vertex[a]] = mono[a];
                full[1] = j;
                for (std::size_t i = 0; i < vars; ++i) full[i] += qm[i];
                const MultiIndex mi(full);
                const Eigenvalue c = monomial_character(action, mi);
                if (!chi) chi = c;
                if (c != *chi) continue;
                const long coeff = static_cast<long>(rng() % 7) - 3;
                if (coeff == 0) continue;
                top.add_term(mi, coeff);
                have_top_term = have_top_term || j == m;
            }
        }
        if (!have_top_term) continue;  // template requires P_m != 0

        // W = cyclic span of top under f^L.
        BigInt lcm_order = 1;
        for (const auto& b : s.blocks)
            if (auto ord = is_root_of_unity(b.eigenvalue)) lcm_order = lcm(lcm_order, *ord);
        const auto it = power(action, lcm_order);
        std::vector<PolynomialQ> w{top};
        while (true) {
            const PolynomialQ next = linear_substitute(w.back(), it.unipotent) - w.back();
            if (next.is_zero()) break;
            w.push_back(next);
        }
        ++o.cases;
        const auto chain = m2_irreducible_chain(s, w);
        bool ok = chain.chain.size() == w.size() && !chain.base_poly.uses_variable(1);
        const auto iterate = power(action, chain.iterate);
        for (std::size_t i = 0; i < chain.chain.size(); ++i) {
            ScaledPolynomial expect{vars, {}};
            expect.add(chain.scalar, i == 0 ? chain.chain[0] : chain.chain[i] + chain.chain[i - 1]);
            ok = ok && pullback(iterate, chain.chain[i]) == expect;
        }
        const MonomialBasis mb(vars, d);
        ok = ok && row_space_basis(mb.matrix(chain.chain)) == row_space_basis(mb.matrix(w));
        ok = ok && chain.q == qm;
        longest = std::max(longest, chain.chain.size());
        o.failures += !ok;
    }
    o.note = "longest chain " + std::to_string(longest);
    return o;
}

Outcome cone_certificates() {
    std::mt19937_64 rng(1007);
    Outcome o;
    const std::vector<Eigenvalue> pool{q(1), q(-1), Eigenvalue(RootOfUnity::primitive(3), {}), q(2), q(3), q(4), q(6), q(5, 2)};
    while (o.cases < 50) {
        SpectralData s;
        s.normalized = true;
        s.blocks.push_back({q(1), 1});
        for (int i = 0; i < 4; ++i) s.blocks.push_back({pool[rng() % pool.size()], 1});
        const auto r = classify_automorphism(s);
        if (r.kind != NormalFormResult::Case::M1) continue;
        const std::uint32_t d = 2 + static_cast<std::uint32_t>(rng() % 2);
        const auto comps = weight_decomposition(r.target, d);
        std::vector<PolynomialQ> w;
        for (int g = 0; g < 3; ++g) {
            PolynomialQ p(5);
            for (const auto& m : comps[rng() % comps.size()].basis) p.add_term(m, static_cast<long>(rng() % 5) - 2);
            if (!p.is_zero()) w.push_back(p);
        }
        if (w.empty()) continue;
        ++o.cases;
        const auto c = cone_structure(r, w, d);
        bool ok = c.generators.size() == c.stripped_generators.size();
        for (std::size_t i = 0; i < c.stripped_generators.size(); ++i) {
            for (std::size_t v = r.k + 1; v < 5; ++v) ok = ok && !c.stripped_generators[i].uses_variable(v);
            ok = ok && c.stripped_generators[i].multiply_monomial(c.monomial_factors[i]) == c.generators[i];
        }
        const MonomialBasis mb(5, d);
        ok = ok && row_space_basis(mb.matrix(c.generators)) == row_space_basis(mb.matrix(w));
        o.failures += !ok;
    }
    return o;
}

Outcome homogenization_functoriality() {
    std::mt19937_64 rng(1008);
    std::uniform_int_distribution<int> entry(-3, 3);
    auto random_unimodular = [&](std::size_t n) {
        while (true) {
            IntMatrix a(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) a(i, j) = entry(rng);
            if (is_unimodular(a)) return a;
        }
    };
    Outcome o;
    for (int t = 0; t < 100; ++t, ++o.cases) {
        const std::size_t n = t % 2 ? 3 : 2;
        const auto a = random_unimodular(n);
        const auto b = random_unimodular(n);
        o.failures += !(normalize(compose(homogenize(a), homogenize(b))) == homogenize(a * b));
    }
    return o;
}

}  // namespace

int main() {
    bool all = true;
    all &= report(1, "relation lattice vs exhaustive box search", 10, relation_lattice_vs_box);
    all &= report(2, "semisimple partition soundness", 10, partition_soundness);
    all &= report(3, "quasi-unipotent test vs explicit powering (3x3, entries -1..1)", 60, quasi_unipotent_exhaustive);
    all &= report(4, "growth oracle end to end", 30, growth_end_to_end);
    all &= report(5, "weight decomposition of degree-d forms", 60, weight_decomposition_exhaustive);
    all &= report(6, "Jordan chain extraction", 0, m2_chain_extraction);
    all &= report(7, "cone certificates on P^4", 0, cone_certificates);
    all &= report(8, "monomial homogenization functoriality", 0, homogenization_functoriality);
    return all ? 0 : 1;
}
