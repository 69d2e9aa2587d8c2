#pragma once

// Cone certificates for invariant subspaces: vertex and base coordinate sets,
// generators split as (polynomial in vertex variables) x (monomial).

#include "projdyn/normal_form.hpp"
#include "projdyn/sym_power.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace projdyn {

struct StrippedGenerators {
    std::vector<MultiIndex> factors;
    std::vector<PolynomialQ> stripped;
    std::vector<std::size_t> common_vars;  // variables dividing every generator
    std::vector<std::string> warnings;
};

inline StrippedGenerators strip_monomial_factors(const std::vector<PolynomialQ>& w) {
    StrippedGenerators out;
    if (w.empty()) return out;
    const std::size_t n_vars = w.front().n_vars();
    std::vector<bool> common(n_vars, true);
    for (std::size_t g = 0; g < w.size(); ++g) {
        if (w[g].is_zero()) throw std::domain_error("zero generator");
        if (!w[g].is_homogeneous()) throw std::domain_error("generator is not homogeneous");
        const MultiIndex m = w[g].content_monomial();
        out.factors.push_back(m);
        out.stripped.push_back(w[g].divide_monomial(m));
        if (w[g].size() == 1) out.warnings.push_back("generator " + std::to_string(g) + " is a monomial");
        for (std::size_t i = 0; i < n_vars; ++i) common[i] = common[i] && m[i] > 0;
    }
    for (std::size_t i = 0; i < n_vars; ++i)
        if (common[i]) {
            out.common_vars.push_back(i);
            const std::string x = "x" + std::to_string(i);
            out.warnings.push_back("every generator is divisible by " + x + " (possible containment in {" + x + " = 0})");
        }
    return out;
}

struct ConeCertificate {
    NormalFormResult::Case kind = NormalFormResult::Case::M1;
    std::vector<std::size_t> vertex_vanishing;
    std::vector<std::size_t> base_vanishing;
    std::vector<PolynomialQ> generators;  // stripped_generators[i] * monomial_factors[i]
    std::vector<PolynomialQ> stripped_generators;
    std::vector<MultiIndex> monomial_factors;
    std::vector<std::string> warnings;
    std::vector<std::string> caller_asserted;  // geometric hypotheses not checked here
};

inline ConeCertificate cone_structure(const NormalFormResult& r, const std::vector<PolynomialQ>& w, std::uint32_t d) {
    if (r.kind == NormalFormResult::Case::FiniteOrder)
        throw std::domain_error("cone certificates need an infinite-order normal form (M1 or M2)");
    if (common_degree(w) != d) throw std::domain_error("generators do not have degree " + std::to_string(d));
    const std::size_t n_vars = r.target.dimension();
    for (const auto& g : w)
        if (g.n_vars() != n_vars) throw std::domain_error("polynomial variable count does not match the automorphism");
    if (!invariant_subspace_test(r.target, w)) throw std::domain_error("subspace is not invariant");

    ConeCertificate out;
    out.kind = r.kind;
    if (r.kind == NormalFormResult::Case::M1) {
        const auto layout = m1_layout(r.target);
        for (std::size_t i = 0; i < n_vars; ++i) (i <= layout.k ? out.vertex_vanishing : out.base_vanishing).push_back(i);
        for (const auto& g : m1_invariant_structure(r.target, w)) {
            out.stripped_generators.push_back(g.p);
            out.monomial_factors.push_back(g.q);
            out.generators.push_back(g.p.multiply_monomial(g.q));
        }
    } else {
        const auto layout = m2_layout(r.target);
        for (std::size_t i = 0; i < n_vars; ++i)
            (i != 1 && i <= layout.k ? out.vertex_vanishing : out.base_vanishing).push_back(i);
        for (const auto& c : m2_chain_decomposition(r.target, w)) {
            out.stripped_generators.push_back(c.base_poly.divide_monomial(c.q));
            out.monomial_factors.push_back(c.q);
            out.generators.push_back(c.base_poly);
        }
    }
    out.warnings = strip_monomial_factors(w).warnings;
    out.caller_asserted = {"zero locus of the subspace is irreducible",
                           "zero locus is not contained in a coordinate hyperplane"};
    return out;
}

}  // namespace projdyn
