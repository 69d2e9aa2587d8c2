// Walks through the library on a few small automorphisms of P^2 and P^3.

#include "projdyn/cone.hpp"
#include "projdyn/monomial_dynamics.hpp"
#include "projdyn/normal_form.hpp"

#include <iostream>

using namespace projdyn;

int main() {
    // Relations among -1, 2, 8: (2, 0, 0) and (0, 3, -1).
    const std::vector<Eigenvalue> values{factor_rational(-1), factor_rational(2), factor_rational(8)};
    const auto lattice = relation_lattice(values);
    std::cout << "relation lattice of (-1, 2, 8), rank " << lattice.exact.rank() << '\n';
    for (std::size_t i = 0; i < lattice.exact.rank(); ++i) {
        std::cout << "  ";
        for (const auto& x : lattice.exact.basis.row(i)) std::cout << to_string(x) << ' ';
        std::cout << '\n';
    }

    // diag(1, -1, 2, 8) is conjugate to a normal form with one torsion eigenvalue.
    const QMatrix d{{1, 0, 0, 0}, {0, -1, 0, 0}, {0, 0, 2, 0}, {0, 0, 0, 8}};
    const auto nf = classify_automorphism(jordan_data_rational(d));
    std::cout << "diag(1, -1, 2, 8): case " << to_string(nf.kind) << ", k = " << nf.k << ", target";
    for (const auto& b : nf.target.blocks) std::cout << ' ' << to_string(b.eigenvalue);
    std::cout << '\n';

    // Invariant quadrics of the normal form and their cone certificate.
    const auto comps = weight_decomposition(nf.target, 2);
    std::cout << comps.size() << " weight components in degree 2\n";
    // x0*x3 + x2*x3 lies in one weight space (x0 and x2 both have eigenvalue 1).
    PolynomialQ g(4, MultiIndex({1, 0, 0, 1}));
    g.add_term(MultiIndex({0, 0, 1, 1}), 1);
    const std::vector<PolynomialQ> w{g, PolynomialQ(4, MultiIndex({0, 2, 0, 0}))};
    const auto cone = cone_structure(nf, w, 2);
    for (std::size_t i = 0; i < cone.generators.size(); ++i)
        std::cout << "  generator " << to_string(cone.generators[i]) << " = " << to_string(cone.monomial_factors[i])
                  << " * (" << to_string(cone.stripped_generators[i]) << ")\n";

    // Degree growth of monomial maps against the spectral prediction.
    for (const IntMatrix& a : {IntMatrix{{1, 1}, {0, 1}}, IntMatrix{{2, 1}, {1, 1}}, IntMatrix{{0, 1}, {-1, 0}}}) {
        const auto degrees = degree_sequence(a, 12);
        std::cout << "degrees";
        for (std::size_t i = 0; i < 6; ++i) std::cout << ' ' << to_string(degrees[i]);
        std::cout << " ...  predicted " << to_string(predicted_growth(a)) << ", observed "
                  << to_string(empirical_growth(degrees)) << '\n';
    }
}
