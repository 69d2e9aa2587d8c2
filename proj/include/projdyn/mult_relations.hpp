#pragma once

// Multiplicative relations among eigenvalues and the torsion / independent
// split used by the semisimple normal form.

#include "projdyn/exact_numbers.hpp"
#include "projdyn/lattice.hpp"

#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

namespace projdyn {

struct RelationLattice {
    std::vector<Eigenvalue> values;
    LatticeBasis exact;          // prod v_i^{m_i} = 1
    LatticeBasis up_to_torsion;  // prod v_i^{m_i} is a root of unity
};

struct IndependencePartition {
    std::size_t k_torsion = 0;
    IntMatrix conjugator;  // unimodular
    std::vector<Eigenvalue> transformed;  // transformed[i] = prod_j values[j]^{conjugator(i,j)}
};

// (primes x k) matrix of magnitude exponents.
inline IntMatrix magnitude_exponent_matrix(std::span<const Eigenvalue> values) {
    std::map<BigInt, std::size_t> prime_index;
    for (const auto& v : values)
        for (const auto& [p, e] : v.magnitude().factors()) prime_index.emplace(p, 0);
    std::size_t idx = 0;
    for (auto& [p, i] : prime_index) i = idx++;
    IntMatrix e(prime_index.size(), values.size());
    for (std::size_t j = 0; j < values.size(); ++j)
        for (const auto& [p, exp] : values[j].magnitude().factors()) e(prime_index[p], j) = exp;
    return e;
}

inline RelationLattice relation_lattice(std::span<const Eigenvalue> values) {
    if (values.empty()) throw std::invalid_argument("relation_lattice needs a nonempty list");
    const std::size_t k = values.size();
    RelationLattice out;
    out.values.assign(values.begin(), values.end());
    out.up_to_torsion = kernel_basis(magnitude_exponent_matrix(values));

    // Torsion part: sum m_i a_i (N / n_i) == 0 (mod N) on the up-to-torsion lattice.
    BigInt big_n = 1;
    for (const auto& v : values) big_n = lcm(big_n, v.torsion().order());
    const std::size_t r = out.up_to_torsion.rank();
    if (r == 0) {
        out.exact = {k, IntMatrix(0, k)};
        return out;
    }
    std::vector<BigInt> weight(k);
    for (std::size_t i = 0; i < k; ++i)
        weight[i] = values[i].torsion().exponent() * (big_n / values[i].torsion().order());
    IntMatrix congruence(1, r + 1);
    for (std::size_t b = 0; b < r; ++b) {
        BigInt w = 0;
        for (std::size_t i = 0; i < k; ++i) w += out.up_to_torsion.basis(b, i) * weight[i];
        congruence(0, b) = mod_floor(w, big_n);
    }
    congruence(0, r) = big_n;
    const LatticeBasis lifted = kernel_basis(congruence);
    IntMatrix coeffs(lifted.rank(), r);
    for (std::size_t i = 0; i < lifted.rank(); ++i)
        for (std::size_t b = 0; b < r; ++b) coeffs(i, b) = lifted.basis(i, b);
    out.exact = lattice_from_generators(coeffs * out.up_to_torsion.basis);
    return out;
}

inline bool is_multiplicatively_independent(std::span<const Eigenvalue> values) {
    return relation_lattice(values).exact.is_trivial();
}

// Row i of `a` applied to `values`: prod_j values[j]^{a(i,j)}.
inline std::vector<Eigenvalue> apply_exponent_rows(std::span<const Eigenvalue> values, const IntMatrix& a) {
    if (a.cols() != values.size()) throw std::invalid_argument("exponent matrix width mismatch");
    std::vector<Eigenvalue> out;
    out.reserve(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) out.push_back(eigen_mul_pow(values, a.row(i)));
    return out;
}

inline IndependencePartition independence_partition(std::span<const Eigenvalue> values) {
    if (values.empty()) throw std::invalid_argument("independence_partition needs a nonempty list");
    const auto torsion = kernel_basis(magnitude_exponent_matrix(values));
    IndependencePartition out;
    out.k_torsion = torsion.rank();
    out.conjugator = complete_to_unimodular(torsion.basis);
    out.transformed = apply_exponent_rows(values, out.conjugator);
    return out;
}

}  // namespace projdyn
