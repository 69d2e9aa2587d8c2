#pragma once

// Hermite and Smith normal forms over Z, saturated kernels and unimodular
// completion. All row operations are tracked so callers get certificates
// (U A = H, U A V = D) they can check by multiplication.

#include "projdyn/bigint.hpp"
#include "projdyn/matrix.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace projdyn {

struct HermiteResult {
    IntMatrix H;  // row-style HNF
    IntMatrix U;  // unimodular, U * A = H
    std::size_t rank = 0;
};

struct SmithResult {
    IntMatrix D;  // diagonal, d1 | d2 | ..., nonnegative
    IntMatrix U;
    IntMatrix V;  // U * A * V = D
};

// Lattice spanned by the rows of `basis`, stored in HNF so that equal
// lattices have equal bases.
struct LatticeBasis {
    std::size_t ambient_dim = 0;
    IntMatrix basis;

    std::size_t rank() const { return basis.rows(); }
    bool is_trivial() const { return basis.rows() == 0; }
    friend bool operator==(const LatticeBasis&, const LatticeBasis&) = default;
};

// Row-style HNF: pivots positive, entries above each pivot reduced into [0, pivot).
inline HermiteResult hermite_normal_form(const IntMatrix& a) {
    IntMatrix h = a;
    IntMatrix u = IntMatrix::identity(a.rows());
    const std::size_t m = a.rows();
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < m; ++c) {
        // Euclid down the column until only row r is nonzero.
        for (std::size_t i = r + 1; i < m; ++i) {
            if (h(i, c) == 0) continue;
            const auto [g, x, y] = extended_gcd(h(r, c), h(i, c));
            const BigInt p = h(r, c) / g, q = h(i, c) / g;
            // [x y; -q p] has determinant 1.
            for (IntMatrix* mat : {&h, &u}) {
                for (std::size_t j = 0; j < mat->cols(); ++j) {
                    const BigInt top = (*mat)(r, j), bot = (*mat)(i, j);
                    (*mat)(r, j) = x * top + y * bot;
                    (*mat)(i, j) = p * bot - q * top;
                }
            }
        }
        if (h(r, c) == 0) continue;
        if (h(r, c) < 0) {
            h.negate_row(r);
            u.negate_row(r);
        }
        for (std::size_t i = 0; i < r; ++i) {
            const BigInt f = floor_div(h(i, c), h(r, c));
            if (f != 0) {
                h.add_row_multiple(i, r, BigInt(-f));
                u.add_row_multiple(i, r, BigInt(-f));
            }
        }
        ++r;
    }
    return {std::move(h), std::move(u), r};
}

inline SmithResult smith_normal_form(const IntMatrix& a) {
    IntMatrix d = a;
    IntMatrix u = IntMatrix::identity(a.rows());
    IntMatrix v = IntMatrix::identity(a.cols());
    const std::size_t m = a.rows(), n = a.cols();

    for (std::size_t t = 0; t < m && t < n; ++t) {
        while (true) {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            std::optional<std::pair<std::size_t, std::size_t>> best;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (d(i, j) != 0 && (!best || abs(d(i, j)) < abs(d(best->first, best->second)))) best = {i, j};
            if (!best) break;
            d.swap_rows(t, best->first);
            u.swap_rows(t, best->first);
            d.swap_cols(t, best->second);
            v.swap_cols(t, best->second);

            bool dirty = false;
            for (std::size_t i = t + 1; i < m; ++i) {
                const BigInt q = floor_div(d(i, t), d(t, t));
                d.add_row_multiple(i, t, BigInt(-q));
                u.add_row_multiple(i, t, BigInt(-q));
                dirty = dirty || d(i, t) != 0;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                const BigInt q = floor_div(d(t, j), d(t, t));
                d.add_col_multiple(j, t, BigInt(-q));
                v.add_col_multiple(j, t, BigInt(-q));
                dirty = dirty || d(t, j) != 0;
            }
            if (dirty) continue;

            // Divisibility: fold an offending row into row t and retry.
            std::optional<std::size_t> offender;
            for (std::size_t i = t + 1; i < m && !offender; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (d(i, j) % d(t, t) != 0) {
                        offender = i;
                        break;
                    }
            if (!offender) break;
            d.add_row_multiple(t, *offender, BigInt(1));
            u.add_row_multiple(t, *offender, BigInt(1));
        }
        if (d(t, t) < 0) {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    return {std::move(d), std::move(u), std::move(v)};
}

inline std::vector<BigInt> smith_invariants(const IntMatrix& a) {
    const auto snf = smith_normal_form(a);
    std::vector<BigInt> out;
    for (std::size_t i = 0; i < a.rows() && i < a.cols(); ++i) out.push_back(snf.D(i, i));
    return out;
}

// Canonical lattice from arbitrary (possibly dependent) generating rows.
inline LatticeBasis lattice_from_generators(const IntMatrix& generators) {
    const auto hnf = hermite_normal_form(generators);
    return {generators.cols(), hnf.H.submatrix_rows(0, hnf.rank)};
}

// Saturated basis of {m in Z^cols : A m = 0}.
inline LatticeBasis kernel_basis(const IntMatrix& a) {
    const auto hnf = hermite_normal_form(a.transpose());
    // Rows of U whose image row in H vanishes span the left kernel of A^T.
    IntMatrix kernel = hnf.U.submatrix_rows(hnf.rank, a.cols() - hnf.rank);
    return lattice_from_generators(kernel);
}

inline bool lattice_contains(const LatticeBasis& lattice, std::span<const BigInt> v) {
    if (v.size() != lattice.ambient_dim) throw std::invalid_argument("lattice membership dimension mismatch");
    IntMatrix extended(lattice.rank() + 1, lattice.ambient_dim);
    for (std::size_t i = 0; i < lattice.rank(); ++i)
        for (std::size_t j = 0; j < lattice.ambient_dim; ++j) extended(i, j) = lattice.basis(i, j);
    for (std::size_t j = 0; j < lattice.ambient_dim; ++j) extended(lattice.rank(), j) = v[j];
    return lattice_from_generators(extended) == lattice;
}

inline bool is_saturated(const LatticeBasis& lattice) {
    for (const auto& s : smith_invariants(lattice.basis))
        if (s != 1) return false;
    return true;
}

namespace detail {

// Greedy attempt with standard basis vectors; keeps the completion readable
// (and the identity when the rows are already coordinate vectors).
inline std::optional<IntMatrix> complete_with_unit_vectors(const IntMatrix& rows) {
    const std::size_t r = rows.rows(), n = rows.cols();
    std::vector<std::size_t> chosen;
    for (std::size_t j = 0; j < n && r + chosen.size() < n; ++j) {
        IntMatrix trial(r + chosen.size() + 1, n);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t c = 0; c < n; ++c) trial(i, c) = rows(i, c);
        for (std::size_t k = 0; k < chosen.size(); ++k) trial(r + k, chosen[k]) = 1;
        trial(r + chosen.size(), j) = 1;
        bool saturated = true;
        std::size_t nonzero = 0;
        for (const auto& s : smith_invariants(trial)) {
            if (s != 0) ++nonzero;
            if (s != 1) saturated = false;
        }
        if (saturated && nonzero == trial.rows()) chosen.push_back(j);
    }
    if (r + chosen.size() != n) return std::nullopt;
    IntMatrix out(n, n);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t c = 0; c < n; ++c) out(i, c) = rows(i, c);
    for (std::size_t k = 0; k < chosen.size(); ++k) out(r + k, chosen[k]) = 1;
    return out;
}

}  // namespace detail

// n x n unimodular matrix whose first r rows are `rows`.
inline IntMatrix complete_to_unimodular(const IntMatrix& rows) {
    const std::size_t r = rows.rows(), n = rows.cols();
    if (r > n) throw std::domain_error("more rows than columns cannot be completed");
    const auto invariants = smith_invariants(rows);
    for (std::size_t i = 0; i < invariants.size(); ++i) {
        if (invariants[i] == 0)
            throw std::domain_error("rows are linearly dependent (Smith invariant " + std::to_string(i + 1) + " is 0)");
        if (invariants[i] != 1)
            throw std::domain_error("rows do not span a saturated lattice (Smith invariant " + std::to_string(i + 1) +
                                    " is " + invariants[i].str() + ")");
    }
    if (auto greedy = detail::complete_with_unit_vectors(rows)) return *greedy;

    // rows * U^T = [L | 0] with L unimodular; the tail rows of (U^T)^{-1} complete.
    const auto hnf = hermite_normal_form(rows.transpose());
    const auto inv = integer_inverse(hnf.U.transpose());
    if (!inv) throw std::logic_error("HNF transform is not unimodular");
    IntMatrix tail = inv->submatrix_rows(r, n - r);
    tail = hermite_normal_form(tail).H;
    IntMatrix out(n, n);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t c = 0; c < n; ++c) out(i, c) = rows(i, c);
    for (std::size_t i = 0; i < n - r; ++i)
        for (std::size_t c = 0; c < n; ++c) out(r + i, c) = tail(i, c);
    if (!is_unimodular(out)) throw std::logic_error("unimodular completion failed");
    return out;
}

}  // namespace projdyn
