#pragma once

// Classification of projective automorphisms up to birational conjugacy:
// finite order, semisimple normal form M1 (with an explicit monomial
// conjugator), or the Jordan normal form M2 (certificate only).

#include "projdyn/mult_relations.hpp"
#include "projdyn/spectral.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace projdyn {

struct NormalFormResult {
    enum class Case { FiniteOrder, M1, M2 };

    Case kind = Case::FiniteOrder;
    BigInt order = 0;      // FiniteOrder only
    std::size_t k = 0;     // torsion count in the target indexing
    SpectralData target;
    std::optional<IntMatrix> conjugator;  // M1 only

    // Machine-readable status of the conjugating map.
    std::string conjugator_status() const {
        switch (kind) {
            case Case::FiniteOrder: return "not_applicable";
            case Case::M1: return "monomial";
            case Case::M2: return "not_constructed";
        }
        return "";
    }
};

inline std::string to_string(NormalFormResult::Case c) {
    switch (c) {
        case NormalFormResult::Case::FiniteOrder: return "FiniteOrder";
        case NormalFormResult::Case::M1: return "M1";
        case NormalFormResult::Case::M2: return "M2";
    }
    return "";
}

// Eigenvalues of the diagonal automorphism after conjugating by y -> y^A on
// the torus chart {x0 != 0}: values'[i] = prod_j values[j]^{A(i,j)}.
inline std::vector<Eigenvalue> monomial_conjugate_diagonal(std::span<const Eigenvalue> values, const IntMatrix& a) {
    if (a.rows() != values.size() || !is_unimodular(a))
        throw std::domain_error("monomial conjugation needs a unimodular matrix of matching size");
    return apply_exponent_rows(values, a);
}

namespace detail {

inline void require_normalized(const SpectralData& s) {
    if (s.blocks.empty()) throw std::domain_error("spectral data has no blocks");
    if (!s.normalized || !s.blocks.front().eigenvalue.is_one())
        throw std::domain_error("spectral data must be normalized (first eigenvalue 1)");
}

inline SpectralData diagonal_target(std::size_t first_block_size, const std::vector<Eigenvalue>& diagonal) {
    SpectralData t;
    t.normalized = true;
    t.blocks.push_back({Eigenvalue::one(), first_block_size});
    for (const auto& v : diagonal) t.blocks.push_back({v, 1});
    return t;
}

}  // namespace detail

inline std::optional<BigInt> finite_order_of(const SpectralData& s) {
    detail::require_normalized(s);
    BigInt order = 1;
    for (const auto& b : s.blocks) {
        const auto o = is_root_of_unity(b.eigenvalue);
        if (!o || b.size != 1) return std::nullopt;
        order = lcm(order, *o);
    }
    return order;
}

inline NormalFormResult classify_automorphism(const SpectralData& s) {
    detail::require_normalized(s);
    NormalFormResult out;

    if (auto order = finite_order_of(s)) {
        out.kind = NormalFormResult::Case::FiniteOrder;
        out.order = *order;
        out.k = s.dimension() - 1;
        out.target = s;
        return out;
    }

    if (s.is_semisimple()) {
        std::vector<Eigenvalue> values;
        for (std::size_t i = 1; i < s.blocks.size(); ++i) values.push_back(s.blocks[i].eigenvalue);
        const auto part = independence_partition(values);
        out.kind = NormalFormResult::Case::M1;
        out.k = part.k_torsion;
        out.target = detail::diagonal_target(1, part.transformed);
        out.conjugator = part.conjugator;
        return out;
    }

    // Distinguished block: first block of maximal size.
    std::size_t pick = 0;
    for (std::size_t i = 1; i < s.blocks.size(); ++i)
        if (s.blocks[i].size > s.blocks[pick].size) pick = i;
    const Eigenvalue scale = s.blocks[pick].eigenvalue.inverse();
    std::vector<Eigenvalue> diagonal(s.blocks[pick].size - 2, Eigenvalue::one());
    for (std::size_t i = 0; i < s.blocks.size(); ++i) {
        if (i == pick) continue;
        for (std::size_t c = 0; c < s.blocks[i].size; ++c) diagonal.push_back(s.blocks[i].eigenvalue * scale);
    }
    out.kind = NormalFormResult::Case::M2;
    if (diagonal.empty()) {
        out.k = 1;
        out.target = detail::diagonal_target(2, {});
        return out;
    }
    const auto part = independence_partition(diagonal);
    out.k = 1 + part.k_torsion;
    out.target = detail::diagonal_target(2, part.transformed);
    return out;
}

}  // namespace projdyn
