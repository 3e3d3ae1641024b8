#pragma once

#include "torsion/chain_complex.hpp"
#include "torsion/snf.hpp"
#include "torsion/transversal.hpp"

#include <set>

namespace torsion {

struct TorsionReport {
    std::size_t level = 0;
    std::size_t index = 0;
    Integer torsion = 1;     // T_n
    std::size_t betti = 0;   // b_n
    Integer bound = 1;
    double log_torsion_over_index = 0.0;
};

struct HomologyGroup {
    Integer torsion = 1;
    std::size_t betti = 0;
    std::vector<Integer> torsion_factors;  // invariant factors > 1
};

/// H_n of an integer chain complex. Since im(delta_n) is free, the torsion
/// of ker(delta_n)/im(delta_{n+1}) equals the torsion of
/// Z^{c_n}/im(delta_{n+1}), i.e. the product of the invariant factors of
/// delta_{n+1}; the Betti number is c_n - rank(delta_n) - rank(delta_{n+1}).
inline HomologyGroup homology(const InducedComplex& cx, std::size_t n, bool check_composition = true) {
    if (n >= cx.ranks.size()) throw InvalidArgument("homology degree beyond the complex");
    const IntMatrix& dn = cx.boundaries[n];
    const IntMatrix upper = n + 1 < cx.boundaries.size() ? cx.boundaries[n + 1] : IntMatrix(cx.ranks[n], 0);
    if (check_composition && !(dn * upper).is_zero())
        throw InvalidArgument("boundary matrices do not compose to zero in degree " + std::to_string(n));
    const SnfResult lower_snf = snf(dn);
    const SnfResult upper_snf = snf(upper);
    HomologyGroup h;
    h.torsion = upper_snf.torsion;
    h.torsion_factors = upper_snf.nontrivial_factors();
    h.betti = cx.ranks[n] - lower_snf.rank - upper_snf.rank;
    return h;
}

inline TorsionReport homology_torsion(const InducedComplex& cx, std::size_t n) {
    const HomologyGroup h = homology(cx, n);
    TorsionReport rep;
    rep.index = cx.index;
    rep.torsion = h.torsion;
    rep.betti = h.betti;
    rep.log_torsion_over_index = log_integer(h.torsion) / static_cast<double>(cx.index);
    return rep;
}

/// Euler characteristic from the Betti numbers (not from the cell counts).
inline long long euler_characteristic(const InducedComplex& cx) {
    long long chi = 0;
    std::vector<std::size_t> ranks(cx.boundaries.size());
    for (std::size_t d = 0; d < cx.boundaries.size(); ++d) ranks[d] = snf(cx.boundaries[d]).rank;
    for (std::size_t d = 0; d < cx.ranks.size(); ++d) {
        const std::size_t upper = d + 1 < ranks.size() ? ranks[d + 1] : 0;
        const long long b = static_cast<long long>(cx.ranks[d] - ranks[d] - upper);
        chi += (d % 2 == 0) ? b : -b;
    }
    return chi;
}

inline long long euler_characteristic(const ChainComplexSpec& cx) {
    long long chi = 0;
    for (std::size_t d = 0; d < cx.ranks.size(); ++d)
        chi += (d % 2 == 0 ? 1 : -1) * static_cast<long long>(cx.ranks[d]);
    return chi;
}

struct RelativeBound {
    std::size_t interior = 0;   // |J|: cosets whose translated closed domain stays inside F
    std::size_t boundary_cells = 0;  // m: degree-n cells over F \ J
    Integer base = 0;
    Integer bound = 1;
};

/// Group elements g such that some cell g*e lies in the closure of the
/// fundamental domain (all cells attached at the identity).
inline std::vector<NormalForm> closure_support(const ChainComplexSpec& cx, const GroupFamily& family) {
    std::set<std::pair<std::size_t, std::pair<std::size_t, NormalForm>>> seen;
    std::vector<std::pair<std::size_t, std::pair<std::size_t, NormalForm>>> stack;
    for (std::size_t d = 0; d < cx.ranks.size(); ++d)
        for (std::size_t j = 0; j < cx.ranks[d]; ++j) stack.push_back({d, {j, family.identity()}});
    std::set<NormalForm> support;
    while (!stack.empty()) {
        auto cell = stack.back();
        stack.pop_back();
        if (!seen.insert(cell).second) continue;
        const auto& [d, rest] = cell;
        const auto& [j, g] = rest;
        support.insert(g);
        if (d == 0) continue;
        const Word g_word = family.canonical_word(g);
        for (std::size_t i = 0; i < cx.boundaries[d].rows; ++i)
            for (const auto& [w, c] : cx.boundaries[d].at(i, j).terms())
                stack.push_back({d - 1, {i, family.normal_form(g_word * w)}});
    }
    return {support.begin(), support.end()};
}

/// Relative-homology bound for T_n: J collects the cosets c for which
/// reps[c] * (closure support) stays inside F; m counts the degree-n cells
/// over the remaining cosets and the bound is base^m with base the largest
/// l1-norm of a column of delta_{n+1}.
inline RelativeBound relative_bound(const ChainComplexSpec& cx, const FiniteAction& action, const Transversal& t,
                                    std::size_t n, const GroupFamily& family) {
    if (n < 1 || n + 1 > cx.top_degree()) throw InvalidArgument("relative_bound: degree out of range");
    detail::check_transversal(t.reps, action);
    const detail::ElementSet set(family, t.reps);
    const auto support = closure_support(cx, family);
    RelativeBound rb;
    for (std::size_t c = 0; c < t.size(); ++c) {
        const Word rep = family.canonical_word(set.form(c));
        bool inside = true;
        for (const NormalForm& u : support)
            if (!set.find(family.normal_form(rep * family.canonical_word(u)))) {
                inside = false;
                break;
            }
        if (inside) ++rb.interior;
    }
    rb.boundary_cells = (t.size() - rb.interior) * cx.ranks[n];
    const GroupRingMatrix& up = cx.boundaries[n + 1];
    for (std::size_t j = 0; j < up.cols; ++j) {
        Integer col = 0;
        for (std::size_t i = 0; i < up.rows; ++i) col += up.at(i, j).l1_norm();
        if (col > rb.base) rb.base = col;
    }
    rb.bound = rb.base == 0 ? Integer(1) : ipow(rb.base, rb.boundary_cells);
    return rb;
}

}  // namespace torsion
