#pragma once

#include "torsion/chains.hpp"
#include "torsion/snf.hpp"

#include "json.hpp"

#include <functional>
#include <map>
#include <set>

namespace torsion {

/// A finite quotient is too small for the requested statement (for
/// instance P_i R = P R).
class PrecisionLoss : public Error {
public:
    using Error::Error;
};

/// Element of the finite wreath product C_p wr C_m: lamp configuration
/// followed by a shift, multiplied as (s, f)(s', f') = (s + s', f + s.f')
/// where (s.f')[x] = f'[x - s]. The generator a is (0, e_0) and t is (1, 0).
struct WreathElement {
    int shift = 0;
    std::vector<int> lamps;
    friend auto operator<=>(const WreathElement&, const WreathElement&) = default;
};

class WreathQuotient {
public:
    WreathQuotient(int p, int m) : p_(p), m_(m) {
        if (!is_prime(p)) throw InvalidArgument("wreath quotient needs a prime p");
        if (m < 1) throw InvalidArgument("wreath quotient needs m >= 1");
    }

    int p() const { return p_; }
    int m() const { return m_; }
    Integer order() const { return ipow(Integer(p_), static_cast<std::uint64_t>(m_)) * m_; }

    WreathElement identity() const { return {0, std::vector<int>(m_, 0)}; }
    WreathElement lamp(long position) const {
        WreathElement e = identity();
        e.lamps[static_cast<std::size_t>(wrap(position, m_))] = 1;
        return e;
    }
    WreathElement shift_by(long s) const {
        WreathElement e = identity();
        e.shift = static_cast<int>(wrap(s, m_));
        return e;
    }

    WreathElement multiply(const WreathElement& x, const WreathElement& y) const {
        WreathElement out{static_cast<int>(wrap(x.shift + y.shift, m_)), x.lamps};
        for (int pos = 0; pos < m_; ++pos) {
            auto& v = out.lamps[static_cast<std::size_t>(wrap(pos + x.shift, m_))];
            v = static_cast<int>(wrap(v + y.lamps[static_cast<std::size_t>(pos)], p_));
        }
        return out;
    }

    /// Image of a word in the generators a (1) and t (2).
    WreathElement evaluate(const Word& w) const {
        WreathElement e = identity();
        for (Letter l : w.letters()) {
            const int s = l > 0 ? 1 : -1;
            if (std::abs(l) == 1) {
                auto& v = e.lamps[static_cast<std::size_t>(e.shift)];
                v = static_cast<int>(wrap(v + s, p_));
            } else {
                e.shift = static_cast<int>(wrap(e.shift + s, m_));
            }
        }
        return e;
    }

    /// Subgroup generated by `gens`, by breadth-first closure.
    std::vector<WreathElement> closure(const std::vector<WreathElement>& gens, std::size_t cap) const {
        std::set<WreathElement> seen{identity()};
        std::vector<WreathElement> out{identity()};
        for (std::size_t head = 0; head < out.size(); ++head)
            for (const auto& g : gens) {
                WreathElement next = multiply(out[head], g);
                if (seen.insert(next).second) {
                    out.push_back(std::move(next));
                    if (out.size() > cap) throw BudgetExceeded("subgroup enumeration exceeds cap");
                }
            }
        return out;
    }

    std::vector<WreathElement> elements(std::size_t cap) const { return closure({lamp(0), shift_by(1)}, cap); }

    /// Index of each right coset H g, as a map from element to coset number,
    /// numbered in order of first appearance in `all`.
    std::map<WreathElement, std::size_t> right_cosets(const std::vector<WreathElement>& subgroup,
                                                      const std::vector<WreathElement>& all) const {
        std::map<WreathElement, std::size_t> coset;
        std::size_t next = 0;
        for (const auto& g : all) {
            if (coset.contains(g)) continue;
            for (const auto& h : subgroup) coset.emplace(multiply(h, g), next);
            ++next;
        }
        return coset;
    }

private:
    static long wrap(long a, long m) { return ((a % m) + m) % m; }
    int p_, m_;
};

/// Q = C_p wr Z with the strictly ascending finite subgroups
/// P_j = lamps supported on [-(j-1), j-1] (P_0 = 1), whose union P is the
/// whole lamp group, and the normal chain Q_0 = Q, Q_i = ker(Q -> C_p wr C_{2^i}).
class LamplighterStructure {
public:
    static constexpr std::size_t kEnumerationCap = 1u << 20;

    explicit LamplighterStructure(int p) : p_(p) {
        if (!is_prime(p)) throw InvalidArgument("lamplighter structure needs a prime p");
    }

    int p() const { return p_; }

    /// Lamp positions generating P_j.
    std::vector<long> support(int j) const {
        if (j < 0) throw InvalidArgument("subgroup index j must be non-negative");
        std::vector<long> out;
        for (long x = -(j - 1); x <= j - 1; ++x) out.push_back(x);
        return out;
    }

    /// Quotient parameter m of Q/Q_i, with m = 0 standing for Q itself.
    static int chain_modulus(int i) {
        if (i < 0 || i > 24) throw InvalidArgument("chain level out of range");
        return i == 0 ? 0 : 1 << i;
    }

    std::vector<WreathElement> subgroup_image(int j, const WreathQuotient& q) const {
        std::vector<WreathElement> gens;
        for (long x : support(j)) gens.push_back(q.lamp(x));
        return q.closure(gens, kEnumerationCap);
    }

    /// Order of the image of P_j in C_p wr C_m, by enumeration.
    Integer image_order(int j, int m) const {
        return Integer(subgroup_image(j, WreathQuotient(p_, m)).size());
    }

    /// |Q : P_j R| for R = ker(Q -> C_p wr C_m); m = 0 means R = Q.
    Integer index_pj(int j, int m) const {
        if (m == 0) return 1;
        return WreathQuotient(p_, m).order() / image_order(j, m);
    }
    /// |Q : P R| = m since P maps onto the lamp group.
    static Integer index_p(int m) { return m == 0 ? Integer(1) : Integer(m); }

private:
    int p_;
};

/// (|Q : P_i R|, |Q : P R|) for R the kernel onto C_p wr C_m.
inline std::pair<Integer, Integer> indices_at_quotient(const LamplighterStructure& ls, int i, int m) {
    if (m < 1) throw InvalidArgument("quotient parameter m must be positive");
    auto idx = std::pair{ls.index_pj(i, m), LamplighterStructure::index_p(m)};
    if (idx.first <= idx.second)
        throw PrecisionLoss("P_" + std::to_string(i) + "R = PR in C_" + std::to_string(ls.p()) + " wr C_" +
                            std::to_string(m) + "; use a larger quotient");
    return idx;
}

/// n^(|Q:P_iR| - |Q:PR|), the order of (Y_i' + Y_i r) / Y_i r.
inline Integer module_torsion_exact(const Integer& n, const std::pair<Integer, Integer>& indices) {
    if (n < 2) throw InvalidArgument("module exponent must be at least 2");
    if (indices.first <= indices.second) throw InvalidArgument("index difference must be positive");
    const Integer diff = indices.first - indices.second;
    const Integer t = ipow(n, static_cast<std::uint64_t>(diff));
    if (t < n) throw Error("module torsion below its modulus");
    return t;
}

namespace detail {

/// Order of the subgroup of (Z/n)^K spanned by the columns of `vectors`:
/// n^K / |Z^K / (span + nZ^K)|.
inline Integer span_order_mod(const IntMatrix& vectors, const Integer& n) {
    const std::size_t K = vectors.rows();
    IntMatrix m(K, vectors.cols() + K);
    for (std::size_t c = 0; c < vectors.cols(); ++c)
        for (const auto& [r, v] : vectors.column(c)) m.set(r, c, v);
    for (std::size_t r = 0; r < K; ++r) m.set(r, vectors.cols() + r, n);
    return ipow(n, K) / snf(m).torsion;
}

}  // namespace detail

/// Independent evaluation of |(Y_i' + Y_i r) / Y_i r| in the explicit finite
/// permutation module (Z/n)[P_i R \ Q]: the span of [u g] - [g] over u in
/// the image of P and g in C_p wr C_m, sized through a Smith normal form.
inline Integer module_torsion_oracle(const LamplighterStructure& ls, int i, int m, const Integer& n) {
    const WreathQuotient q(ls.p(), m);
    const auto all = q.elements(LamplighterStructure::kEnumerationCap);
    const auto cosets = q.right_cosets(ls.subgroup_image(i, q), all);
    std::size_t K = 0;
    for (const auto& [g, c] : cosets) K = std::max(K, c + 1);
    std::vector<WreathElement> lamp_gens;
    for (int x = 0; x < m; ++x) lamp_gens.push_back(q.lamp(x));
    const auto p_image = q.closure(lamp_gens, LamplighterStructure::kEnumerationCap);
    std::set<std::pair<std::size_t, std::size_t>> columns;
    for (const auto& u : p_image)
        for (const auto& g : all) {
            const std::size_t a = cosets.at(q.multiply(u, g)), b = cosets.at(g);
            if (a != b) columns.emplace(a, b);
        }
    IntMatrix vectors(K, columns.size());
    std::size_t col = 0;
    for (auto [a, b] : columns) {
        vectors.set(a, col, 1);
        vectors.set(b, col, -1);
        ++col;
    }
    return detail::span_order_mod(vectors, n);
}

/// Non-decreasing function N -> N on arbitrary precision integers.
struct GrowthFunction {
    std::string name;
    std::function<Integer(const Integer&)> eval;
};

/// "x", "x^k" (k >= 1) or "const:c" (c >= 0).
inline GrowthFunction parse_growth(const std::string& text) {
    if (text == "x") return {text, [](const Integer& x) { return x; }};
    if (text.rfind("x^", 0) == 0) {
        const std::string k = text.substr(2);
        if (k.empty() || k.find_first_not_of("0123456789") != std::string::npos || std::stoul(k) < 1)
            throw InvalidArgument("bad growth exponent in '" + text + "'");
        const std::uint64_t e = std::stoul(k);
        return {text, [e](const Integer& x) { return ipow(x, e); }};
    }
    if (text.rfind("const:", 0) == 0) {
        const std::string c = text.substr(6);
        if (c.empty() || c.find_first_not_of("0123456789") != std::string::npos)
            throw InvalidArgument("bad growth constant in '" + text + "'");
        const Integer v(c);
        return {text, [v](const Integer&) { return v; }};
    }
    throw InvalidArgument("unknown growth function '" + text + "' (expected x, x^k or const:c)");
}

/// Level i of the moduli certificate.
struct ModulusLevel {
    int level = 0;
    int quotient_m = 0;                 // Q/Q_i = C_p wr C_m (0: Q_0 = Q)
    Integer quotient_order = 1;         // |Q/Q_i|
    std::vector<Integer> w_exponents;   // |Q : P_j Q_{i-1}| for j < i
    Integer w_index_bound = 1;          // prod_j n_j^{|Q : P_j Q_{i-1}|}, a multiple of |W/W_i|
    Integer index_bound = 1;            // |Q/Q_i| * w_index_bound >= [G : M_i]
    Integer f_of_index = 0;
    Integer modulus = 2;                // n_i
    Integer idx_pi = 1, idx_p = 1;      // |Q : P_i Q_i|, |Q : P Q_i|
    Integer torsion_lower_bound = 1;    // n_i^(idx_pi - idx_p), 1 at level 0
    bool exceeds = false;               // torsion_lower_bound > f(index_bound)
};

struct ModuliCertificate {
    int p = 2;
    std::string growth;
    std::size_t budget_bits = 0;
    std::vector<ModulusLevel> levels;

    std::vector<Integer> moduli() const {
        std::vector<Integer> out;
        for (const auto& l : levels) out.push_back(l.modulus);
        return out;
    }
};

inline constexpr std::size_t kDefaultBudgetBits = 1u << 16;

/// Moduli n_0 < n_1 < ... < n_{depth-1}, each minimal with n_i >= 2,
/// n_i > n_{i-1} and n_i > f(|Q/Q_i| * prod_{j<i} n_j^{|Q : P_j Q_{i-1}|}).
/// Every level i >= 1 also records the torsion lower bound
/// n_i^{|Q : P_i Q_i| - |Q : P Q_i|} for W_i / W_i q_i. Throws
/// BudgetExceeded when any certificate number needs more than
/// `budget_bits` bits.
inline ModuliCertificate choose_moduli(const GrowthFunction& f, int depth, int p = 2,
                                       std::size_t budget_bits = kDefaultBudgetBits) {
    if (depth < 0) throw InvalidArgument("depth must be non-negative");
    const LamplighterStructure ls(p);
    ModuliCertificate cert{p, f.name, budget_bits, {}};
    auto guard = [&](const Integer& v, const std::string& what, int level) {
        if (bit_length(v) > budget_bits)
            throw BudgetExceeded(what + " at level " + std::to_string(level) + " needs " +
                                 std::to_string(bit_length(v)) + " bits, over the budget of " +
                                 std::to_string(budget_bits));
    };
    for (int i = 0; i < depth; ++i) {
        ModulusLevel row;
        row.level = i;
        row.quotient_m = LamplighterStructure::chain_modulus(i);
        row.quotient_order = row.quotient_m == 0 ? Integer(1) : WreathQuotient(p, row.quotient_m).order();
        if (i > 0) {
            const int prev_m = LamplighterStructure::chain_modulus(i - 1);
            for (int j = 0; j < i; ++j) {
                const Integer e = ls.index_pj(j, prev_m);
                if (bit_length(e) > 62) throw BudgetExceeded("exponent too large at level " + std::to_string(i));
                const std::size_t predicted =
                    bit_length(row.w_index_bound) + static_cast<std::size_t>(e) * bit_length(cert.levels[j].modulus);
                if (predicted > budget_bits + 1)
                    throw BudgetExceeded("index bound at level " + std::to_string(i) + " needs about " +
                                         std::to_string(predicted) + " bits, over the budget of " +
                                         std::to_string(budget_bits));
                row.w_exponents.push_back(e);
                row.w_index_bound *= ipow(cert.levels[j].modulus, static_cast<std::uint64_t>(e));
            }
        }
        row.index_bound = row.quotient_order * row.w_index_bound;
        guard(row.index_bound, "index bound", i);
        row.f_of_index = f.eval(row.index_bound);
        guard(row.f_of_index, "growth value", i);
        Integer n = 2;
        if (i > 0 && cert.levels.back().modulus + 1 > n) n = cert.levels.back().modulus + 1;
        if (row.f_of_index + 1 > n) n = row.f_of_index + 1;
        row.modulus = n;
        if (i > 0) {
            const auto idx = indices_at_quotient(ls, i, row.quotient_m);
            row.idx_pi = idx.first;
            row.idx_p = idx.second;
            const Integer diff = idx.first - idx.second;
            if (static_cast<std::size_t>(diff) * bit_length(n) > budget_bits + bit_length(n))
                throw BudgetExceeded("torsion bound at level " + std::to_string(i) + " exceeds the budget of " +
                                     std::to_string(budget_bits) + " bits");
            row.torsion_lower_bound = module_torsion_exact(n, idx);
            guard(row.torsion_lower_bound, "torsion bound", i);
            row.exceeds = row.torsion_lower_bound > row.f_of_index;
        }
        cert.levels.push_back(std::move(row));
    }
    return cert;
}

struct M1Row {
    int level = 0;
    Integer index_bound;          // >= [G : M_i]
    Integer torsion_lower_bound;  // <= T_1(M_i)
    Integer f_of_index;
    bool exceeds = false;
};

/// Rows i = 1..depth: T_1(M_i) >= tor(W_i / W_i q_i) >= torsion_lower_bound,
/// with H_1(M_i) = Q_i^ab x W_i / W_i q_i, compared with f of the index bound.
inline std::vector<M1Row> m1_torsion_report(const GrowthFunction& f, int depth, int p = 2,
                                            std::size_t budget_bits = kDefaultBudgetBits) {
    if (depth < 0) throw InvalidArgument("depth must be non-negative");
    if (depth == 0) return {};
    const auto cert = choose_moduli(f, depth + 1, p, budget_bits);
    std::vector<M1Row> rows;
    for (std::size_t i = 1; i < cert.levels.size(); ++i) {
        const auto& l = cert.levels[i];
        rows.push_back({l.level, l.index_bound, l.torsion_lower_bound, l.f_of_index, l.exceeds});
    }
    return rows;
}

/// Finite shadow of the structure of U p: in (Z/n_j)[P_j \ P] at quotient
/// C_p wr C_m the vectors e_j (u - 1), u in the image of P, have coordinate
/// sums 0 mod n_j and span the whole augmentation kernel.
struct ModuleStructureCheck {
    int j = 0;
    std::size_t rows = 0;
    std::size_t coordinates = 0;
    bool sums_vanish = true;
    Integer span_order;
    Integer augmentation_kernel_order;
    bool spans_kernel() const { return span_order == augmentation_kernel_order; }
};

inline ModuleStructureCheck module_structure_check(const LamplighterStructure& ls, int j, int m, const Integer& n) {
    const WreathQuotient q(ls.p(), m);
    std::vector<WreathElement> lamp_gens;
    for (int x = 0; x < m; ++x) lamp_gens.push_back(q.lamp(x));
    const auto p_image = q.closure(lamp_gens, LamplighterStructure::kEnumerationCap);
    const auto cosets = q.right_cosets(ls.subgroup_image(j, q), p_image);
    ModuleStructureCheck out;
    out.j = j;
    for (const auto& [g, c] : cosets) out.coordinates = std::max(out.coordinates, c + 1);
    IntMatrix rows(out.coordinates, p_image.size());
    const std::size_t base = cosets.at(q.identity());
    for (std::size_t k = 0; k < p_image.size(); ++k) {
        rows.add(cosets.at(p_image[k]), k, 1);
        rows.add(base, k, -1);
        Integer sum = 0;
        for (const auto& [r, v] : rows.column(k)) sum += v;
        if (sum % n != 0) out.sums_vanish = false;
    }
    out.rows = p_image.size();
    out.span_order = detail::span_order_mod(rows, n);
    out.augmentation_kernel_order = ipow(n, out.coordinates - 1);
    return out;
}

/// Finite shadow of residual finiteness of Y_j: for reduced words of
/// length <= max_word_length giving distinct cosets P_j g, the first chain
/// level i <= max_level at which the cosets P_j Q_i g are distinct.
struct SeparationReport {
    int j = 0;
    std::size_t cosets = 0;
    std::size_t pairs = 0;
    std::size_t separated = 0;
    int level_needed = 0;  // largest first-separation level over all separated pairs
    bool all_separated() const { return separated == pairs; }
};

inline SeparationReport separation_check(const LamplighterStructure& ls, int j, std::size_t max_word_length,
                                         int max_level) {
    const auto family = GroupFamily::lamplighter(ls.p());
    // P_j g = P_j g' iff g' g^-1 is a lamp configuration supported in P_j.
    const auto supp = ls.support(j);
    auto in_pj = [&](const NormalForm& nf) {
        if (nf.coords[0] != 0) return false;
        for (std::size_t k = 1; k + 1 < nf.coords.size(); k += 2) {
            const long pos = static_cast<long>(nf.coords[k]);
            if (std::find(supp.begin(), supp.end(), pos) == supp.end()) return false;
        }
        return true;
    };
    std::vector<Word> reps{Word{}};
    for (const Word& w : enumerate_reduced_words(2, max_word_length)) {
        bool fresh = true;
        for (const Word& r : reps)
            if (in_pj(family.normal_form(w * r.inverse()))) {
                fresh = false;
                break;
            }
        if (fresh) reps.push_back(w);
    }
    SeparationReport rep;
    rep.j = j;
    rep.cosets = reps.size();
    std::vector<std::vector<std::size_t>> coset_at(static_cast<std::size_t>(max_level) + 1);
    for (int i = 1; i <= max_level; ++i) {
        const WreathQuotient q(ls.p(), LamplighterStructure::chain_modulus(i));
        const auto pj = ls.subgroup_image(j, q);
        std::map<WreathElement, std::size_t> key;
        for (const Word& w : reps) {
            const WreathElement g = q.evaluate(w);
            WreathElement least = g;
            for (const auto& h : pj) least = std::min(least, q.multiply(h, g));
            coset_at[i].push_back(key.emplace(least, key.size()).first->second);
        }
    }
    for (std::size_t a = 0; a < reps.size(); ++a)
        for (std::size_t b = a + 1; b < reps.size(); ++b) {
            ++rep.pairs;
            for (int i = 1; i <= max_level; ++i)
                if (coset_at[i][a] != coset_at[i][b]) {
                    ++rep.separated;
                    rep.level_needed = std::max(rep.level_needed, i);
                    break;
                }
        }
    return rep;
}

inline nlohmann::json certificate_json(const ModuliCertificate& cert) {
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& l : cert.levels) {
        nlohmann::json exps = nlohmann::json::array();
        for (const auto& e : l.w_exponents) exps.push_back(to_string(e));
        levels.push_back({{"level", l.level},
                          {"quotient", l.quotient_m == 0 ? std::string("Q") : "C_" + std::to_string(cert.p) +
                                                                                  " wr C_" +
                                                                                  std::to_string(l.quotient_m)},
                          {"quotient_order", to_string(l.quotient_order)},
                          {"w_exponents", exps},
                          {"w_index_bound", to_string(l.w_index_bound)},
                          {"index_bound", to_string(l.index_bound)},
                          {"f_of_index_bound", to_string(l.f_of_index)},
                          {"modulus", to_string(l.modulus)},
                          {"index_PiQi", to_string(l.idx_pi)},
                          {"index_PQi", to_string(l.idx_p)},
                          {"torsion_lower_bound", to_string(l.torsion_lower_bound)},
                          {"exceeds", l.level == 0 ? nlohmann::json(nullptr) : nlohmann::json(l.exceeds)}});
    }
    return {{"p", cert.p},
            {"growth", cert.growth},
            {"budget_bits", cert.budget_bits},
            {"subgroups", "P_j = lamps supported on [-(j-1), j-1]"},
            {"chain", "Q_0 = Q, Q_i = ker(Q -> C_p wr C_{2^i})"},
            {"levels", levels}};
}

}  // namespace torsion
