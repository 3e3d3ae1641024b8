#pragma once

#include "torsion/families.hpp"
#include "torsion/finite_action.hpp"

#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <unordered_map>

namespace torsion {

/// Degree cap for explicitly enumerated quotient levels.
inline constexpr std::size_t kDefaultDegreeCap = 1u << 16;

/// A tower of finite coset actions H_1 >= H_2 >= ... of one group family.
/// When `refining` is set, refinement_maps[i] sends level i+1 onto level i,
/// commutes with every generator and fixes the basepoint, so the stabilizers
/// are nested.
struct ChainSpec {
    GroupFamily family;
    std::string kind;
    std::vector<FiniteAction> levels;
    std::vector<Permutation> refinement_maps;  // empty unless refining
    bool refining = true;
    bool normal = true;
    bool exhausting = true;

    std::size_t depth() const { return levels.size(); }
};

namespace detail {

using Key = std::vector<std::int64_t>;

struct KeyHash {
    std::size_t operator()(const Key& k) const { return boost::hash_range(k.begin(), k.end()); }
};

inline std::int64_t mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

/// Finite quotient group given by right multiplication by generator letters.
struct QuotientModel {
    Key identity;
    std::function<Key(const Key&, Letter)> apply;
    std::function<Key(const Key&)> project;  // onto the previous level; may be empty
};

struct EnumeratedLevel {
    FiniteAction action;
    std::vector<Key> elements;
    std::unordered_map<Key, std::uint32_t, KeyHash> index;
};

inline EnumeratedLevel enumerate_level(const Presentation& p, const QuotientModel& model, std::size_t cap) {
    EnumeratedLevel out;
    out.elements.push_back(model.identity);
    out.index.emplace(model.identity, 0);
    const int gens = p.generator_count();
    for (std::size_t head = 0; head < out.elements.size(); ++head) {
        for (int g = 1; g <= gens; ++g)
            for (Letter l : {g, -g}) {
                Key next = model.apply(out.elements[head], l);
                if (out.index.emplace(next, static_cast<std::uint32_t>(out.elements.size())).second) {
                    out.elements.push_back(std::move(next));
                    if (out.elements.size() > cap)
                        throw BudgetExceeded("quotient level exceeds degree cap " + std::to_string(cap));
                }
            }
    }
    std::vector<Permutation> images(gens, Permutation(out.elements.size()));
    for (std::size_t c = 0; c < out.elements.size(); ++c)
        for (int g = 1; g <= gens; ++g) images[g - 1][c] = out.index.at(model.apply(out.elements[c], g));
    out.action = FiniteAction(p, std::move(images));
    return out;
}

inline std::int64_t pow2(int i) { return std::int64_t{1} << i; }

inline std::int64_t multiplicative_order(std::int64_t m, std::int64_t modulus) {
    std::int64_t x = mod(m, modulus), k = 1;
    while (x != 1 % modulus) {
        x = x * mod(m, modulus) % modulus;
        ++k;
    }
    return k;
}

inline QuotientModel congruence_model(const GroupFamily& fam, int level, bool lamplighter_cyclic) {
    QuotientModel model;
    switch (fam.kind()) {
        case FamilyKind::FreeAbelian: {
            const std::int64_t M = pow2(level);
            model.identity = Key(fam.parameter(), 0);
            model.apply = [M](const Key& k, Letter l) {
                Key out = k;
                auto& v = out[std::abs(l) - 1];
                v = mod(v + (l > 0 ? 1 : -1), M);
                return out;
            };
            model.project = [M](const Key& k) {
                Key out = k;
                for (auto& v : out) v = mod(v, M / 2);
                return out;
            };
            break;
        }
        case FamilyKind::Heisenberg: {
            const std::int64_t M = pow2(level);
            model.identity = Key{0, 0, 0};
            model.apply = [M](const Key& k, Letter l) {
                Key out = k;
                const int s = l > 0 ? 1 : -1;
                switch (std::abs(l)) {
                    case 1: out[0] = mod(out[0] + s, M); break;
                    case 2:
                        out[2] = mod(out[2] + s * out[0], M);
                        out[1] = mod(out[1] + s, M);
                        break;
                    default: out[2] = mod(out[2] + s, M); break;
                }
                return out;
            };
            model.project = [M](const Key& k) { return Key{mod(k[0], M / 2), mod(k[1], M / 2), mod(k[2], M / 2)}; };
            break;
        }
        case FamilyKind::BaumslagSolitar: {
            // Z/q^i ⋊ <m>, q the least prime not dividing m.
            const std::int64_t m = fam.parameter();
            std::int64_t q = 2;
            while (m % q == 0 || !is_prime(q)) ++q;
            std::int64_t M = 1, prevM = 1;
            for (int i = 0; i < level; ++i) {
                prevM = M;
                M *= q;
            }
            const std::int64_t ord = multiplicative_order(m, M);
            const std::int64_t prevOrd = level > 1 ? multiplicative_order(m, prevM) : 1;
            model.identity = Key{0, 0};
            model.apply = [m, M, ord](const Key& k, Letter l) {
                Key out = k;
                const int s = l > 0 ? 1 : -1;
                if (std::abs(l) == 2) {
                    out[0] = mod(out[0] + s, ord);
                } else {
                    std::int64_t power = 1;
                    for (std::int64_t e = 0; e < out[0]; ++e) power = power * mod(m, M) % M;
                    out[1] = mod(out[1] + s * power, M);
                }
                return out;
            };
            model.project = [prevM, prevOrd](const Key& k) { return Key{mod(k[0], prevOrd), mod(k[1], prevM)}; };
            break;
        }
        case FamilyKind::Lamplighter: {
            const std::int64_t p = fam.parameter();
            const std::int64_t len = pow2(level);
            if (lamplighter_cyclic) {
                model.identity = Key{0};
                model.apply = [len](const Key& k, Letter l) {
                    if (std::abs(l) == 1) return k;
                    return Key{mod(k[0] + (l > 0 ? 1 : -1), len)};
                };
                model.project = [len](const Key& k) { return Key{mod(k[0], len / 2)}; };
            } else {
                // (shift, lamp_0 .. lamp_{len-1}) in C_p wr C_len
                model.identity = Key(len + 1, 0);
                model.apply = [p, len](const Key& k, Letter l) {
                    Key out = k;
                    const int s = l > 0 ? 1 : -1;
                    if (std::abs(l) == 2) out[0] = mod(out[0] + s, len);
                    else out[1 + out[0]] = mod(out[1 + out[0]] + s, p);
                    return out;
                };
                model.project = [p, len](const Key& k) {
                    const std::int64_t half = len / 2;
                    Key out(half + 1, 0);
                    out[0] = mod(k[0], half);
                    for (std::int64_t x = 0; x < len; ++x) out[1 + x % half] = mod(out[1 + x % half] + k[1 + x], p);
                    return out;
                };
            }
            break;
        }
    }
    return model;
}

inline void check_refinement(const FiniteAction& coarse, const FiniteAction& fine, const Permutation& map) {
    if (map.size() != fine.degree() || map[0] != 0) throw InvalidArgument("refinement map must fix the basepoint");
    std::vector<std::size_t> fiber(coarse.degree(), 0);
    for (std::size_t c = 0; c < fine.degree(); ++c) {
        if (map[c] >= coarse.degree()) throw InvalidArgument("refinement map out of range");
        ++fiber[map[c]];
        for (int g = 1; g <= fine.generator_count(); ++g)
            if (map[fine.act(c, g)] != coarse.act(map[c], g))
                throw InvalidArgument("refinement map does not commute with generator " + std::to_string(g));
    }
    for (std::size_t f : fiber)
        if (f == 0) throw InvalidArgument("refinement map is not surjective");
}

}  // namespace detail

/// Exhausting normal tower for a built-in family:
///   FreeAbelian(d)      Z^d -> (Z/2^i)^d
///   Heisenberg          reduction mod 2^i
///   BaumslagSolitar(m)  onto Z/q^i ⋊ <m>, q the least prime not dividing m
///   Lamplighter(p)      onto C_p wr C_{2^i}
/// With `lamplighter_cyclic` the lamplighter tower is instead the quotient
/// onto C_{2^i}; its kernels contain every lamp, so it is flagged as
/// non-exhausting.
inline ChainSpec congruence_chain(const GroupFamily& family, int depth, bool lamplighter_cyclic = false,
                                  std::size_t degree_cap = kDefaultDegreeCap) {
    if (depth < 1) throw InvalidArgument("chain depth must be at least 1");
    if (lamplighter_cyclic && family.kind() != FamilyKind::Lamplighter)
        throw InvalidArgument("the cyclic tower is only defined for the lamplighter family");
    ChainSpec chain{family, lamplighter_cyclic ? "cyclic_tower" : "congruence", {}, {}, true, true,
                    !lamplighter_cyclic};
    std::vector<detail::EnumeratedLevel> levels;
    for (int i = 1; i <= depth; ++i) {
        auto model = detail::congruence_model(family, i, lamplighter_cyclic);
        levels.push_back(detail::enumerate_level(family.presentation(), model, degree_cap));
        if (i > 1) {
            const auto& coarse = levels[levels.size() - 2];
            const auto& fine = levels.back();
            Permutation map(fine.elements.size());
            for (std::size_t c = 0; c < fine.elements.size(); ++c) map[c] = coarse.index.at(model.project(fine.elements[c]));
            detail::check_refinement(coarse.action, fine.action, map);
            chain.refinement_maps.push_back(std::move(map));
        }
    }
    for (auto& l : levels) chain.levels.push_back(std::move(l.action));
    return chain;
}

/// Action of the lamplighter group on Z/n through the shift exponent. Its
/// stabilizer has index n and contains the whole lamp group.
inline FiniteAction lamplighter_cyclic_quotient(const GroupFamily& family, std::size_t n) {
    if (family.kind() != FamilyKind::Lamplighter) throw InvalidArgument("cyclic quotient needs the lamplighter family");
    if (n < 1) throw InvalidArgument("index must be positive");
    Permutation lamp(n), shift(n);
    for (std::size_t c = 0; c < n; ++c) {
        lamp[c] = static_cast<std::uint32_t>(c);
        shift[c] = static_cast<std::uint32_t>((c + 1) % n);
    }
    return FiniteAction(family.presentation(), {lamp, shift});
}

/// Lamplighter quotients onto Z/1, Z/2, ..., Z/depth. The stabilizers are
/// normal but not nested.
inline ChainSpec lamplighter_cyclic_index_chain(const GroupFamily& family, int depth) {
    if (depth < 1) throw InvalidArgument("chain depth must be at least 1");
    ChainSpec chain{family, "cyclic_index", {}, {}, false, true, false};
    for (int n = 1; n <= depth; ++n) chain.levels.push_back(lamplighter_cyclic_quotient(family, n));
    return chain;
}

/// Exact rational p/q in lowest terms.
struct Ratio {
    std::uint64_t num = 0;
    std::uint64_t den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Ratio&, const Ratio&) = default;
};

inline Ratio make_ratio(std::uint64_t num, std::uint64_t den) {
    std::uint64_t g = std::gcd(num, den);
    return g ? Ratio{num / g, den / g} : Ratio{0, 1};
}

struct FarberRow {
    Word word;
    std::size_t level;  // 1-based
    Ratio fixed_ratio;
};

/// Every freely reduced word of length 1..max_length, in shortlex order.
inline std::vector<Word> enumerate_reduced_words(int generator_count, std::size_t max_length) {
    std::vector<Word> out;
    std::vector<Word> frontier{Word{}};
    const auto alphabet = signed_alphabet(generator_count);
    for (std::size_t len = 1; len <= max_length; ++len) {
        std::vector<Word> next;
        for (const Word& w : frontier)
            for (Letter l : alphabet) {
                if (!w.empty() && w.letters().back() == -l) continue;
                Word x = w;
                x.push_back(l);
                next.push_back(std::move(x));
            }
        out.insert(out.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return out;
}

/// Fixed-point proportions |Fix(g)| / [G:H_i] for each nontrivial element g
/// represented by a reduced word of length <= max_length (one word per
/// element, the shortlex-least) at every level of the chain.
inline std::vector<FarberRow> farber_diagnostic(const ChainSpec& chain, std::size_t max_length) {
    if (max_length < 1) throw InvalidArgument("farber_diagnostic needs max_word_length >= 1");
    std::vector<FarberRow> rows;
    std::unordered_map<NormalForm, bool, NormalFormHash> seen;
    seen.emplace(chain.family.identity(), true);
    for (const Word& w : enumerate_reduced_words(chain.family.generator_count(), max_length)) {
        if (!seen.emplace(chain.family.normal_form(w), true).second) continue;
        for (std::size_t i = 0; i < chain.levels.size(); ++i) {
            const auto& act = chain.levels[i];
            rows.push_back({w, i + 1, make_ratio(act.fixed_points(w), act.degree())});
        }
    }
    return rows;
}

}  // namespace torsion
