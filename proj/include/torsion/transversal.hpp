#pragma once

#include "torsion/chains.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>
#include <unordered_map>

namespace torsion {

/// Coset representatives F for H\G, one word per coset (reps[0] is the
/// empty word), with the size of the Cayley-graph boundary
/// |{(x, s) : x in F, s in S u S^-1, xs not in F}| and the number of
/// connected components of the subgraph of the Cayley graph induced on F.
struct Transversal {
    std::vector<Word> reps;
    std::size_t boundary_edges = 0;
    std::size_t components = 0;
    bool is_connected = false;

    std::size_t size() const { return reps.size(); }
    double boundary_ratio() const {
        return reps.empty() ? 0.0 : static_cast<double>(boundary_edges) / static_cast<double>(reps.size());
    }
};

/// Bookkeeping from weiss_tiling's repair step: `removed` translate
/// elements landing on an already-covered coset and `added` cosets filled
/// in afterwards.
struct TilingPatch {
    std::size_t removed = 0;
    std::size_t added = 0;
};

namespace detail {

struct DisjointSets {
    std::vector<std::size_t> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

/// Elements of a transversal with their normal forms and a lookup from
/// normal form to coset.
class ElementSet {
public:
    ElementSet(const GroupFamily& family, const std::vector<Word>& reps) : family_(&family) {
        forms_.reserve(reps.size());
        for (std::size_t c = 0; c < reps.size(); ++c) {
            forms_.push_back(family.normal_form(reps[c]));
            index_.emplace(forms_.back(), c);
        }
    }
    const NormalForm& form(std::size_t c) const { return forms_[c]; }
    std::optional<std::size_t> find(const NormalForm& nf) const {
        auto it = index_.find(nf);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    void replace(std::size_t c, NormalForm nf) {
        index_.erase(forms_[c]);
        forms_[c] = std::move(nf);
        index_.emplace(forms_[c], c);
    }
    const GroupFamily& family() const { return *family_; }

private:
    const GroupFamily* family_;
    std::vector<NormalForm> forms_;
    std::unordered_map<NormalForm, std::size_t, NormalFormHash> index_;
};

inline void check_transversal(const std::vector<Word>& reps, const FiniteAction& action) {
    if (reps.size() != action.degree()) throw InvalidArgument("transversal size differs from the action degree");
    if (!reps.empty() && !reps[0].empty()) throw InvalidArgument("the basepoint coset must be represented by the identity");
    for (std::size_t c = 0; c < reps.size(); ++c)
        if (action.act(0, reps[c]) != c)
            throw InvalidArgument("representative " + format_word(reps[c]) + " does not lie in coset " +
                                  std::to_string(c));
}

}  // namespace detail

/// Boundary size of an arbitrary finite set of elements given by normal forms.
inline std::size_t set_boundary(const GroupFamily& family, const std::vector<NormalForm>& elements) {
    std::unordered_map<NormalForm, bool, NormalFormHash> in;
    for (const auto& e : elements) in.emplace(e, true);
    std::size_t boundary = 0;
    const auto alphabet = signed_alphabet(family.generator_count());
    for (const auto& e : elements)
        for (Letter s : alphabet)
            if (!in.contains(family.apply(e, s))) ++boundary;
    return boundary;
}

/// Validates that `reps` is a transversal for `action` and fills in the
/// boundary and connectivity metadata.
inline Transversal measure_transversal(std::vector<Word> reps, const FiniteAction& action, const GroupFamily& family) {
    detail::check_transversal(reps, action);
    detail::ElementSet set(family, reps);
    detail::DisjointSets dsu(reps.size());
    Transversal t;
    std::size_t components = reps.size();
    const auto alphabet = signed_alphabet(family.generator_count());
    for (std::size_t c = 0; c < reps.size(); ++c)
        for (Letter s : alphabet) {
            auto hit = set.find(family.apply(set.form(c), s));
            if (!hit) ++t.boundary_edges;
            else if (dsu.unite(c, *hit)) --components;
        }
    t.reps = std::move(reps);
    t.components = components;
    t.is_connected = components == 1;
    return t;
}

/// Breadth-first spanning tree of the Schreier graph from the basepoint,
/// scanning letters in the order +1, -1, +2, -2, ...
inline Transversal schreier_tree_transversal(const FiniteAction& action, const GroupFamily& family) {
    std::vector<Word> reps(action.degree());
    std::vector<bool> seen(action.degree(), false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    const auto alphabet = signed_alphabet(action.generator_count());
    while (!queue.empty()) {
        std::size_t c = queue.front();
        queue.pop_front();
        for (Letter s : alphabet) {
            std::size_t d = action.act(c, s);
            if (seen[d]) continue;
            seen[d] = true;
            reps[d] = reps[c] * letter_word(s);
            queue.push_back(d);
        }
    }
    return measure_transversal(std::move(reps), action, family);
}

/// Spanning tree of the Schreier graph grown by attaching a uniformly
/// random frontier edge at each step; a reproducible random start for
/// the boundary searches.
template <class Rng>
inline Transversal random_tree_transversal(const FiniteAction& action, const GroupFamily& family, Rng& rng) {
    std::vector<Word> reps(action.degree());
    std::vector<bool> seen(action.degree(), false);
    const auto alphabet = signed_alphabet(action.generator_count());
    std::vector<std::pair<std::size_t, Letter>> frontier;
    auto open = [&](std::size_t c) {
        seen[c] = true;
        for (Letter s : alphabet) frontier.emplace_back(c, s);
    };
    open(0);
    while (!frontier.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, frontier.size() - 1);
        const std::size_t k = pick(rng);
        const auto [c, s] = frontier[k];
        frontier[k] = frontier.back();
        frontier.pop_back();
        const std::size_t d = action.act(c, s);
        if (seen[d]) continue;
        reps[d] = reps[c] * letter_word(s);
        open(d);
    }
    return measure_transversal(std::move(reps), action, family);
}

/// Makes the induced subgraph connected without increasing the boundary.
/// Each round picks the lowest-numbered component C that does not contain
/// the basepoint and an edge (x, xs) with x in C whose endpoint lies in the
/// coset of a representative y from another component; then C is replaced
/// by the left translate (y s^-1 x^-1) C, which represents the same cosets
/// and now touches y's component.
inline Transversal connect_repair(const Transversal& t, const FiniteAction& action, const GroupFamily& family) {
    Transversal current = measure_transversal(t.reps, action, family);
    const auto alphabet = signed_alphabet(family.generator_count());
    while (!current.is_connected) {
        detail::ElementSet set(family, current.reps);
        detail::DisjointSets dsu(current.size());
        for (std::size_t c = 0; c < current.size(); ++c)
            for (Letter s : alphabet)
                if (auto hit = set.find(family.apply(set.form(c), s))) dsu.unite(c, *hit);

        bool moved = false;
        for (std::size_t c = 0; c < current.size() && !moved; ++c) {
            const std::size_t root = dsu.find(c);
            if (root == dsu.find(0)) continue;
            for (Letter s : alphabet) {
                const std::size_t target = action.act(c, s);
                if (dsu.find(target) == root) continue;
                // x = reps[c], y = reps[target]; g = x s y^-1 lies in H.
                const Word shift = current.reps[target] * letter_word(-s) * current.reps[c].inverse();
                std::vector<Word> reps = current.reps;
                for (std::size_t d = 0; d < reps.size(); ++d)
                    if (dsu.find(d) == root) reps[d] = shift * current.reps[d];
                current = measure_transversal(std::move(reps), action, family);
                moved = true;
                break;
            }
        }
        if (!moved) throw Error("connect_repair: Schreier graph is not connected");
    }
    return current;
}

/// Greedy boundary descent. A move replaces reps[c] (c != 0) by
/// reps[c . s^-1] * s, an element of the same coset adjacent to the current
/// set. Each step applies the move with the largest boundary decrease,
/// breaking ties by the smallest (coset, letter position); the search stops
/// after `budget` moves or at a local minimum.
inline Transversal local_search_boundary_min(const Transversal& t, const FiniteAction& action,
                                             const GroupFamily& family, std::size_t budget) {
    detail::check_transversal(t.reps, action);
    std::vector<Word> reps = t.reps;
    detail::ElementSet set(family, reps);
    const auto alphabet = signed_alphabet(family.generator_count());

    // Neighbours of nf inside the set, ignoring coset `skip`.
    auto degree_in_set = [&](const NormalForm& nf, std::size_t skip) {
        std::size_t deg = 0;
        for (Letter s : alphabet)
            if (auto hit = set.find(family.apply(nf, s)); hit && *hit != skip) ++deg;
        return deg;
    };

    for (std::size_t step = 0; step < budget; ++step) {
        std::size_t best_gain = 0, best_c = 0;
        Letter best_s = 0;
        NormalForm best_form;
        for (std::size_t c = 1; c < reps.size(); ++c) {
            const std::size_t old_deg = degree_in_set(set.form(c), c);
            for (Letter s : alphabet) {
                const std::size_t from = action.act(c, -s);
                if (from == c) continue;
                NormalForm candidate = family.apply(set.form(from), s);
                if (candidate == set.form(c)) continue;
                const std::size_t new_deg = degree_in_set(candidate, c);
                if (new_deg > old_deg && new_deg - old_deg > best_gain) {
                    best_gain = new_deg - old_deg;
                    best_c = c;
                    best_s = s;
                    best_form = std::move(candidate);
                }
            }
        }
        if (best_gain == 0) break;
        reps[best_c] = reps[action.act(best_c, -best_s)] * letter_word(best_s);
        set.replace(best_c, std::move(best_form));
    }
    return measure_transversal(std::move(reps), action, family);
}

/// Monotile construction for a refining normal tower. The transversal at
/// `tile_level` (Schreier tree, unless `tile` is given) is the tile T. For
/// each step j -> j+1 the level-(j+1) transversal is a union of left
/// translates g T_j with g in H_j, one for each coset of H_{j+1} in H_j.
/// Translates are placed greedily: starting from T_j itself, the next one
/// is the unplaced translate sharing the most Cayley edges with the union
/// so far (first found wins ties). Levels are 1-based.
inline Transversal weiss_tiling(const ChainSpec& chain, std::size_t tile_level, std::size_t target_level,
                                std::optional<Transversal> tile = std::nullopt, TilingPatch* patch = nullptr) {
    if (!chain.refining || !chain.normal) throw InvalidArgument("weiss_tiling needs a refining normal tower");
    if (tile_level < 1 || tile_level > target_level || target_level > chain.depth())
        throw InvalidArgument("weiss_tiling: levels " + std::to_string(tile_level) + " -> " +
                              std::to_string(target_level) + " are not in refinement relation");
    const GroupFamily& family = chain.family;
    Transversal current = tile ? measure_transversal(tile->reps, chain.levels[tile_level - 1], family)
                               : schreier_tree_transversal(chain.levels[tile_level - 1], family);
    const auto alphabet = signed_alphabet(family.generator_count());
    TilingPatch total;

    for (std::size_t j = tile_level; j < target_level; ++j) {
        const FiniteAction& coarse = chain.levels[j - 1];
        const FiniteAction& fine = chain.levels[j];
        const Permutation& down = chain.refinement_maps[j - 1];
        const detail::ElementSet tile_set(family, current.reps);

        std::vector<NormalForm> tile_forms;
        for (std::size_t c = 0; c < current.size(); ++c) tile_forms.push_back(tile_set.form(c));
        std::vector<Word> tile_inverse;
        for (const Word& w : current.reps) tile_inverse.push_back(w.inverse());

        // Union built so far: element -> fine coset; and fine coset -> word.
        std::unordered_map<NormalForm, std::size_t, NormalFormHash> union_index;
        std::vector<NormalForm> union_order;
        std::vector<std::optional<Word>> fine_reps(fine.degree());
        std::vector<bool> kernel_placed(fine.degree(), false);
        std::size_t kernel_size = 0;
        for (std::size_t c = 0; c < fine.degree(); ++c)
            if (down[c] == 0) ++kernel_size;

        auto place = [&](const Word& g) {
            kernel_placed[fine.act(0, g)] = true;
            for (std::size_t c = 0; c < current.size(); ++c) {
                Word w = family.canonical_word(family.normal_form(g * current.reps[c]));
                if (c == 0 && g.empty()) w = Word{};
                const std::size_t coset = fine.act(0, w);
                NormalForm nf = family.normal_form(w);
                if (fine_reps[coset]) {
                    ++total.removed;
                    continue;
                }
                fine_reps[coset] = w;
                union_index.emplace(nf, coset);
                union_order.push_back(std::move(nf));
            }
        };

        place(Word{});
        for (std::size_t placed = 1; placed < kernel_size; ++placed) {
            std::optional<Word> best;
            std::size_t best_score = 0;
            std::unordered_map<NormalForm, bool, NormalFormHash> tried;
            for (const NormalForm& x : union_order)
                for (Letter s : alphabet) {
                    NormalForm y = family.apply(x, s);
                    if (union_index.contains(y)) continue;
                    const Word y_word = family.canonical_word(y);
                    const std::size_t coarse_coset = coarse.act(0, y_word);
                    const Word g = family.canonical_word(family.normal_form(y_word * tile_inverse[coarse_coset]));
                    const std::size_t kappa = fine.act(0, g);
                    if (kernel_placed[kappa] || down[kappa] != 0) continue;
                    NormalForm g_form = family.normal_form(g);
                    if (!tried.emplace(g_form, true).second) continue;
                    std::size_t score = 0;
                    for (const NormalForm& t : tile_forms) {
                        NormalForm gt = family.normal_form(g * family.canonical_word(t));
                        for (Letter u : alphabet)
                            if (union_index.contains(family.apply(gt, u))) ++score;
                    }
                    if (!best || score > best_score) {
                        best = g;
                        best_score = score;
                    }
                }
            if (!best) break;
            place(*best);
        }

        // Fill any coset the translates missed from an already covered neighbour.
        bool progress = true;
        while (progress) {
            progress = false;
            for (std::size_t c = 0; c < fine.degree(); ++c) {
                if (fine_reps[c]) continue;
                for (Letter s : alphabet) {
                    const std::size_t from = fine.act(c, -s);
                    if (!fine_reps[from]) continue;
                    fine_reps[c] = *fine_reps[from] * letter_word(s);
                    ++total.added;
                    progress = true;
                    break;
                }
            }
        }
        std::vector<Word> reps;
        reps.reserve(fine.degree());
        for (auto& r : fine_reps) reps.push_back(std::move(*r));
        current = measure_transversal(std::move(reps), fine, family);
    }
    if (patch) *patch = total;
    return current;
}

}  // namespace torsion
