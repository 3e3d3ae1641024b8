#pragma once

#include "torsion/homology.hpp"

namespace torsion {

/// Edge of the Schreier graph: from `coset` along generator `generator` (1-based).
struct SchreierEdge {
    std::size_t coset;
    int generator;
    friend bool operator==(const SchreierEdge&, const SchreierEdge&) = default;
};

/// Presentation of H from a spanning tree of the Schreier graph. Generators
/// are the non-tree edges E; `trivial[e]` marks E', the edges whose lift
/// joins two elements of the transversal; relations are the relators read
/// from every coset, as words over E (letters are 1-based indices into
/// `generators`).
struct SubgroupPresentation {
    std::vector<SchreierEdge> generators;
    std::vector<bool> trivial;
    std::vector<Word> relations;
    std::size_t tree_edges = 0;

    std::size_t surviving_count() const {
        return static_cast<std::size_t>(std::count(trivial.begin(), trivial.end(), false));
    }

    /// Relations with every E' generator deleted, over E'' renumbered 1..|E''|.
    std::vector<Word> reduced_relations() const {
        std::vector<int> renumber(generators.size(), 0);
        int next = 0;
        for (std::size_t e = 0; e < generators.size(); ++e)
            if (!trivial[e]) renumber[e] = ++next;
        std::vector<Word> out;
        for (const Word& r : relations) {
            std::vector<Letter> kept;
            for (Letter l : r.letters())
                if (int idx = renumber[std::abs(l) - 1]) kept.push_back(l > 0 ? idx : -idx);
            Word w(kept);
            if (!w.empty()) out.push_back(std::move(w));
        }
        return out;
    }
};

/// Abelianized relation matrix: one row per generator, one column per
/// relation (exponent sums). With `kill_trivial` the rows are E'' only;
/// otherwise all of E is kept and each E' generator gets an extra column
/// e = 1.
inline IntMatrix abelianized_relations(const SubgroupPresentation& sp, bool kill_trivial) {
    if (kill_trivial) {
        const auto rels = sp.reduced_relations();
        IntMatrix m(sp.surviving_count(), rels.size());
        for (std::size_t j = 0; j < rels.size(); ++j)
            for (Letter l : rels[j].letters()) m.add(static_cast<std::size_t>(std::abs(l) - 1), j, l > 0 ? 1 : -1);
        return m;
    }
    const std::size_t extra = sp.generators.size() - sp.surviving_count();
    IntMatrix m(sp.generators.size(), sp.relations.size() + extra);
    for (std::size_t j = 0; j < sp.relations.size(); ++j)
        for (Letter l : sp.relations[j].letters()) m.add(static_cast<std::size_t>(std::abs(l) - 1), j, l > 0 ? 1 : -1);
    std::size_t col = sp.relations.size();
    for (std::size_t e = 0; e < sp.generators.size(); ++e)
        if (sp.trivial[e]) m.add(e, col++, 1);
    return m;
}

/// H_1 of the subgroup from its presentation.
inline HomologyGroup subgroup_abelianization(const SubgroupPresentation& sp, bool kill_trivial = true) {
    const IntMatrix m = abelianized_relations(sp, kill_trivial);
    const SnfResult s = snf(m);
    return HomologyGroup{s.torsion, s.cokernel_free_rank, s.nontrivial_factors()};
}

/// Reidemeister-Schreier rewriting for the stabilizer of 0. The spanning
/// tree is a BFS tree of the Cayley subgraph induced on the transversal,
/// which projects to a spanning tree of the Schreier graph; so an edge
/// outside the tree whose lift has both ends in F bounds a null-homotopic
/// loop and its generator is trivial. That argument needs the presentation
/// to present the family's group; otherwise E' is left empty.
inline SubgroupPresentation reidemeister_schreier(const Presentation& p, const FiniteAction& action,
                                                  const Transversal& t, const GroupFamily& family) {
    detail::check_transversal(t.reps, action);
    if (action.generator_count() != p.generator_count()) throw InvalidArgument("action/presentation mismatch");
    const Transversal measured = measure_transversal(t.reps, action, family);
    if (!measured.is_connected) throw InvalidArgument("reidemeister_schreier needs a connected transversal");
    const std::size_t N = action.degree();
    const int gens = p.generator_count();
    const detail::ElementSet set(family, t.reps);

    // inside[c][g]: the lift of edge (c, g) starting at reps[c] ends in F.
    std::vector<std::vector<bool>> inside(N, std::vector<bool>(gens + 1, false));
    for (std::size_t c = 0; c < N; ++c)
        for (int g = 1; g <= gens; ++g) inside[c][g] = set.find(family.apply(set.form(c), g)).has_value();

    std::vector<std::vector<bool>> in_tree(N, std::vector<bool>(gens + 1, false));
    std::vector<bool> seen(N, false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    std::size_t tree_edges = 0;
    while (!queue.empty()) {
        const std::size_t c = queue.front();
        queue.pop_front();
        for (int g = 1; g <= gens; ++g) {
            if (inside[c][g] && !seen[action.act(c, g)]) {
                const std::size_t d = action.act(c, g);
                seen[d] = true;
                in_tree[c][g] = true;
                ++tree_edges;
                queue.push_back(d);
            }
            const std::size_t from = action.act(c, -g);
            if (inside[from][g] && !seen[from]) {
                seen[from] = true;
                in_tree[from][g] = true;
                ++tree_edges;
                queue.push_back(from);
            }
        }
    }

    SubgroupPresentation sp;
    sp.tree_edges = tree_edges;
    std::vector<std::vector<int>> gen_index(N, std::vector<int>(gens + 1, 0));
    for (std::size_t c = 0; c < N; ++c)
        for (int g = 1; g <= gens; ++g)
            if (!in_tree[c][g]) {
                sp.generators.push_back({c, g});
                sp.trivial.push_back(family.presents_group() && inside[c][g]);
                gen_index[c][g] = static_cast<int>(sp.generators.size());
            }
    for (std::size_t c = 0; c < N; ++c)
        for (const Word& r : p.relators()) {
            std::vector<Letter> rewritten;
            std::size_t at = c;
            for (Letter l : r.letters()) {
                if (l > 0) {
                    if (int e = gen_index[at][l]) rewritten.push_back(e);
                    at = action.act(at, l);
                } else {
                    const std::size_t from = action.act(at, l);
                    if (int e = gen_index[from][-l]) rewritten.push_back(-e);
                    at = from;
                }
            }
            sp.relations.emplace_back(rewritten);
        }
    return sp;
}

/// k^{|E''|} with k the longest relator length.
inline Integer torsion_bound_n1(const SubgroupPresentation& sp, std::size_t k) {
    return ipow(Integer(k), sp.surviving_count());
}

}  // namespace torsion
