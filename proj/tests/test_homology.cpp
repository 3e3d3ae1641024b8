#include "torsion/reidemeister_schreier.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

using namespace torsion;

namespace {

ChainComplexSpec circle_complex() {
    ChainComplexSpec cx;
    cx.generator_count = 1;
    cx.ranks = {1, 1};
    cx.boundaries.emplace_back(0, 1);
    GroupRingMatrix d1(1, 1);
    d1.at(0, 0) = GroupRingElement(Word{1}) - GroupRingElement::one();
    cx.boundaries.push_back(d1);
    cx.acyclic_cover = {false, true};
    return cx;
}

FiniteAction cyclic_action(const Presentation& p, std::uint32_t n) {
    Permutation shift(n);
    for (std::uint32_t c = 0; c < n; ++c) shift[c] = (c + 1) % n;
    return action_from_images(p, {shift});
}

FiniteAction trivial_action(const Presentation& p) {
    return action_from_images(p, std::vector<Permutation>(p.generator_count(), Permutation{0}));
}

struct PipelineResult {
    HomologyGroup rs, rs_unkilled, induced;
    SubgroupPresentation sp;
    Transversal transversal;
};

PipelineResult run_both(const GroupFamily& fam, const FiniteAction& act, Transversal t) {
    PipelineResult r;
    r.transversal = connect_repair(t, act, fam);
    r.sp = reidemeister_schreier(fam.presentation(), act, r.transversal, fam);
    r.rs = subgroup_abelianization(r.sp, true);
    r.rs_unkilled = subgroup_abelianization(r.sp, false);
    const HomologyGroup h = homology(induce(presentation_complex(fam.presentation()), act), 1);
    r.induced = h;
    return r;
}

}  // namespace

TEST(PresentationComplex, TorusBoundary) {
    const auto z2 = GroupFamily::free_abelian(2);
    const auto cx = presentation_complex(z2.presentation());
    EXPECT_EQ(cx.ranks, (std::vector<std::size_t>{1, 2, 1}));
    EXPECT_EQ(cx.boundaries[2].at(0, 0), GroupRingElement::one() - GroupRingElement(Word{1, 2, -1}));
    EXPECT_EQ(cx.boundaries[2].at(1, 0), GroupRingElement(Word{1}) - GroupRingElement(Word{1, 2, -1, -2}));
    EXPECT_EQ(cx.boundaries[1].at(0, 1), GroupRingElement(Word{2}) - GroupRingElement::one());
    EXPECT_NO_THROW(verify_complex(cx, z2));
}

TEST(PresentationComplex, DegreesAndVerification) {
    EXPECT_EQ(presentation_complex(GroupFamily::free_abelian(1).presentation()).ranks,
              (std::vector<std::size_t>{1, 1, 0}));
    const auto heis = GroupFamily::heisenberg();
    const auto cx = presentation_complex(heis.presentation());
    EXPECT_EQ(cx.ranks, (std::vector<std::size_t>{1, 3, 3}));
    EXPECT_NO_THROW(verify_complex(cx, heis));
    for (const auto& fam : {GroupFamily::baumslag_solitar(3), GroupFamily::lamplighter(2), GroupFamily::free_abelian(4)})
        EXPECT_NO_THROW(verify_complex(presentation_complex(fam.presentation()), fam));
}

TEST(VerifyComplex, DetectsNonzeroComposite) {
    const auto z2 = GroupFamily::free_abelian(2);
    auto cx = presentation_complex(z2.presentation());
    cx.boundaries[2].at(0, 0) = GroupRingElement::one();
    EXPECT_THROW(verify_complex(cx, z2), InvalidArgument);
}

TEST(Induce, CircleOnThreePoints) {
    const auto cx = circle_complex();
    const auto act = cyclic_action(Presentation(1, {}), 3);
    const auto ind = induce(cx, act);
    ASSERT_EQ(ind.boundaries.size(), 2u);
    EXPECT_EQ(ind.boundaries[1], IntMatrix::from_dense({{-1, 0, 1}, {1, -1, 0}, {0, 1, -1}}));
    const auto rep = homology_torsion(ind, 1);
    EXPECT_EQ(rep.torsion, 1);
    EXPECT_EQ(rep.betti, 1u);
}

TEST(Induce, TrivialActionIsAugmentation) {
    const auto heis = GroupFamily::heisenberg();
    const auto cx = presentation_complex(heis.presentation());
    const auto ind = induce(cx, trivial_action(heis.presentation()));
    for (std::size_t d = 1; d <= cx.top_degree(); ++d)
        for (std::size_t i = 0; i < cx.boundaries[d].rows; ++i)
            for (std::size_t j = 0; j < cx.boundaries[d].cols; ++j)
                EXPECT_EQ(ind.boundaries[d].get(i, j), cx.boundaries[d].at(i, j).augmentation());
}

TEST(Induce, TorusDegreeFour) {
    const auto z2 = GroupFamily::free_abelian(2);
    const auto chain = congruence_chain(z2, 1);
    const auto ind = induce(presentation_complex(z2.presentation()), chain.levels[0]);
    EXPECT_EQ(ind.boundaries[1].rows(), 4u);
    EXPECT_EQ(ind.boundaries[1].cols(), 8u);
    EXPECT_EQ(ind.boundaries[2].rows(), 8u);
    EXPECT_EQ(ind.boundaries[2].cols(), 4u);
    EXPECT_TRUE((ind.boundaries[1] * ind.boundaries[2]).is_zero());
}

TEST(Induce, RejectsMismatchedAction) {
    const auto z2 = GroupFamily::free_abelian(2);
    const auto heis = GroupFamily::heisenberg();
    EXPECT_THROW(induce(presentation_complex(z2.presentation()), trivial_action(heis.presentation())),
                 InvalidArgument);
}

TEST(Homology, TorusCoversAreTori) {
    const auto z2 = GroupFamily::free_abelian(2);
    const auto cx = presentation_complex(z2.presentation());
    for (const auto& act : congruence_chain(z2, 4).levels) {
        const auto rep = homology_torsion(induce(cx, act), 1);
        EXPECT_EQ(rep.torsion, 1);
        EXPECT_EQ(rep.betti, 2u);
        EXPECT_EQ(rep.index, act.degree());
    }
}

TEST(Homology, ProjectivePlane) {
    const Presentation rp2(1, {Word{1, 1}});
    const auto ind = induce(presentation_complex(rp2), trivial_action(rp2));
    const auto h1 = homology(ind, 1);
    EXPECT_EQ(h1.torsion, 2);
    EXPECT_EQ(h1.betti, 0u);
    EXPECT_EQ(h1.torsion_factors, (std::vector<Integer>{2}));
    EXPECT_EQ(homology(ind, 2).betti, 0u);
    EXPECT_EQ(homology(ind, 0).betti, 1u);
    // The double cover is the sphere.
    const auto sphere = induce(presentation_complex(rp2), cyclic_action(rp2, 2));
    EXPECT_EQ(homology(sphere, 1).torsion, 1);
    EXPECT_EQ(homology(sphere, 2).betti, 1u);
}

TEST(Homology, RejectsInconsistentInput) {
    InducedComplex bad;
    bad.ranks = {1, 1, 1};
    bad.boundaries = {IntMatrix(0, 1), IntMatrix::from_dense({{1}}), IntMatrix::from_dense({{1}})};
    EXPECT_THROW(homology(bad, 1), InvalidArgument);
    EXPECT_THROW(homology(bad, 3), InvalidArgument);
}

TEST(Homology, EulerCharacteristicIsMultiplicative) {
    for (const auto& fam : {GroupFamily::free_abelian(2), GroupFamily::free_abelian(3), GroupFamily::heisenberg(),
                            GroupFamily::baumslag_solitar(2), GroupFamily::lamplighter(2)}) {
        const auto cx = presentation_complex(fam.presentation());
        for (const auto& act : congruence_chain(fam, 2).levels)
            EXPECT_EQ(euler_characteristic(induce(cx, act)),
                      static_cast<long long>(act.degree()) * euler_characteristic(cx))
                << fam.name();
    }
}

TEST(ReidemeisterSchreier, PlaneDegreeTwo) {
    const auto z2 = GroupFamily::free_abelian(2);
    const auto act = action_from_images(z2.presentation(), {{1, 0}, {0, 1}});
    const auto tree = schreier_tree_transversal(act, z2);
    EXPECT_EQ(tree.reps, (std::vector<Word>{Word{}, Word{1}}));
    const auto r = run_both(z2, act, tree);
    EXPECT_EQ(r.sp.generators.size(), 3u);
    EXPECT_EQ(r.rs.torsion, 1);
    EXPECT_EQ(r.rs.betti, 2u);
    EXPECT_EQ(r.induced.torsion, 1);
    EXPECT_EQ(r.induced.betti, 2u);
}

TEST(ReidemeisterSchreier, WholeGroup) {
    const auto z2 = GroupFamily::free_abelian(2);
    const auto act = trivial_action(z2.presentation());
    const auto t = schreier_tree_transversal(act, z2);
    const auto sp = reidemeister_schreier(z2.presentation(), act, t, z2);
    EXPECT_EQ(sp.generators.size(), 2u);
    EXPECT_EQ(sp.surviving_count(), 2u);
    EXPECT_EQ(sp.relations, z2.presentation().relators());
    EXPECT_EQ(subgroup_abelianization(sp).torsion, 1);
    EXPECT_EQ(torsion_bound_n1(sp, 4), 16);
}

TEST(ReidemeisterSchreier, RejectsDisconnectedTransversal) {
    const auto z = GroupFamily::free_abelian(1);
    const auto act = cyclic_action(z.presentation(), 2);
    const auto t = measure_transversal({Word{}, Word{1, 1, 1}}, act, z);
    EXPECT_THROW(reidemeister_schreier(z.presentation(), act, t, z), InvalidArgument);
}

TEST(ReidemeisterSchreier, SquareTransversalBound) {
    const auto z2 = GroupFamily::free_abelian(2);
    const auto act = congruence_chain(z2, 1).levels[0];
    const auto square = schreier_tree_transversal(act, z2);
    ASSERT_EQ(square.boundary_edges, 8u);
    const auto sp = reidemeister_schreier(z2.presentation(), act, square, z2);
    EXPECT_EQ(sp.generators.size(), 4u * 2u - 3u);
    EXPECT_LE(sp.surviving_count(), square.boundary_edges);
    const Integer bound = torsion_bound_n1(sp, z2.presentation().max_relator_length());
    EXPECT_LE(bound, ipow(Integer(4), 8));
    EXPECT_EQ(subgroup_abelianization(sp).torsion, 1);
    EXPECT_GE(bound, 1);
}

TEST(ReidemeisterSchreier, SchreierIndexAndEdgeCounts) {
    for (const auto& fam : {GroupFamily::free_abelian(2), GroupFamily::heisenberg(), GroupFamily::baumslag_solitar(2),
                            GroupFamily::lamplighter(2)}) {
        const auto chain = congruence_chain(fam, 2);
        for (const auto& act : chain.levels) {
            const auto t = schreier_tree_transversal(act, fam);
            const auto sp = reidemeister_schreier(fam.presentation(), act, t, fam);
            const std::size_t N = act.degree(), S = fam.generator_count();
            EXPECT_EQ(sp.generators.size(), N * S - (N - 1));
            EXPECT_EQ(sp.tree_edges, N - 1);
            // E'' <= dF relies on the presentation presenting the group.
            if (fam.presents_group()) EXPECT_LE(sp.surviving_count(), t.boundary_edges);
            else EXPECT_EQ(sp.surviving_count(), sp.generators.size());
            for (const Word& r : sp.relations) EXPECT_LE(r.length(), fam.presentation().max_relator_length());
        }
    }
}

TEST(ReidemeisterSchreier, HeisenbergDegreeEight) {
    const auto heis = GroupFamily::heisenberg();
    const auto act = congruence_chain(heis, 1).levels[0];
    const auto r = run_both(heis, act, schreier_tree_transversal(act, heis));
    EXPECT_EQ(r.rs.torsion, r.induced.torsion);
    EXPECT_LE(r.rs.torsion, torsion_bound_n1(r.sp, 5));
    EXPECT_EQ(torsion_bound_n1(r.sp, 5), ipow(Integer(5), r.sp.surviving_count()));
}

TEST(ReidemeisterSchreier, PipelinesAgreeAcrossFamilies) {
    struct Case {
        GroupFamily family;
        int depth;
    };
    for (const auto& cs : {Case{GroupFamily::free_abelian(2), 4}, Case{GroupFamily::free_abelian(3), 2},
                           Case{GroupFamily::heisenberg(), 2}, Case{GroupFamily::baumslag_solitar(2), 2},
                           Case{GroupFamily::baumslag_solitar(3), 3}, Case{GroupFamily::lamplighter(2), 2},
                           Case{GroupFamily::lamplighter(3), 1}}) {
        const auto chain = congruence_chain(cs.family, cs.depth);
        for (std::size_t i = 1; i <= chain.depth(); ++i) {
            const auto& act = chain.levels[i - 1];
            for (const auto& t : {schreier_tree_transversal(act, cs.family), weiss_tiling(chain, 1, i)}) {
                const auto r = run_both(cs.family, act, t);
                EXPECT_EQ(r.rs.torsion, r.induced.torsion) << cs.family.name() << " level " << i;
                EXPECT_EQ(r.rs.betti, r.induced.betti) << cs.family.name() << " level " << i;
                EXPECT_EQ(r.rs.torsion_factors, r.rs_unkilled.torsion_factors);
                EXPECT_EQ(r.rs.betti, r.rs_unkilled.betti);
                EXPECT_LE(r.rs.torsion, torsion_bound_n1(r.sp, cs.family.presentation().max_relator_length()));
            }
        }
    }
}

TEST(ReidemeisterSchreier, LamplighterCyclicCovers) {
    const auto lamp = GroupFamily::lamplighter(2);
    for (std::uint32_t n = 1; n <= 6; ++n) {
        const auto act = lamplighter_cyclic_quotient(lamp, n);
        const auto r = run_both(lamp, act, schreier_tree_transversal(act, lamp));
        // coker of (t^n - 1) on F_2[t, t^-1] is F_2[t]/(t^n - 1), of order 2^n.
        const Integer oracle = ipow(Integer(2), n);
        EXPECT_EQ(r.rs.torsion, oracle) << n;
        EXPECT_EQ(r.induced.torsion, oracle) << n;
        EXPECT_EQ(r.induced.betti, 1u);
        EXPECT_NEAR(log_integer(r.induced.torsion) / n, std::log(2.0), 1e-12);
    }
}

TEST(RelativeBound, TorusSquaresShrink) {
    const auto z2 = GroupFamily::free_abelian(2);
    const auto cx = presentation_complex(z2.presentation());
    const auto chain = congruence_chain(z2, 4);
    double previous = 1e9;
    for (std::size_t i = 1; i <= 4; ++i) {
        const auto& act = chain.levels[i - 1];
        const auto t = weiss_tiling(chain, 1, i);
        const auto rb = relative_bound(cx, act, t, 1, z2);
        const std::size_t L = std::size_t{1} << i;
        EXPECT_EQ(rb.interior, (L - 1) * (L - 1));
        EXPECT_EQ(rb.boundary_cells, 2 * (act.degree() - rb.interior));
        EXPECT_EQ(rb.base, 4);
        const double ratio = static_cast<double>(rb.boundary_cells) / static_cast<double>(act.degree());
        EXPECT_LT(ratio, previous);
        previous = ratio;
        EXPECT_LE(homology_torsion(induce(cx, act), 1).torsion, rb.bound);
    }
}

TEST(RelativeBound, WholeGroupAndErrors) {
    const auto z2 = GroupFamily::free_abelian(2);
    const auto cx = presentation_complex(z2.presentation());
    const auto act = trivial_action(z2.presentation());
    const auto t = schreier_tree_transversal(act, z2);
    const auto rb = relative_bound(cx, act, t, 1, z2);
    EXPECT_EQ(rb.interior, 0u);
    EXPECT_EQ(rb.boundary_cells, 2u);
    EXPECT_EQ(rb.bound, 16);
    EXPECT_GE(rb.bound, homology_torsion(induce(cx, act), 1).torsion);
    EXPECT_THROW(relative_bound(cx, act, t, 2, z2), InvalidArgument);
    EXPECT_THROW(relative_bound(cx, act, t, 0, z2), InvalidArgument);
}

TEST(RelativeBound, LineIntervals) {
    const auto z = GroupFamily::free_abelian(1);
    const auto cx = presentation_complex(z.presentation());
    for (std::uint32_t n : {2u, 5u, 16u}) {
        const auto act = cyclic_action(z.presentation(), n);
        const auto t = schreier_tree_transversal(act, z);
        const auto rb = relative_bound(cx, act, t, 1, z);
        // Only the right end of the interval sees its edge leave F.
        EXPECT_EQ(rb.boundary_cells, t.boundary_edges / 2);
        EXPECT_EQ(rb.bound, 1);
    }
}

TEST(ComplexFixture, RoundTrip) {
    const auto heis = GroupFamily::heisenberg();
    const auto cx = presentation_complex(heis.presentation());
    std::stringstream buf;
    write_complex(buf, cx);
    const auto back = read_complex(buf);
    EXPECT_EQ(back.ranks, cx.ranks);
    EXPECT_EQ(back.acyclic_cover, cx.acyclic_cover);
    for (std::size_t d = 1; d <= cx.top_degree(); ++d)
        for (std::size_t k = 0; k < cx.boundaries[d].entries.size(); ++k)
            EXPECT_EQ(back.boundaries[d].entries[k], cx.boundaries[d].entries[k]);
}

TEST(ComplexFixture, ParsesTorusText) {
    std::istringstream in(
        "# torus\n"
        "generators 2\n"
        "ranks 1 2 1\n"
        "acyclic 1\n"
        "(1, 0, 0): 1*[1] - 1*[]\n"
        "(1, 0, 1): 1*[2] - 1*[]\n"
        "(2, 0, 0): 1*[] - 1*[1 2 -1]\n"
        "(2, 1, 0): 1*[1] - 1*[1 2 -1 -2]\n");
    const auto cx = read_complex(in);
    EXPECT_TRUE(cx.acyclic_cover[1]);
    const auto z2 = GroupFamily::free_abelian(2);
    EXPECT_NO_THROW(verify_complex(cx, z2));
    const auto rep = homology_torsion(induce(cx, congruence_chain(z2, 2).levels[1]), 1);
    EXPECT_EQ(rep.torsion, 1);
    EXPECT_EQ(rep.betti, 2u);
}

TEST(ComplexFixture, RejectsMalformedText) {
    for (const char* text : {"ranks 1 1\n(1, 0, 0): 1*[1]\n", "generators 1\nranks 1 1\n(1, 1, 0): 1*[1]\n",
                             "generators 1\nranks 1 1\n(1, 0, 0): 1*[1] 1*[]\n", "generators 1\nbogus\n",
                             "generators 1\nranks 1 1\n(1, 0, 0): 1*[2]\n"}) {
        std::istringstream in(text);
        EXPECT_THROW(read_complex(in), InvalidArgument) << text;
    }
}
