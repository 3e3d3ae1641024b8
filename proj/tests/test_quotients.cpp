#include "torsion/chains.hpp"

#include <gtest/gtest.h>

using namespace torsion;

namespace {

std::vector<std::size_t> degrees(const ChainSpec& chain) {
    std::vector<std::size_t> out;
    for (const auto& level : chain.levels) out.push_back(level.degree());
    return out;
}

using Degrees = std::vector<std::size_t>;

}  // namespace

TEST(ActionFromImages, Examples) {
    const auto z2 = GroupFamily::free_abelian(2);
    const auto swap_a = action_from_images(z2.presentation(), {{1, 0}, {0, 1}});
    EXPECT_EQ(swap_a.degree(), 2u);
    // The stabilizer of 0 contains a^2, b and a b a^-1, but not a.
    EXPECT_EQ(swap_a.act(0, Word{1, 1}), 0u);
    EXPECT_EQ(swap_a.act(0, Word{2}), 0u);
    EXPECT_EQ(swap_a.act(0, Word{1, 2, -1}), 0u);
    EXPECT_EQ(swap_a.act(0, Word{1}), 1u);
    EXPECT_NO_THROW(action_from_images(z2.presentation(), {{1, 0}, {1, 0}}));

    const auto heis = GroupFamily::heisenberg();
    // x and z as non-commuting transpositions of three points.
    EXPECT_THROW(action_from_images(heis.presentation(), {{1, 0, 2}, {0, 1, 2}, {0, 2, 1}}), RelatorViolation);
}

TEST(ActionFromImages, RejectsBadInput) {
    const auto z2 = GroupFamily::free_abelian(2);
    EXPECT_THROW(action_from_images(z2.presentation(), {{0, 1}, {0, 1}}), NotTransitive);
    EXPECT_THROW(action_from_images(z2.presentation(), {{0, 0}, {0, 1}}), InvalidArgument);
    EXPECT_THROW(action_from_images(z2.presentation(), {{1, 0}, {0, 1, 2}}), InvalidArgument);
    EXPECT_THROW(action_from_images(z2.presentation(), {{1, 0}}), InvalidArgument);
}

TEST(CongruenceChain, Degrees) {
    EXPECT_EQ(degrees(congruence_chain(GroupFamily::free_abelian(2), 3)), (Degrees{4, 16, 64}));
    EXPECT_EQ(degrees(congruence_chain(GroupFamily::heisenberg(), 2)), (Degrees{8, 64}));
    EXPECT_EQ(degrees(congruence_chain(GroupFamily::free_abelian(1), 4)), (Degrees{2, 4, 8, 16}));
    EXPECT_EQ(degrees(congruence_chain(GroupFamily::lamplighter(2), 2)), (Degrees{8, 64}));
    EXPECT_EQ(degrees(congruence_chain(GroupFamily::lamplighter(3), 2)), (Degrees{18, 324}));
    // BS(1,2) onto Z/3^i semidirect <2>: 2 has order 2 mod 3 and 6 mod 9.
    EXPECT_EQ(degrees(congruence_chain(GroupFamily::baumslag_solitar(2), 2)), (Degrees{6, 54}));
    // BS(1,3) uses q = 2: 3 has order 1 mod 2, 2 mod 4, 2 mod 8.
    EXPECT_EQ(degrees(congruence_chain(GroupFamily::baumslag_solitar(3), 3)), (Degrees{2, 8, 16}));

    const auto cyclic = congruence_chain(GroupFamily::lamplighter(2), 3, true);
    EXPECT_EQ(degrees(cyclic), (Degrees{2, 4, 8}));
    EXPECT_FALSE(cyclic.exhausting);
    EXPECT_TRUE(congruence_chain(GroupFamily::free_abelian(2), 1).exhausting);
}

TEST(CongruenceChain, Errors) {
    EXPECT_THROW(congruence_chain(GroupFamily::free_abelian(2), 0), InvalidArgument);
    EXPECT_THROW(congruence_chain(GroupFamily::heisenberg(), 1, true), InvalidArgument);
    EXPECT_THROW(congruence_chain(GroupFamily::heisenberg(), 6), BudgetExceeded);
    EXPECT_THROW(congruence_chain(GroupFamily::free_abelian(2), 3, false, 20), BudgetExceeded);
}

TEST(CongruenceChain, RefinementsCommuteAndFibersAreEqual) {
    for (const auto& chain : {congruence_chain(GroupFamily::free_abelian(3), 3),
                              congruence_chain(GroupFamily::heisenberg(), 2),
                              congruence_chain(GroupFamily::baumslag_solitar(2), 3),
                              congruence_chain(GroupFamily::lamplighter(2), 3),
                              congruence_chain(GroupFamily::lamplighter(2), 4, true)}) {
        ASSERT_EQ(chain.refinement_maps.size(), chain.depth() - 1);
        for (std::size_t i = 0; i + 1 < chain.depth(); ++i) {
            const auto& coarse = chain.levels[i];
            const auto& fine = chain.levels[i + 1];
            const auto& map = chain.refinement_maps[i];
            EXPECT_EQ(map[0], 0u);
            std::vector<std::size_t> fiber(coarse.degree(), 0);
            for (std::size_t c = 0; c < fine.degree(); ++c) {
                ++fiber[map[c]];
                for (int g = 1; g <= fine.generator_count(); ++g)
                    EXPECT_EQ(map[fine.act(c, g)], coarse.act(map[c], g));
            }
            for (std::size_t f : fiber) EXPECT_EQ(f * coarse.degree(), fine.degree()) << chain.family.name();
        }
    }
}

TEST(CyclicIndexChain, Degrees) {
    const auto chain = lamplighter_cyclic_index_chain(GroupFamily::lamplighter(2), 5);
    EXPECT_EQ(degrees(chain), (Degrees{1, 2, 3, 4, 5}));
    EXPECT_FALSE(chain.refining);
    EXPECT_FALSE(chain.exhausting);
}

TEST(ReducedWords, CountsMatchFreeGroupSpheres) {
    // 2g (2g - 1)^(L - 1) reduced words of length L.
    const auto words = enumerate_reduced_words(2, 4);
    EXPECT_EQ(words.size(), 4u + 12u + 36u + 108u);
    for (const Word& w : words) EXPECT_EQ(Word(w.letters()), w);
}

TEST(Farber, FreeAbelianCongruenceGeneratorHasNoFixedPoints) {
    const auto chain = congruence_chain(GroupFamily::free_abelian(2), 3);
    const auto rows = farber_diagnostic(chain, 1);
    bool found = false;
    for (const auto& row : rows)
        if (row.word == Word{1}) {
            found = true;
            EXPECT_EQ(row.fixed_ratio, (Ratio{0, 1})) << "level " << row.level;
        }
    EXPECT_TRUE(found);
}

TEST(Farber, IdentityWordsExcluded) {
    const auto chain = congruence_chain(GroupFamily::free_abelian(2), 2);
    const auto rows = farber_diagnostic(chain, 4);
    for (const auto& row : rows) EXPECT_FALSE(chain.family.is_identity(row.word)) << format_word(row.word);
    // a b a^-1 b^-1 is trivial, so it must not appear; one row per level for each element.
    std::map<NormalForm, std::size_t> per_element;
    for (const auto& row : rows) ++per_element[chain.family.normal_form(row.word)];
    for (const auto& [nf, count] : per_element) EXPECT_EQ(count, chain.depth());
    EXPECT_THROW(farber_diagnostic(chain, 0), InvalidArgument);
}

TEST(Farber, LamplighterCyclicTowerIsNotFarber) {
    const auto chain = congruence_chain(GroupFamily::lamplighter(2), 3, true);
    for (const auto& row : farber_diagnostic(chain, 2))
        if (row.word == Word{1}) EXPECT_EQ(row.fixed_ratio, (Ratio{1, 1}));
}

TEST(Farber, NormalChainsHaveZeroOneRatios) {
    for (const auto& chain : {congruence_chain(GroupFamily::heisenberg(), 2),
                              congruence_chain(GroupFamily::baumslag_solitar(2), 2),
                              congruence_chain(GroupFamily::lamplighter(2), 2)}) {
        for (const auto& row : farber_diagnostic(chain, 3)) {
            const auto& act = chain.levels[row.level - 1];
            bool identity_perm = true;
            for (std::size_t c = 0; c < act.degree(); ++c) identity_perm = identity_perm && act.act(c, row.word) == c;
            EXPECT_TRUE(row.fixed_ratio == (Ratio{0, 1}) || row.fixed_ratio == (Ratio{1, 1}));
            EXPECT_EQ(row.fixed_ratio == (Ratio{1, 1}), identity_perm);
        }
    }
}

TEST(Farber, ExhaustingChainSeparatesShortWordsEventually) {
    const auto chain = congruence_chain(GroupFamily::heisenberg(), 3);
    for (const auto& row : farber_diagnostic(chain, 3))
        if (row.level == 3) EXPECT_EQ(row.fixed_ratio, (Ratio{0, 1})) << format_word(row.word);
}
