#include "torsion/snf.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace torsion;

namespace {

IntMatrix random_matrix(std::mt19937& rng, std::size_t max_dim, int max_abs, double density = 0.7) {
    std::uniform_int_distribution<std::size_t> dim(1, max_dim);
    std::uniform_int_distribution<int> val(-max_abs, max_abs);
    std::bernoulli_distribution keep(density);
    IntMatrix m(dim(rng), dim(rng));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (keep(rng)) m.set(r, c, val(rng));
    return m;
}

std::vector<Integer> factors(std::initializer_list<int> v) { return {v.begin(), v.end()}; }

}  // namespace

TEST(Snf, Examples) {
    auto d = snf(IntMatrix::from_dense({{2, 0}, {0, 3}}));
    EXPECT_EQ(d.invariant_factors, factors({1, 6}));
    EXPECT_EQ(d.torsion, 6);
    auto id = snf(IntMatrix::from_dense({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
    EXPECT_EQ(id.invariant_factors, factors({1, 1, 1}));
    EXPECT_EQ(id.torsion, 1);
    auto s = snf(IntMatrix::from_dense({{2, 1}, {1, 2}}));
    EXPECT_EQ(s.invariant_factors, factors({1, 3}));
    EXPECT_EQ(s.torsion, 3);
}

TEST(Snf, ZeroAndEmptyMatrices) {
    auto z = snf(IntMatrix(3, 2));
    EXPECT_EQ(z.rank, 0u);
    EXPECT_EQ(z.torsion, 1);
    EXPECT_EQ(z.cokernel_free_rank, 3u);
    auto e = snf(IntMatrix(0, 0));
    EXPECT_EQ(e.rank, 0u);
    EXPECT_EQ(snf(IntMatrix(2, 0)).cokernel_free_rank, 2u);
}

TEST(Snf, KnownCokernels) {
    // Z^3 / <(2,4,4), (-6,6,12), (10,-4,-16)> = Z/2 + Z/6 + Z/12
    auto s = snf(IntMatrix::from_dense({{2, -6, 10}, {4, 6, -4}, {4, 12, -16}}));
    EXPECT_EQ(s.invariant_factors, factors({2, 6, 12}));
    EXPECT_EQ(s.torsion, 144);
    // column (4, 6): Z^2 / <(4,6)> = Z + Z/2
    auto t = snf(IntMatrix::from_dense({{4}, {6}}));
    EXPECT_EQ(t.invariant_factors, factors({2}));
    EXPECT_EQ(t.cokernel_free_rank, 1u);
}

TEST(Snf, DenseFallbackAgreesWithSparsePath) {
    std::mt19937 rng(99);
    SnfOptions sparse_only{1.1, 0};
    SnfOptions always_dense{0.0, 0};
    for (int i = 0; i < 200; ++i) {
        IntMatrix m = random_matrix(rng, 8, 9, 0.5);
        auto a = snf(m, sparse_only), b = snf(m, always_dense), c = snf(m);
        EXPECT_EQ(a.invariant_factors, b.invariant_factors);
        EXPECT_EQ(a.invariant_factors, c.invariant_factors);
    }
}

TEST(Snf, DivisibilityChainAndMinorGcdOracle) {
    std::mt19937 rng(1);
    for (int i = 0; i < 1000; ++i) {
        IntMatrix m = random_matrix(rng, 6, 9);
        auto s = snf(m);
        for (std::size_t j = 0; j + 1 < s.invariant_factors.size(); ++j)
            EXPECT_EQ(s.invariant_factors[j + 1] % s.invariant_factors[j], 0);
        EXPECT_EQ(s.torsion, minor_gcd(m, s.rank));
        if (s.rank < std::min(m.rows(), m.cols())) {
            EXPECT_EQ(minor_gcd(m, s.rank + 1), 0);
        }
        EXPECT_LE(s.torsion, torsion_bound(m));
    }
}

TEST(Snf, InvariantUnderPermutationsAndSignFlips) {
    std::mt19937 rng(4);
    for (int i = 0; i < 200; ++i) {
        IntMatrix m = random_matrix(rng, 6, 9);
        std::vector<std::size_t> rp(m.rows()), cp(m.cols());
        std::iota(rp.begin(), rp.end(), 0);
        std::iota(cp.begin(), cp.end(), 0);
        std::shuffle(rp.begin(), rp.end(), rng);
        std::shuffle(cp.begin(), cp.end(), rng);
        std::bernoulli_distribution flip(0.5);
        std::vector<int> rs(m.rows()), cs(m.cols());
        for (auto& s : rs) s = flip(rng) ? -1 : 1;
        for (auto& s : cs) s = flip(rng) ? -1 : 1;
        IntMatrix t(m.rows(), m.cols());
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c) t.set(rp[r], cp[c], m.get(r, c) * rs[r] * cs[c]);
        EXPECT_EQ(snf(m).invariant_factors, snf(t).invariant_factors);
    }
}

TEST(Snf, LargeCoefficientGrowthStaysExact) {
    // Z^2 / <(F_{n+1}, F_n), (F_n, F_{n-1})> with Fibonacci entries: det = +-1.
    Integer a = 1, b = 1;
    for (int i = 0; i < 150; ++i) {
        Integer c = a + b;
        a = b;
        b = c;
    }
    Integer prev = b - a;
    IntMatrix m(2, 2);
    m.set(0, 0, b);
    m.set(0, 1, a);
    m.set(1, 0, a);
    m.set(1, 1, prev);
    EXPECT_EQ(snf(m).invariant_factors, factors({1, 1}));
    IntMatrix big(1, 1);
    big.set(0, 0, ipow(Integer(7), 60));
    EXPECT_EQ(snf(big).torsion, ipow(Integer(7), 60));
}

TEST(MinorGcd, Examples) {
    EXPECT_EQ(minor_gcd(IntMatrix::from_dense({{2, 0}, {0, 3}}), 2), 6);
    EXPECT_EQ(minor_gcd(IntMatrix::from_dense({{2, 1}, {1, 2}}), 1), 1);
    EXPECT_EQ(minor_gcd(IntMatrix::from_dense({{2, 4}, {6, 8}}), 1), 2);
    EXPECT_EQ(minor_gcd(IntMatrix(2, 2), 1), 0);
    EXPECT_THROW(minor_gcd(IntMatrix(2, 3), 3), InvalidArgument);
}

TEST(Determinant, AgreesWithCofactorExpansion) {
    std::mt19937 rng(8);
    std::uniform_int_distribution<int> val(-9, 9);
    for (int i = 0; i < 200; ++i) {
        std::vector<std::vector<Integer>> a(3, std::vector<Integer>(3));
        for (auto& row : a)
            for (auto& v : row) v = val(rng);
        Integer cof = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                      a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                      a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
        EXPECT_EQ(determinant(a), cof);
    }
}

TEST(TorsionBound, Examples) {
    auto m = IntMatrix::from_dense({{2, 1}, {1, 2}});
    EXPECT_EQ(m.max_column_l1(), 3);
    EXPECT_EQ(torsion_bound(m), 9);
    EXPECT_GE(torsion_bound(m), snf(m).torsion);
    EXPECT_EQ(torsion_bound(IntMatrix(3, 3)), 1);
    EXPECT_EQ(snf(IntMatrix(3, 3)).torsion, 1);
    auto col = IntMatrix::from_dense({{1}, {0}});
    EXPECT_EQ(torsion_bound(col), 1);
    EXPECT_EQ(snf(col).torsion, 1);
}

TEST(TorsionBound, HadamardStyleDeterminantBound) {
    std::mt19937 rng(12);
    std::uniform_int_distribution<int> dim(1, 6), val(-9, 9);
    for (int i = 0; i < 300; ++i) {
        const int n = dim(rng);
        IntMatrix m(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) m.set(r, c, val(rng));
        const Integer det = abs_value(determinant(m.to_dense()));
        if (det == 0) continue;
        Integer product = 1;
        for (int c = 0; c < n; ++c) {
            Integer l1 = 0;
            for (const auto& [r, v] : m.column(c)) l1 += abs_value(v);
            product *= l1;
        }
        EXPECT_LE(det, product);
    }
}

TEST(MatrixText, RoundTripAndErrors) {
    std::mt19937 rng(21);
    IntMatrix m = random_matrix(rng, 7, 50, 0.4);
    m.set(0, 0, Integer("123456789012345678901234567890"));
    std::stringstream buf;
    write_matrix(buf, m);
    EXPECT_EQ(read_matrix(buf), m);

    std::istringstream ok("# comment\n2 3\n0 2 -5\n1 0 7\n");
    IntMatrix parsed = read_matrix(ok);
    EXPECT_EQ(parsed.get(0, 2), -5);
    EXPECT_EQ(parsed.get(1, 0), 7);
    std::istringstream bad_index("2 2\n2 0 1\n");
    EXPECT_THROW(read_matrix(bad_index), InvalidArgument);
    std::istringstream bad_header("x y\n");
    EXPECT_THROW(read_matrix(bad_header), InvalidArgument);
    std::istringstream bad_value("1 1\n0 0 abc\n");
    EXPECT_THROW(read_matrix(bad_value), InvalidArgument);
}
