#include "fcalab/errors.hpp"
#include "fcalab/gf2.hpp"

#include <doctest.h>

#include <random>
#include <vector>

using namespace fcalab;

namespace {

BitSequence random_bits(std::size_t n, std::mt19937_64& rng)
{
    BitSequence b(n);
    for (std::size_t i = 0; i < n; ++i) {
        b.set(i, rng() & 1);
    }
    return b;
}

// Rank by brute force: the number of distinct vectors in the row span is 2^rank.
std::size_t brute_force_rank(const std::vector<BitSequence>& rows, std::size_t cols)
{
    std::vector<BitSequence> span;
    const std::size_t subsets = std::size_t{1} << rows.size();
    for (std::size_t mask = 0; mask < subsets; ++mask) {
        BitSequence v(cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (mask >> i & 1) {
                v ^= rows[i];
            }
        }
        bool seen = false;
        for (const auto& s : span) {
            if (s == v) {
                seen = true;
                break;
            }
        }
        if (!seen) {
            span.push_back(v);
        }
    }
    std::size_t r = 0;
    while ((std::size_t{1} << r) < span.size()) {
        ++r;
    }
    return r;
}

} // namespace

TEST_CASE("xor_sequences")
{
    const BitSequence x{1, 0, 1, 1};
    const BitSequence y{0, 1, 1, 0};
    CHECK(xor_sequences(x, y) == BitSequence{1, 1, 0, 1});
    CHECK(xor_sequences(x, BitSequence(4)) == x);
    CHECK(xor_sequences(x, x).none());
    CHECK(xor_sequences(xor_sequences(x, y), y) == x);
    CHECK_THROWS_AS(xor_sequences(x, BitSequence(5)), DimensionError);
}

TEST_CASE("bit sequences longer than one word keep padding clear")
{
    std::mt19937_64 rng(7);
    auto a = random_bits(130, rng);
    auto b = random_bits(130, rng);
    auto c = xor_sequences(a, b);
    std::size_t diff = 0;
    for (std::size_t i = 0; i < 130; ++i) {
        diff += a[i] != b[i];
        CHECK(c[i] == (a[i] != b[i]));
    }
    CHECK(hamming_distance(a, b) == diff);
    CHECK(c.popcount() == diff);
    CHECK(BitSequence::from_string(a.to_string()) == a);
}

TEST_CASE("solve_gf2 on the identity returns the right-hand side")
{
    const BitSequence key{1, 0, 0, 1, 1, 0, 1};
    CHECK(solve_gf2(Gf2Matrix::identity(7), key) == key);
}

TEST_CASE("solve_gf2 rejects a repeated row")
{
    Gf2Matrix a = Gf2Matrix::identity(4);
    a.set(3, 3, false);
    a.set(3, 0, true); // row 3 now equals row 0
    CHECK_THROWS_AS(solve_gf2(a, BitSequence(4)), SingularMatrixError);
    CHECK_THROWS_AS(Gf2Inverse{a}, SingularMatrixError);
}

TEST_CASE("solve_gf2 dimension checks")
{
    CHECK_THROWS_AS(solve_gf2(Gf2Matrix(3, 4), BitSequence(3)), DimensionError);
    CHECK_THROWS_AS(solve_gf2(Gf2Matrix::identity(3), BitSequence(4)), DimensionError);
}

TEST_CASE("solve then multiply back reproduces b (random nonsingular systems)")
{
    std::mt19937_64 rng(2024);
    int solved = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t n = 1 + trial % 12;
        Gf2Matrix a(0, n);
        for (std::size_t r = 0; r < n; ++r) {
            a.append_row(random_bits(n, rng));
        }
        const auto b = random_bits(n, rng);
        if (rank_of(a) < n) {
            CHECK_THROWS_AS(solve_gf2(a, b), SingularMatrixError);
            continue;
        }
        const auto x = solve_gf2(a, b);
        CHECK(a.multiply(x) == b);
        CHECK(Gf2Inverse(a).solve(b) == x);
        ++solved;
    }
    CHECK(solved > 100);
}

TEST_CASE("rank_extend")
{
    SUBCASE("all-zero row is dependent")
    {
        CHECK_FALSE(rank_extend(Gf2Matrix::identity(3), BitSequence(3)));
        CHECK_FALSE(rank_extend(Gf2Matrix(0, 3), BitSequence(3)));
    }
    SUBCASE("unit vector extends an empty matrix")
    {
        CHECK(rank_extend(Gf2Matrix(0, 5), BitSequence{0, 0, 1, 0, 0}));
    }
    SUBCASE("sum of two existing rows does not extend")
    {
        Gf2Matrix a(0, 4);
        a.append_row(BitSequence{1, 1, 0, 0});
        a.append_row(BitSequence{0, 1, 1, 1});
        const auto sum = xor_sequences(a.row(0), a.row(1));
        CHECK_FALSE(rank_extend(a, sum));
        CHECK(brute_force_rank({a.row(0), a.row(1), sum}, 4) == 2);
    }
    SUBCASE("dimension mismatch")
    {
        CHECK_THROWS_AS(rank_extend(Gf2Matrix(0, 4), BitSequence(3)), DimensionError);
    }
}

TEST_CASE("rank_extend agrees with brute-force rank on random row sets")
{
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t cols = 2 + trial % 6;
        const std::size_t nrows = 1 + trial % 7;
        std::vector<BitSequence> rows;
        Gf2Matrix a(0, cols);
        for (std::size_t r = 0; r < nrows; ++r) {
            // Sparse rows so dependencies are common.
            BitSequence v(cols);
            for (std::size_t c = 0; c < cols; ++c) {
                v.set(c, rng() % 3 == 0);
            }
            const std::size_t before = brute_force_rank(rows, cols);
            rows.push_back(v);
            const std::size_t after = brute_force_rank(rows, cols);
            CHECK(rank_extend(a, v) == (after > before));
            a.append_row(v);
        }
        CHECK(rank_of(a) == brute_force_rank(rows, cols));
    }
}

TEST_CASE("greedy selection over a spanning set stops at exactly k rows")
{
    std::mt19937_64 rng(5);
    const std::size_t k = 16;
    std::vector<BitSequence> candidates;
    for (int i = 0; i < 200; ++i) {
        candidates.push_back(random_bits(k, rng));
    }
    for (std::size_t i = 0; i < k; ++i) {
        BitSequence e(k);
        e.set(i, true);
        candidates.push_back(e); // guarantees the set spans
    }
    RankBasis basis(k);
    Gf2Matrix chosen(0, k);
    for (const auto& c : candidates) {
        if (chosen.rows() == k) {
            break;
        }
        if (basis.extend(c)) {
            chosen.append_row(c);
        }
    }
    CHECK(chosen.rows() == k);
    CHECK(rank_of(chosen) == k);
}
