#include "fcalab/channel.hpp"
#include "fcalab/checks.hpp"
#include "fcalab/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace fcalab;

namespace {

const ConnectionPolynomial kPaper = ConnectionPolynomial::parse("31,21,12,3,2,1,0");

// Even-parity probability by summing over all 2^t error patterns.
double even_parity_enumerated(double p, unsigned t)
{
    double total = 0.0;
    for (unsigned mask = 0; mask < (1u << t); ++mask) {
        const int w = __builtin_popcount(mask);
        if (w % 2 == 0) {
            total += std::pow(p, w) * std::pow(1 - p, static_cast<int>(t) - w);
        }
    }
    return total;
}

// Pr(y_j correct | h of m checks hold) by enumerating the error pattern of
// bit j and of the t other members of each of m disjoint checks.
double posterior_enumerated(double p, unsigned t, unsigned h, unsigned m)
{
    const unsigned bits = 1 + t * m;
    double num = 0.0;
    double den = 0.0;
    for (unsigned mask = 0; mask < (1u << bits); ++mask) {
        const int w = __builtin_popcount(mask);
        const double prob = std::pow(p, w) * std::pow(1 - p, static_cast<int>(bits) - w);
        const bool self = mask & 1;
        unsigned held = 0;
        for (unsigned c = 0; c < m; ++c) {
            const unsigned others = mask >> (1 + c * t) & ((1u << t) - 1);
            held += ((__builtin_popcount(others) + self) % 2) == 0;
        }
        if (held == h) {
            den += prob;
            if (!self) {
                num += prob;
            }
        }
    }
    return num / den;
}

} // namespace

TEST_CASE("check levels for k = 31, N = 3100")
{
    const CheckSystem cs(kPaper, 3100);
    REQUIRE(cs.levels().size() == 7);
    for (unsigned d = 0; d < 7; ++d) {
        const auto& lv = cs.levels()[d];
        CHECK(lv.level == d);
        CHECK(lv.span == 31u << d);
        CHECK(lv.shifts == 3100 - (31u << d));
        CHECK(lv.offsets.size() == 7);
        for (std::size_t i = 0; i < 7; ++i) {
            CHECK(lv.offsets[i] == kPaper.exponents()[i] << d);
        }
    }
    CHECK(cs.taps() == 6);
    CHECK(cs.c_to(0) == 7);
    // Levels 0..5 contribute 7 each at the centre; level 6 spans 1984 of 3100
    // positions, so only the offsets 768 and 1344 reach bit 1550.
    CHECK(cs.c_to(1550) == 44);
    CHECK(cs.c_to(1000) == 7 * 6 + 5);
    CHECK(cs.c_to(3099) == 7);
    CHECK_THROWS_AS(CheckSystem(kPaper, 31), InsufficientLengthError);
}

TEST_CASE("c_to and checks_of agree with a direct scan of the check list")
{
    const ConnectionPolynomial g({0, 1, 4, 9, 15});
    for (auto mode : {CountMode::all_positions, CountMode::leading_only}) {
        const CheckSystem cs(g, 400, mode);
        std::vector<std::size_t> counted(400, 0);
        for (const auto& lv : cs.levels()) {
            for (std::size_t sh = 0; sh < lv.shifts; ++sh) {
                for (std::size_t slot = 0; slot < lv.offsets.size(); ++slot) {
                    if (cs.counts_slot(slot)) {
                        ++counted[sh + lv.offsets[slot]];
                    }
                }
            }
        }
        const auto all = cs.all_c_to();
        double sum = 0.0;
        for (std::size_t j = 0; j < 400; ++j) {
            CHECK(cs.c_to(j) == counted[j]);
            CHECK(all[j] == counted[j]);
            CHECK(cs.checks_of(j).size() == counted[j]);
            for (const auto& check : cs.checks_of(j)) {
                CHECK(check.size() == 5);
                CHECK(std::find(check.begin(), check.end(), j) != check.end());
            }
            sum += static_cast<double>(counted[j]);
        }
        CHECK(cs.mean_c_to() == doctest::Approx(sum / 400));
    }
}

TEST_CASE("leading-only counting gives one check per level")
{
    const CheckSystem cs(kPaper, 3100, CountMode::leading_only);
    CHECK(cs.c_to(0) == 7);
    CHECK(cs.c_to(100) == 7);
    CHECK(cs.c_to(3099) == 0);
}

TEST_CASE("every check holds on an error-free LFSR sequence")
{
    const std::vector<ConnectionPolynomial> polys = {
        kPaper, ConnectionPolynomial({0, 1, 4, 9, 15}), ConnectionPolynomial({0, 3, 10}),
        ConnectionPolynomial({0, 2, 5})};
    for (const auto& g : polys) {
        const CheckSystem cs(g, 1000);
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const auto a = generate(g, random_key(g.degree(), seed), 1000);
            REQUIRE(cs.all_satisfied(a));
            const auto counts = cs.satisfied_counts(a);
            for (std::size_t j = 0; j < 1000; j += 37) {
                REQUIRE(counts[j] == cs.c_to(j));
            }
        }
    }
}

TEST_CASE("syndrome and satisfied counts agree with direct evaluation")
{
    const ConnectionPolynomial g({0, 1, 4, 9, 15});
    const CheckSystem cs(g, 500);
    const auto tr = run_pipeline(g, random_key(15, 9), ChannelParams(0.1, 0.0), 500, 9);
    const auto syn = cs.syndrome(tr.y);
    REQUIRE(syn.size() == cs.check_count());
    std::vector<std::uint32_t> expect(500, 0);
    for (const auto& lv : cs.levels()) {
        for (std::size_t sh = 0; sh < lv.shifts; ++sh) {
            bool parity = false;
            for (auto off : lv.offsets) {
                parity ^= tr.y[sh + off];
            }
            CHECK(syn[lv.first_check + sh] == parity);
            CHECK(cs.satisfied(tr.y, lv.level, sh) == !parity);
            if (!parity) {
                for (auto off : lv.offsets) {
                    ++expect[sh + off];
                }
            }
        }
    }
    CHECK(cs.satisfied_counts(tr.y) == expect);
    CHECK_FALSE(cs.all_satisfied(tr.y));
}

TEST_CASE("even-parity probability matches enumeration")
{
    for (unsigned t = 1; t <= 12; ++t) {
        for (double p = 0.0; p <= 0.5001; p += 0.05) {
            CHECK(std::abs(even_parity_prob(p, t) - even_parity_enumerated(p, t)) < 1e-12);
        }
    }
    CHECK(even_parity_prob(0.2, 2) == doctest::Approx(0.68));
    CHECK(even_parity_prob(0.5, 6) == doctest::Approx(0.5));
    CHECK(even_parity_prob(0.0, 6) == 1.0);
    CHECK_THROWS(even_parity_prob(0.2, 0));
}

TEST_CASE("posterior")
{
    SUBCASE("no checks returns the prior")
    {
        CHECK(posterior(0.2, 0.68, 0, 0) == doctest::Approx(0.8));
    }
    SUBCASE("all of two checks hold at p' = 0.25, t = 2")
    {
        const double s = even_parity_prob(0.25, 2);
        CHECK(posterior(0.25, s, 2, 2) == doctest::Approx(0.8929).epsilon(1e-4));
    }
    SUBCASE("matches exhaustive enumeration")
    {
        for (double p : {0.05, 0.2, 0.3}) {
            for (unsigned t : {2u, 3u}) {
                const double s = even_parity_prob(p, t);
                for (unsigned m = 0; m <= 4; ++m) {
                    for (unsigned h = 0; h <= m; ++h) {
                        CAPTURE(p);
                        CAPTURE(t);
                        CAPTURE(m);
                        CAPTURE(h);
                        CHECK(posterior(p, s, h, m) == doctest::Approx(posterior_enumerated(p, t, h, m)));
                    }
                }
            }
        }
    }
    SUBCASE("increases with the number of satisfied checks")
    {
        const double s = even_parity_prob(0.2, 6);
        for (std::size_t h = 0; h < 49; ++h) {
            CHECK(posterior(0.2, s, h + 1, 49) > posterior(0.2, s, h, 49));
        }
    }
    SUBCASE("uninformative at p' = 0.5")
    {
        const double s = even_parity_prob(0.5, 6);
        for (std::size_t h = 0; h <= 10; ++h) {
            CHECK(posterior(0.5, s, h, 10) == doctest::Approx(0.5));
        }
    }
    SUBCASE("p' = 0 is certain")
    {
        CHECK(posterior(0.0, 1.0, 7, 7) == 1.0);
    }
    SUBCASE("large m stays finite")
    {
        const double s = even_parity_prob(0.2, 6);
        const double v = posterior(0.2, s, 400, 500);
        CHECK(std::isfinite(v));
        CHECK(v > 0.99);
    }
    CHECK_THROWS_AS(posterior(0.2, 0.68, 3, 2), RangeError);
}

TEST_CASE("binomial helpers")
{
    double total = 0.0;
    for (std::size_t h = 0; h <= 20; ++h) {
        total += binomial_pmf(20, 0.3, h);
        CHECK(binomial_upper_tail(20, 0.3, h) + binomial_lower_tail(20, 0.3, h) == doctest::Approx(1.0));
    }
    CHECK(total == doctest::Approx(1.0));
    CHECK(binomial_pmf(4, 0.5, 2) == doctest::Approx(0.375));
    CHECK(binomial_lower_tail(10, 0.2, 0) == 0.0);
    CHECK(binomial_upper_tail(10, 0.2, 11) == 0.0);
}

TEST_CASE("posterior is calibrated on simulated sequences")
{
    // Pool bits from several runs, bin by predicted posterior and compare the
    // observed number of correct bits with the sum of predictions.
    const ConnectionPolynomial g({0, 1, 15});
    const double p = 0.2;
    const auto model = ReliabilityModel::make(p, g.taps());
    const std::size_t n = 10000;
    const CheckSystem cs(g, n);
    constexpr int kBins = 10;
    double expected[kBins] = {};
    double variance[kBins] = {};
    double observed[kBins] = {};
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto tr = run_pipeline(g, random_key(15, seed), ChannelParams(p, 0.0), n, seed);
        const auto h = cs.satisfied_counts(tr.y);
        for (std::size_t j = 0; j < n; ++j) {
            const double q = posterior(p, model.s, h[j], cs.c_to(j));
            const int bin = std::min(kBins - 1, static_cast<int>(q * kBins));
            expected[bin] += q;
            variance[bin] += q * (1 - q);
            observed[bin] += tr.y[j] == tr.a[j];
        }
    }
    for (int b = 0; b < kBins; ++b) {
        if (variance[b] < 25) {
            continue;
        }
        const double z = (observed[b] - expected[b]) / std::sqrt(variance[b]);
        CAPTURE(b);
        CAPTURE(z);
        CHECK(std::abs(z) < 4.0);
    }
}
