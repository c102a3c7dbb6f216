#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "modnull/color_model.hpp"
#include "modnull/error.hpp"
#include "oracles.hpp"

namespace modnull {
namespace {

const ColorDistribution kThirds({1.0 / 3.0, 2.0 / 3.0});

TEST(ColorDistribution, FromPartitionCounts) {
    const auto d = ColorDistribution::from_partition_counts(Coloring({1, 2, 2}), 2);
    EXPECT_NEAR(d.prob(1), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(d.prob(2), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(d.p2(), 5.0 / 9.0, 1e-15);
    EXPECT_NEAR(d.p3(), 1.0 / 3.0, 1e-15);

    const auto one = ColorDistribution::from_partition_counts(Coloring({1, 1, 1}), 1);
    EXPECT_EQ(one.p2(), 1.0);
    EXPECT_EQ(one.p3(), 1.0);
    EXPECT_TRUE(one.degenerate());

    const auto four = ColorDistribution::from_partition_counts(Coloring({1, 2, 3, 4}), 4);
    EXPECT_NEAR(four.p2(), 0.25, 1e-15);

    EXPECT_THROW(ColorDistribution::from_partition_counts(Coloring(), 2), InputError);
    EXPECT_THROW(ColorDistribution::from_partition_counts(Coloring({1, 3}), 2), InputError);
}

TEST(ColorDistribution, Validation) {
    EXPECT_THROW(ColorDistribution({0.5, 0.6}), InputError);
    EXPECT_THROW(ColorDistribution({-0.1, 1.1}), InputError);
    EXPECT_THROW(ColorDistribution(std::vector<double>{}), InputError);
    EXPECT_NO_THROW(parse_probabilities("0.3\n0.7000000001\n"));
    EXPECT_THROW(parse_probabilities("0.3\n0.71\n"), InputError);
    const auto d = parse_probabilities("# weights\n0.1\n0.2\n0.7\n");
    EXPECT_EQ(d.num_colors(), 3u);
    EXPECT_NEAR(d.prob(3), 0.7, 1e-15);
}

TEST(PowerSum, Examples) {
    EXPECT_NEAR(power_sum(kThirds, 1), 1.0, 1e-15);
    EXPECT_NEAR(power_sum(ColorDistribution::uniform(2), 3), 0.25, 1e-15);
    EXPECT_NEAR(power_sum(kThirds, 2), 5.0 / 9.0, 1e-15);
    EXPECT_THROW(power_sum(kThirds, 0), InputError);
}

TEST(Hbar, Examples) {
    const auto u2 = ColorDistribution::uniform(2);
    EXPECT_EQ(hbar(ColorDistribution::uniform(1), 1, 1), 0.0);
    EXPECT_NEAR(hbar(u2, 1, 1), 0.5, 1e-15);
    EXPECT_NEAR(hbar(u2, 1, 2), -0.5, 1e-15);
    EXPECT_THROW(hbar(u2, 0, 1), InputError);
    EXPECT_THROW(hbar(u2, 1, 3), InputError);
}

TEST(ConditionalMoments, Examples) {
    const auto u2 = ColorDistribution::uniform(2);
    EXPECT_NEAR(cond_second_moment(u2, 1), 0.25, 1e-15);
    EXPECT_EQ(cond_second_moment(ColorDistribution::uniform(1), 1), 0.0);
    // oracle: (1/3)(8/9)^2 + (2/3)(-4/9)^2 = 32/81
    EXPECT_NEAR(oracle::cross_by_sum({1.0 / 3.0, 2.0 / 3.0}, 1, 1), 32.0 / 81.0, 1e-15);
    EXPECT_NEAR(cond_second_moment(kThirds, 1), 32.0 / 81.0, 1e-15);

    EXPECT_NEAR(cond_cross_moment(u2, 1, 2), -0.25, 1e-15);
    EXPECT_EQ(cond_cross_moment(ColorDistribution::uniform(1), 1, 1), 0.0);
    EXPECT_DOUBLE_EQ(cond_cross_moment(kThirds, 2, 2), cond_second_moment(kThirds, 2));
}

TEST(MomentConstants, Examples) {
    const auto u2 = moment_constants(ColorDistribution::uniform(2));
    EXPECT_NEAR(u2.r1, 0.25, 1e-15);
    EXPECT_EQ(u2.r2, 0.0);
    const auto t = moment_constants(kThirds);
    EXPECT_NEAR(t.r1, 16.0 / 81.0, 1e-15);
    EXPECT_NEAR(t.r2, 2.0 / 81.0, 1e-15);
    const auto one = moment_constants(ColorDistribution::uniform(1));
    EXPECT_EQ(one.r1, 0.0);
    EXPECT_EQ(one.r2, 0.0);
}

TEST(MomentConstants, MatchSampleVarianceOfKernel) {
    // r1 = Var(hbar(c1, c2)), r2 = Var(p_{c1} - p2) for independent colors
    std::vector<Color> a, b;
    sample_colors_into(kThirds, 200000, 101, a);
    sample_colors_into(kThirds, 200000, 202, b);
    double s = 0, ss = 0, t = 0, tt = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double h = hbar(kThirds, a[i], b[i]);
        const double q = kThirds.prob(a[i]) - kThirds.p2();
        s += h;
        ss += h * h;
        t += q;
        tt += q * q;
    }
    const double n = static_cast<double>(a.size());
    EXPECT_NEAR(ss / n - (s / n) * (s / n), 16.0 / 81.0, 0.005);
    EXPECT_NEAR(tt / n - (t / n) * (t / n), 2.0 / 81.0, 0.001);
}

class RandomDistributions : public ::testing::TestWithParam<std::size_t> {};

TEST_P(RandomDistributions, IdentitiesByEnumeration) {
    const std::size_t k = GetParam();
    std::mt19937_64 rng(1000 + k);
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = oracle::random_distribution(k, rng);
        const ColorDistribution d(p);
        const auto rc = moment_constants(d);
        double zero_mean = 0.0, second = 0.0, cross = 0.0;
        for (Color a = 1; a <= k; ++a) {
            double inner = 0.0;
            for (Color c = 1; c <= k; ++c) inner += p[c - 1] * hbar(d, a, c);
            zero_mean += p[a - 1] * inner;
            second += p[a - 1] * cond_second_moment(d, a);
            EXPECT_NEAR(cond_second_moment(d, a), oracle::cross_by_sum(p, a, a), 1e-14);
            for (Color b = 1; b <= k; ++b) {
                EXPECT_NEAR(cond_cross_moment(d, a, b), oracle::cross_by_sum(p, a, b), 1e-14);
                EXPECT_LE(std::fabs(hbar(d, a, b)), 2.0);
                cross += p[a - 1] * p[b - 1] * cond_cross_moment(d, a, b);
            }
        }
        EXPECT_NEAR(zero_mean, 0.0, 1e-12);
        EXPECT_NEAR(second, rc.r1, 1e-12);
        EXPECT_NEAR(cross, 0.0, 1e-12);
        EXPECT_GE(rc.r1, 0.0);
        EXPECT_LE(d.p3(), d.p2());
        EXPECT_GE(d.p2(), 1.0 / static_cast<double>(k) - 1e-15);
    }
}

INSTANTIATE_TEST_SUITE_P(UpToSixColors, RandomDistributions, ::testing::Values(1, 2, 3, 4, 5, 6));

TEST(SampleColoring, Deterministic) {
    const auto d = ColorDistribution({0.1, 0.2, 0.7});
    EXPECT_EQ(sample_coloring(d, 1000, 42), sample_coloring(d, 1000, 42));
    EXPECT_NE(sample_coloring(d, 1000, 42), sample_coloring(d, 1000, 43));
}

TEST(SampleColoring, SingleColorAndDegenerateGuard) {
    const auto one = ColorDistribution::uniform(1);
    EXPECT_THROW(sample_coloring(one, 5, 1), DomainError);
    EXPECT_EQ(sample_coloring(one, 5, 1, true), Coloring({1, 1, 1, 1, 1}));
}

TEST(SampleColoring, SkipsZeroProbabilityColors) {
    const auto d = ColorDistribution({0.0, 0.5, 0.0, 0.5, 0.0});
    for (Color c : sample_coloring(d, 10000, 9).colors()) EXPECT_TRUE(c == 2 || c == 4);
}

TEST(SampleColoring, EmpiricalFrequency) {
    const std::size_t n = 100000;
    for (std::uint64_t seed : {1ULL, 77ULL, 123456789ULL}) {
        const auto c = sample_coloring(ColorDistribution::uniform(2), n, seed);
        const double ones = static_cast<double>(std::count(c.colors().begin(), c.colors().end(), 1U));
        // 6 sigma = 6 * 0.5 / sqrt(n) ~ 0.0095
        EXPECT_NEAR(ones / n, 0.5, 0.01);
    }
}

TEST(Partition, Parse) {
    EXPECT_EQ(parse_partition("1\n2\n2\n"), Coloring({1, 2, 2}));
    EXPECT_THROW(parse_partition("1\n0\n"), InputError);
    EXPECT_THROW(parse_partition("1\nx\n"), InputError);
    EXPECT_THROW(parse_partition(""), InputError);
}

}  // namespace
}  // namespace modnull
