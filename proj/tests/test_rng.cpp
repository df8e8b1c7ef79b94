#include <gtest/gtest.h>

#include <set>

#include "stratq/rng.hpp"

using stratq::Philox4x64;
using stratq::RandomStream;

// Reference blocks from numpy.random.Philox with the same key and counters.
TEST(Philox, KnownAnswers)
{
    const Philox4x64::Key key{123, 456};
    EXPECT_EQ(Philox4x64::encrypt({0, 0, 0, 0}, key),
              (Philox4x64::Block{0x3cdcad1fb4763de7ULL, 0xf94cc91d1fab146bULL, 0x3aa7490df501df51ULL, 0x458f65a8c046a6faULL}));
    EXPECT_EQ(Philox4x64::encrypt({1, 0, 0, 0}, key),
              (Philox4x64::Block{0x182a33ef112a55c6ULL, 0x7fa21420170db5b7ULL, 0x3d065f703e33bef6ULL, 0x29ec19a7d6e63a9aULL}));
}

TEST(RandomStream, WalksTheCounter)
{
    RandomStream s(123, 456, 0);
    EXPECT_EQ(s.next_u64(), 0x3cdcad1fb4763de7ULL);
    for (int k = 0; k < 3; ++k)
    {
        s.next_u64();
    }
    EXPECT_EQ(s.next_u64(), 0x182a33ef112a55c6ULL);
}

TEST(RandomStream, StreamsAndReplicationsDiffer)
{
    std::set<std::uint64_t> firsts;
    for (std::uint64_t rep = 0; rep < 8; ++rep)
    {
        for (std::uint64_t stream = 0; stream < 4; ++stream)
        {
            firsts.insert(RandomStream(1, rep, stream).next_u64());
        }
    }
    EXPECT_EQ(firsts.size(), 32u);
}

TEST(RandomStream, UniformAndExponentialMoments)
{
    RandomStream s(9, 0, 2);
    double sum_u = 0.0;
    double sum_e = 0.0;
    const int n = 200'000;
    for (int k = 0; k < n; ++k)
    {
        const double u = s.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum_u += u;
        const double e = s.exponential(2.0);
        ASSERT_GE(e, 0.0);
        sum_e += e;
    }
    EXPECT_NEAR(sum_u / n, 0.5, 5 * std::sqrt(1.0 / 12 / n));
    EXPECT_NEAR(sum_e / n, 0.5, 5 * 0.5 / std::sqrt(n));
}
