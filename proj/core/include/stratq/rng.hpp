#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace stratq
{

// Philox4x64-10 (Salmon et al., SC'11). Matches numpy.random.Philox for the
// same key and counter.
class Philox4x64
{
public:
    using Block = std::array<std::uint64_t, 4>;
    using Key = std::array<std::uint64_t, 2>;

    static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
    static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
    static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

    static Block encrypt(Block ctr, Key key) noexcept
    {
        for (int round = 0; round < 10; ++round)
        {
            if (round > 0)
            {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const unsigned __int128 p0 = static_cast<unsigned __int128>(kMul0) * ctr[0];
            const unsigned __int128 p1 = static_cast<unsigned __int128>(kMul1) * ctr[2];
            const auto hi0 = static_cast<std::uint64_t>(p0 >> 64);
            const auto lo0 = static_cast<std::uint64_t>(p0);
            const auto hi1 = static_cast<std::uint64_t>(p1 >> 64);
            const auto lo1 = static_cast<std::uint64_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }
};

// A sequential stream: key = (seed, replication), counter word 1 names the
// stream, counter word 0 walks. Independent streams per event source give
// common random numbers across policies.
class RandomStream
{
public:
    RandomStream(std::uint64_t seed, std::uint64_t replication, std::uint64_t stream) noexcept
        : key_{seed, replication}, ctr_{0, stream, 0, 0}
    {
    }

    std::uint64_t next_u64() noexcept
    {
        if (pos_ == 4)
        {
            block_ = Philox4x64::encrypt(ctr_, key_);
            ++ctr_[0];
            pos_ = 0;
        }
        return block_[pos_++];
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double exponential(double rate) noexcept { return -std::log1p(-uniform()) / rate; }

private:
    Philox4x64::Key key_;
    Philox4x64::Block ctr_;
    Philox4x64::Block block_{};
    int pos_ = 4;
};

}  // namespace stratq
