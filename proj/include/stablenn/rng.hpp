#pragma once

// Counter-based random streams (Philox4x32-10).
//
// A stream is addressed by (seed, stream id); draw k of a stream is a pure
// function of (seed, id, k), so work split across threads reproduces the
// single-threaded sequence exactly.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace stablenn {

struct RngSeed {
    std::uint64_t value = 0;

    constexpr RngSeed() = default;
    constexpr explicit RngSeed(std::uint64_t v) : value(v) {}
    friend constexpr bool operator==(RngSeed, RngSeed) = default;
};

/// Decorrelated child seed (splitmix64 finalizer over seed and index).
constexpr RngSeed derive_seed(RngSeed seed, std::uint64_t index)
{
    std::uint64_t z = seed.value + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return RngSeed(z ^ (z >> 31));
}

namespace philox {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

inline constexpr std::uint32_t M0 = 0xD2511F53u;
inline constexpr std::uint32_t M1 = 0xCD9E8D57u;
inline constexpr std::uint32_t W0 = 0x9E3779B9u;
inline constexpr std::uint32_t W1 = 0xBB67AE85u;

constexpr Counter round(const Counter& c, const Key& k)
{
    const std::uint64_t p0 = std::uint64_t{M0} * c[0];
    const std::uint64_t p1 = std::uint64_t{M1} * c[2];
    return {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
            static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
}

/// Ten-round Philox4x32 block function.
constexpr Counter block(Counter c, Key k)
{
    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            k[0] += W0;
            k[1] += W1;
        }
        c = round(c, k);
    }
    return c;
}

} // namespace philox

/// One independent random stream. Cheap to construct; not shared between threads.
class RandomStream {
public:
    RandomStream(RngSeed seed, std::uint64_t stream_id)
        : key_{static_cast<std::uint32_t>(seed.value), static_cast<std::uint32_t>(seed.value >> 32)},
          stream_(stream_id)
    {
    }

    std::uint64_t next_u64()
    {
        if (used_ == 2) refill();
        const std::uint64_t hi = buffer_[2 * used_];
        const std::uint64_t lo = buffer_[2 * used_ + 1];
        ++used_;
        return (hi << 32) | lo;
    }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform()
    {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard exponential, never zero and never infinite.
    double exponential() { return -std::log(uniform()); }

    std::uint64_t stream_id() const noexcept { return stream_; }
    std::uint64_t blocks_used() const noexcept { return block_; }

private:
    void refill()
    {
        const philox::Counter ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                                  static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
        buffer_ = philox::block(ctr, key_);
        ++block_;
        used_ = 0;
    }

    philox::Key key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    philox::Counter buffer_{};
    int used_ = 2;
};

} // namespace stablenn
