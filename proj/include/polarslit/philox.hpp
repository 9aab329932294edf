#pragma once

#include <array>
#include <cstdint>

namespace polarslit {

/**
 * Philox4x32-10 counter-based generator (Salmon et al., SC'11).
 *
 * Stateless: every output block is a pure function of (key, counter), so
 * photon i of batch b always sees the same numbers regardless of which
 * thread draws it.
 */
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    static constexpr int kRounds = 10;

    static constexpr Counter block(Counter ctr, Key key) {
        for (int r = 0; r < kRounds; ++r) {
            if (r > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            ctr = round(ctr, key);
        }
        return ctr;
    }

    static constexpr Key key_from_seed(std::uint64_t seed) {
        return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    }

private:
    static constexpr Counter round(Counter const& c, Key const& k) {
        std::uint64_t const p0 = std::uint64_t{kMul0} * c[0];
        std::uint64_t const p1 = std::uint64_t{kMul1} * c[2];
        auto const hi0 = static_cast<std::uint32_t>(p0 >> 32);
        auto const lo0 = static_cast<std::uint32_t>(p0);
        auto const hi1 = static_cast<std::uint32_t>(p1 >> 32);
        auto const lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

/// Uniform double in [0, 1) from a 32-bit word.
constexpr double uniform_from_u32(std::uint32_t w) { return w * 0x1.0p-32; }

/// Uniform double in [0, 1) with 53 random bits from two words.
constexpr double uniform_from_u64(std::uint32_t hi, std::uint32_t lo) {
    std::uint64_t const bits = (std::uint64_t{hi} << 32 | lo) >> 11;
    return static_cast<double>(bits) * 0x1.0p-53;
}

}  // namespace polarslit
