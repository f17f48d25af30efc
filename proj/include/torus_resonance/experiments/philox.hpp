#pragma once

#include <array>
#include <cstdint>

namespace torus_resonance::experiments {

/// Philox4x64-10 counter-based generator (Salmon et al., SC'11): a keyed
/// bijection of 256-bit counters. Block i under a fixed key is independent of
/// every other block, so sample streams need no shared state.
class Philox4x64 {
 public:
  using Block = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  explicit constexpr Philox4x64(Key key) : key_(key) {}

  constexpr Block operator()(Block ctr) const {
    Key k = key_;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        k[0] += kWeyl0;
        k[1] += kWeyl1;
      }
      ctr = single_round(ctr, k);
    }
    return ctr;
  }

 private:
  static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
  static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
  static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

  static constexpr Block single_round(Block const& c, Key const& k) {
    unsigned __int128 const p0 = static_cast<unsigned __int128>(kMul0) * c[0];
    unsigned __int128 const p1 = static_cast<unsigned __int128>(kMul1) * c[2];
    auto const hi0 = static_cast<std::uint64_t>(p0 >> 64), lo0 = static_cast<std::uint64_t>(p0);
    auto const hi1 = static_cast<std::uint64_t>(p1 >> 64), lo1 = static_cast<std::uint64_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }

  Key key_;
};

}  // namespace torus_resonance::experiments
