#pragma once

#include <cstdint>

#include "torus_resonance/experiments/philox.hpp"
#include "torus_resonance/params.hpp"

namespace torus_resonance::experiments {

/// Sample i of the stream `seed`: (x, y) uniform on [0,1)² at 128-bit
/// resolution. Philox block i under key (seed, 0) supplies the four words.
inline DenominatorParams sample_params(std::uint64_t seed, std::uint64_t i) {
  auto const w = Philox4x64({seed, 0})({i, 0, 0, 0});
  return DenominatorParams::from_fractions(FixedFraction::from_words(w[0], w[1]),
                                           FixedFraction::from_words(w[2], w[3]));
}

}  // namespace torus_resonance::experiments
