#pragma once

namespace torus_resonance {

inline constexpr char const kVersion[] = "0.1.0";

}  // namespace torus_resonance
