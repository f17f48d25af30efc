#pragma once

#include <cstdint>
#include <string>

#include "torus_resonance/fixed_fraction.hpp"

namespace torus_resonance {

/// One real coefficient stored as an exact integer part plus a fixed-point
/// fractional part: value = integer + frac.
struct SplitReal {
  std::int64_t integer = 0;
  FixedFraction frac;

  static SplitReal from_double(double v) {
    SplitReal r;
    r.frac = FixedFraction::from_double(v, &r.integer);
    return r;
  }

  double to_double() const {
    // Route through the nearer integer so values just below an integer keep
    // their small magnitude.
    if (frac >= FixedFraction::half()) {
      return static_cast<double>(integer + 1) - frac.negated().to_double();
    }
    return static_cast<double>(integer) + frac.to_double();
  }

  friend bool operator==(SplitReal const&, SplitReal const&) = default;
};

/// The pair (x, y) of the denominator x·a² + y·b² + c.
///
/// Resonance predicates see only the fractional parts; the integer parts
/// shift the optimal c and matter for solving and for the wave-equation
/// conditions.
struct DenominatorParams {
  SplitReal x;
  SplitReal y;

  static DenominatorParams from_doubles(double x, double y) {
    return {SplitReal::from_double(x), SplitReal::from_double(y)};
  }
  static DenominatorParams from_fractions(FixedFraction x, FixedFraction y) {
    return {{0, x}, {0, y}};
  }

  DenominatorParams swapped() const { return {y, x}; }
  DenominatorParams shifted(std::int64_t dx, std::int64_t dy) const {
    return {{x.integer + dx, x.frac}, {y.integer + dy, y.frac}};
  }

  friend bool operator==(DenominatorParams const&, DenominatorParams const&) = default;
};

}  // namespace torus_resonance
