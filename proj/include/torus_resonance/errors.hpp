#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace torus_resonance {

/// Lattice index (a, b, c) of a Fourier mode on the spacetime torus.
struct ModeIndex {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;

  friend constexpr bool operator==(ModeIndex const&, ModeIndex const&) = default;
  friend constexpr auto operator<=>(ModeIndex const&, ModeIndex const&) = default;

  constexpr bool is_zero() const { return a == 0 && b == 0 && c == 0; }
};

inline std::string to_string(ModeIndex const& m) {
  return "(" + std::to_string(m.a) + "," + std::to_string(m.b) + "," +
         std::to_string(m.c) + ")";
}

// Integer overflow of a², b², k² or of an accumulated integer part.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Forcing term with nonzero spacetime mean; no periodic solution exists.
class SolvabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A forced mode whose denominator is below the declared resonance threshold.
class ResonanceError : public std::runtime_error {
 public:
  ResonanceError(ModeIndex mode, double denominator)
      : std::runtime_error("resonant mode " + to_string(mode) +
                           ": |denominator| = " + std::to_string(denominator) +
                           " below threshold"),
        mode_(mode),
        denominator_(denominator) {}

  ModeIndex mode() const { return mode_; }
  double denominator() const { return denominator_; }

 private:
  ModeIndex mode_;
  double denominator_;
};

}  // namespace torus_resonance
