#pragma once

#include <cmath>
#include <numbers>

#include "torus_resonance/errors.hpp"
#include "torus_resonance/params.hpp"

namespace torus_resonance::spectral {

/// Physical parameters of a particle on an α × β torus driven with period γ.
struct TorusGeometry {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  double mass = 1.0;
  double hbar = 1.0;

  void validate() const {
    for (double f : {alpha, beta, gamma, mass, hbar}) {
      if (!(f > 0.0) || !std::isfinite(f)) throw DomainError("torus geometry fields must be positive and finite");
    }
  }

  /// x = πħγ/(mα²), y = πħγ/(mβ²).
  DenominatorParams reduce() const {
    validate();
    double const k = std::numbers::pi * hbar * gamma / mass;
    return DenominatorParams::from_doubles(k / (alpha * alpha), k / (beta * beta));
  }
};

/// What the solver actually needs: the reduced pair (x, y) and the
/// prefactor constants γ and ħ.
struct SolverGeometry {
  DenominatorParams params;
  double gamma = 2.0 * std::numbers::pi;
  double hbar = 1.0;

  static SolverGeometry from_torus(TorusGeometry const& g) { return {g.reduce(), g.gamma, g.hbar}; }

  void validate() const {
    if (!(gamma > 0.0) || !(hbar > 0.0) || !std::isfinite(gamma) || !std::isfinite(hbar)) {
      throw DomainError("gamma and hbar must be positive and finite");
    }
  }

  /// 2πħ/γ; the operator multiplies mode (a,b,c) by -prefactor·(x a² + y b² + c).
  double prefactor() const { return 2.0 * std::numbers::pi * hbar / gamma; }
};

}  // namespace torus_resonance::spectral
