#pragma once

// Fourier-space form of the periodically forced Schrödinger equation
//
//     iħ ∂u/∂t + (ħ²/2m) ∇²u = f
//
// on the α × β × γ spacetime torus. Inserting u = Σ u_{a,b,c} e^{2πi(ax/α + by/β + ct/γ)}
// turns the operator into multiplication of mode (a,b,c) by
//
//     -(2πħ/γ) · (x a² + y b² + c),   x = πħγ/(mα²),  y = πħγ/(mβ²),
//
// so the solve divides by the same factor. The (0,0,0) mode has factor 0:
// a periodic solution requires f_{0,0,0} = 0 and then u_{0,0,0} = 0.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>

#include "torus_resonance/errors.hpp"
#include "torus_resonance/resonance.hpp"
#include "torus_resonance/spectral/field.hpp"
#include "torus_resonance/spectral/geometry.hpp"

namespace torus_resonance::spectral {

namespace detail {

// Calls fn(mode, slot, denominator) for every box mode except (0,0,0), in
// storage order. Denominators come from the exact fixed-point path.
template <class Fn>
void for_each_denominator(std::int64_t radius, DenominatorParams const& p, Fn&& fn) {
  std::size_t slot = 0;
  for (std::int64_t a = -radius; a <= radius; ++a) {
    for (std::int64_t b = -radius; b <= radius; ++b) {
      ExactValue const q = quadratic_value(p, torus_resonance::detail::abs_index(a),
                                           torus_resonance::detail::abs_index(b));
      for (std::int64_t c = -radius; c <= radius; ++c, ++slot) {
        if (a == 0 && b == 0 && c == 0) continue;
        ExactValue d = q;
        d.integer += c;
        fn(ModeIndex{a, b, c}, slot, d.to_double());
      }
    }
  }
}

}  // namespace detail

/// f = (iħ∂_t + (ħ²/2m)∇²) u in Fourier space. Same box as u.
inline FourierField apply_operator(FourierField const& u, SolverGeometry const& g) {
  g.validate();
  FourierField f(u.box_radius(), u.real_tagged());
  double const pre = g.prefactor();
  auto& out = f.coefficients();
  auto const& in = u.coefficients();
  detail::for_each_denominator(u.box_radius(), g.params, [&](ModeIndex const&, std::size_t slot, double den) {
    out[slot] = -(pre * den) * in[slot];
  });
  return f;
}

inline FourierField apply_operator(FourierField const& u, TorusGeometry const& g) {
  return apply_operator(u, SolverGeometry::from_torus(g));
}

/// 1e-14 · max(1, |x| + |y|).
inline double default_min_denominator(DenominatorParams const& p) {
  return 1e-14 * std::max(1.0, std::abs(p.x.to_double()) + std::abs(p.y.to_double()));
}

/// u_{a,b,c} = -(γ/(2πħ)) f_{a,b,c} / (x a² + y b² + c), u_{0,0,0} = 0.
///
/// Throws SolvabilityError when f_{0,0,0} != 0 and ResonanceError (carrying
/// the first offending mode in lexicographic order) when a forced mode has
/// |denominator| < min_denominator.
inline FourierField solve_schrodinger(FourierField const& f, SolverGeometry const& g,
                                      std::optional<double> min_denominator = std::nullopt) {
  g.validate();
  if (f.at({0, 0, 0}) != complex{}) {
    throw SolvabilityError("forcing has nonzero zero mode f(0,0,0); a periodic solution requires zero spacetime mean");
  }
  double const floor = min_denominator.value_or(default_min_denominator(g.params));
  double const scale = -1.0 / g.prefactor();
  FourierField u(f.box_radius(), f.real_tagged());
  auto& out = u.coefficients();
  auto const& in = f.coefficients();
  detail::for_each_denominator(f.box_radius(), g.params, [&](ModeIndex const& m, std::size_t slot, double den) {
    if (in[slot] == complex{}) return;
    if (!(std::abs(den) >= floor)) throw ResonanceError(m, den);
    out[slot] = (scale / den) * in[slot];
  });
  return u;
}

inline FourierField solve_schrodinger(FourierField const& f, TorusGeometry const& g,
                                      std::optional<double> min_denominator = std::nullopt) {
  return solve_schrodinger(f, SolverGeometry::from_torus(g), min_denominator);
}

/// max over modes with f != 0 of |apply_operator(u) - f| / |f|.
inline double round_trip_residual(FourierField const& f, FourierField const& u, SolverGeometry const& g) {
  FourierField const back = apply_operator(u, g);
  double worst = 0.0;
  auto const& fb = back.coefficients();
  auto const& fo = f.coefficients();
  for (std::size_t i = 0; i < fo.size(); ++i) {
    if (fo[i] == complex{}) {
      worst = std::max(worst, std::abs(fb[i]) == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
      continue;
    }
    worst = std::max(worst, std::abs(fb[i] - fo[i]) / std::abs(fo[i]));
  }
  return worst;
}

/// Truncated convolution f_{a,b,c} = Σ u_{a',b',c'} V_{a-a',b-b',c-c'}.
/// The output box has radius u.M + V.M, so nothing is aliased or dropped.
inline FourierField convolve(FourierField const& u, FourierField const& v) {
  std::int64_t const mu = u.box_radius();
  std::int64_t const mv = v.box_radius();
  FourierField f(mu + mv, u.real_tagged() && v.real_tagged());
  std::int64_t const su = u.side(), sv = v.side(), sf = f.side();
  auto& out = f.coefficients();
  auto const& uc = u.coefficients();
  auto const& vc = v.coefficients();
  // Slot (i, j, l) of u plus slot (p, q, r) of v lands on slot (i+p, j+q, l+r) of f.
  for (std::int64_t i = 0; i < su; ++i) {
    for (std::int64_t j = 0; j < su; ++j) {
      for (std::int64_t l = 0; l < su; ++l) {
        complex const cu = uc[static_cast<std::size_t>((i * su + j) * su + l)];
        if (cu == complex{}) continue;
        for (std::int64_t p = 0; p < sv; ++p) {
          for (std::int64_t q = 0; q < sv; ++q) {
            std::size_t const vrow = static_cast<std::size_t>((p * sv + q) * sv);
            std::size_t const frow = static_cast<std::size_t>(((i + p) * sf + (j + q)) * sf + l);
            for (std::int64_t r = 0; r < sv; ++r) out[frow + r] += cu * vc[vrow + r];
          }
        }
      }
    }
  }
  return f;
}

/// Polynomial-decay diagnostic: sup over the box of |f| · max(|a|,|b|,|c|,1)^p.
/// A smooth forcing keeps this bounded for every p as the box grows;
/// `zero_mode` is the spacetime mean, which must vanish for solvability.
struct DecayReport {
  int degree = 0;
  double sup_norm = 0.0;
  complex zero_mode;
};

inline DecayReport decay_report(FourierField const& f, int p) {
  if (p < 1) throw DomainError("decay degree must be positive");
  DecayReport r{p, 0.0, f.at({0, 0, 0})};
  f.for_each([&](ModeIndex const& m, complex v) {
    auto const n = std::max({std::llabs(m.a), std::llabs(m.b), std::llabs(m.c), 1LL});
    r.sup_norm = std::max(r.sup_norm, std::abs(v) * std::pow(static_cast<double>(n), p));
  });
  return r;
}

}  // namespace torus_resonance::spectral
