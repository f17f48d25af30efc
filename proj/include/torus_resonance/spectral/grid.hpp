#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "torus_resonance/errors.hpp"
#include "torus_resonance/spectral/field.hpp"

namespace torus_resonance::spectral {

/// Values on the uniform nx × ny × nt spacetime grid, point (j, l, s) at
/// (j·α/nx, l·β/ny, s·γ/nt). Storage is row-major in (j, l, s).
struct SampleGrid {
  std::int64_t nx = 0;
  std::int64_t ny = 0;
  std::int64_t nt = 0;
  std::vector<complex> values;

  complex operator()(std::int64_t j, std::int64_t l, std::int64_t s) const {
    return values[static_cast<std::size_t>((j * ny + l) * nt + s)];
  }
};

/// e^{±2πi r/n} for r in [0, n).
inline std::vector<complex> unit_roots(std::int64_t n, int sign) {
  std::vector<complex> w(static_cast<std::size_t>(n));
  for (std::int64_t r = 0; r < n; ++r) {
    double const phase = sign * 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
    w[static_cast<std::size_t>(r)] = {std::cos(phase), std::sin(phase)};
  }
  return w;
}

inline std::size_t root_index(std::int64_t k, std::int64_t j, std::int64_t n) {
  std::int64_t r = (k * j) % n;
  if (r < 0) r += n;
  return static_cast<std::size_t>(r);
}

/// Evaluates Σ F_{a,b,c} e^{2πi(a j/nx + b l/ny + c s/nt)} on the grid.
///
/// The physical extents of the torus cancel at grid points, so only the grid
/// shape is needed. Grids of at least 2M+1 points per axis resolve every mode.
inline SampleGrid sample_field(FourierField const& f, std::int64_t nx, std::int64_t ny, std::int64_t nt) {
  if (nx < 1 || ny < 1 || nt < 1) throw DomainError("grid sizes must be positive");
  std::int64_t const m = f.box_radius();
  std::int64_t const s = f.side();
  auto const wx = unit_roots(nx, +1), wy = unit_roots(ny, +1), wt = unit_roots(nt, +1);

  // Sum over c, then b, then a.
  std::vector<complex> t1(static_cast<std::size_t>(s * s * nt));
  for (std::int64_t ia = 0; ia < s; ++ia)
    for (std::int64_t ib = 0; ib < s; ++ib)
      for (std::int64_t st = 0; st < nt; ++st) {
        complex acc{};
        for (std::int64_t c = -m; c <= m; ++c) acc += f.at({ia - m, ib - m, c}) * wt[root_index(c, st, nt)];
        t1[static_cast<std::size_t>((ia * s + ib) * nt + st)] = acc;
      }
  std::vector<complex> t2(static_cast<std::size_t>(s * ny * nt));
  for (std::int64_t ia = 0; ia < s; ++ia)
    for (std::int64_t l = 0; l < ny; ++l)
      for (std::int64_t st = 0; st < nt; ++st) {
        complex acc{};
        for (std::int64_t b = -m; b <= m; ++b)
          acc += t1[static_cast<std::size_t>((ia * s + (b + m)) * nt + st)] * wy[root_index(b, l, ny)];
        t2[static_cast<std::size_t>((ia * ny + l) * nt + st)] = acc;
      }
  SampleGrid g{nx, ny, nt, std::vector<complex>(static_cast<std::size_t>(nx * ny * nt))};
  for (std::int64_t j = 0; j < nx; ++j)
    for (std::int64_t l = 0; l < ny; ++l)
      for (std::int64_t st = 0; st < nt; ++st) {
        complex acc{};
        for (std::int64_t a = -m; a <= m; ++a)
          acc += t2[static_cast<std::size_t>(((a + m) * ny + l) * nt + st)] * wx[root_index(a, j, nx)];
        g.values[static_cast<std::size_t>((j * ny + l) * nt + st)] = acc;
      }
  return g;
}

}  // namespace torus_resonance::spectral
