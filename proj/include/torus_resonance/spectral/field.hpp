#pragma once

#include <complex>
#include <cstdint>
#include <cstdlib>
#include <vector>

#include "torus_resonance/errors.hpp"

namespace torus_resonance::spectral {

using complex = std::complex<double>;

/// Fourier coefficients over the cube |a|, |b|, |c| <= M; modes outside the
/// cube are zero.
///
/// `real_tagged` marks fields meant to represent real-valued functions, whose
/// coefficients satisfy F(-a,-b,-c) = conj(F(a,b,c)). The tag is carried, not
/// enforced; see conjugate_symmetry_error().
class FourierField {
 public:
  FourierField() : FourierField(0) {}
  explicit FourierField(std::int64_t box_radius, bool real_tagged = false)
      : radius_(box_radius), real_tagged_(real_tagged) {
    if (box_radius < 0) throw DomainError("box radius must be nonnegative");
    if (box_radius > 256) throw RangeError("box radius too large for a dense field");
    coeffs_.assign(static_cast<std::size_t>(side() * side() * side()), complex{});
  }

  std::int64_t box_radius() const { return radius_; }
  std::int64_t side() const { return 2 * radius_ + 1; }
  std::size_t size() const { return coeffs_.size(); }

  bool real_tagged() const { return real_tagged_; }
  void set_real_tagged(bool tag) { real_tagged_ = tag; }

  bool contains(ModeIndex const& m) const {
    return std::llabs(m.a) <= radius_ && std::llabs(m.b) <= radius_ && std::llabs(m.c) <= radius_;
  }

  complex at(ModeIndex const& m) const { return contains(m) ? coeffs_[offset(m)] : complex{}; }

  complex& operator[](ModeIndex const& m) {
    if (!contains(m)) throw DomainError("mode " + to_string(m) + " outside the field box");
    return coeffs_[offset(m)];
  }
  complex operator[](ModeIndex const& m) const { return at(m); }

  /// Mode of storage slot i; slots run lexicographically in (a, b, c).
  ModeIndex mode(std::size_t i) const {
    auto const s = static_cast<std::size_t>(side());
    return {static_cast<std::int64_t>(i / (s * s)) - radius_,
            static_cast<std::int64_t>((i / s) % s) - radius_,
            static_cast<std::int64_t>(i % s) - radius_};
  }

  std::vector<complex> const& coefficients() const { return coeffs_; }
  std::vector<complex>& coefficients() { return coeffs_; }

  /// Visits (mode, coefficient) in lexicographic mode order.
  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) fn(mode(i), coeffs_[i]);
  }

  friend bool operator==(FourierField const&, FourierField const&) = default;

 private:
  std::size_t offset(ModeIndex const& m) const {
    auto const s = side();
    return static_cast<std::size_t>(((m.a + radius_) * s + (m.b + radius_)) * s + (m.c + radius_));
  }

  std::int64_t radius_;
  bool real_tagged_;
  std::vector<complex> coeffs_;
};

/// max |F(-m) - conj(F(m))| / max |F(m)|, 0 for the zero field.
inline double conjugate_symmetry_error(FourierField const& f) {
  double worst = 0.0;
  double scale = 0.0;
  f.for_each([&](ModeIndex const& m, complex v) {
    scale = std::max(scale, std::abs(v));
    worst = std::max(worst, std::abs(f.at({-m.a, -m.b, -m.c}) - std::conj(v)));
  });
  return scale == 0.0 ? 0.0 : worst / scale;
}

}  // namespace torus_resonance::spectral
