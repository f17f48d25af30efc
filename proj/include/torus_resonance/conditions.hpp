#pragma once

// Margin scans for the Diophantine conditions guaranteeing convergence of the
// Fourier solution.
//
// Schrödinger: |x a² + y b² + c| > K max(a², b²)^(-v). The denominator uses
// the solver's coefficients x = πħγ/(mα²), y = πħγ/(mβ²); the variant with an
// extra factor 1/2 on both coefficients is reached by halving x and y.
//
// Wave: |a² x + b² y - c²| > K max(a², b²)^(-v), or the factored form
// |sqrt(a² x + b² y) - |c|| > K' max(a², b²)^(-v').
//
// Neither condition fixes K. The scans return the best margin
//     min over scanned modes of |denominator| * max(a², b²)^v,
// which is the largest K for which the condition holds on the scanned range.

#include <cmath>
#include <cstdint>
#include <limits>
#include <tuple>
#include <vector>

#include "torus_resonance/errors.hpp"
#include "torus_resonance/parallel.hpp"
#include "torus_resonance/params.hpp"
#include "torus_resonance/resonance.hpp"

namespace torus_resonance {

struct MarginResult {
  double min_margin = std::numeric_limits<double>::infinity();
  ModeIndex argmin;

  friend bool operator==(MarginResult const&, MarginResult const&) = default;
};

enum class WaveForm { quadratic, factored };

namespace detail {

// max(a², b²)^v for each shell m.
inline std::vector<double> margin_weights(double v, std::uint64_t k) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("exponent v must be positive and finite");
  std::vector<double> w(k + 1);
  for (std::uint64_t m = 0; m <= k; ++m) {
    double const m2 = static_cast<double>(m) * static_cast<double>(m);
    w[m] = std::pow(m2, v);
  }
  return w;
}

struct Candidate {
  double margin = std::numeric_limits<double>::infinity();
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  std::int64_t c = 0;
  bool found = false;
};

// Smaller margin wins; equal margins go to the lower mode in the order
// (max(a, b), a, b), so the result does not depend on how rows were split.
inline bool better(Candidate const& cand, Candidate const& best) {
  if (!cand.found) return false;
  if (!best.found || cand.margin < best.margin) return true;
  if (cand.margin > best.margin) return false;
  auto const key = [](Candidate const& c) { return std::tuple(std::max(c.a, c.b), c.a, c.b); };
  return key(cand) < key(best);
}

inline void keep_better(Candidate& best, Candidate const& cand) {
  if (better(cand, best)) best = cand;
}

struct WaveTerm {
  double value;
  std::int64_t c;
};

// Best |S - c²| or |sqrt(S) - c| over c >= 0 for exact S = a²x + b²y.
inline WaveTerm best_wave_term(ExactValue const& s, WaveForm form) {
  bool const negative = s.integer < 0;
  if (negative && form == WaveForm::factored) {
    throw DomainError("negative radicand a²x + b²y in factored wave condition");
  }
  double const sd = s.to_double();
  std::int64_t const root = negative ? 0 : static_cast<std::int64_t>(std::llround(std::sqrt(sd)));
  WaveTerm best{std::numeric_limits<double>::infinity(), 0};
  for (std::int64_t c = root - 1; c <= root + 1; ++c) {
    if (c < 0) continue;
    ExactValue diff = s;
    diff.integer = checked_add(diff.integer, -checked_mul(i128(c), i128(c)));
    double value = std::abs(diff.to_double());
    if (form == WaveForm::factored && value != 0.0) {
      // sqrt(S) - c = (S - c²) / (sqrt(S) + c), free of cancellation.
      value /= std::sqrt(sd) + static_cast<double>(c);
    }
    if (value < best.value) best = {value, c};
  }
  return best;
}

}  // namespace detail

/// Minimum of ‖x a² + y b²‖ max(a², b²)^v over 0 <= a, b <= k, (a, b) != (0, 0),
/// with the optimal c. Ties go to the mode with smallest max(a, b), then a, then b.
/// Pure time modes (0, 0, c) have |c| >= 1 and are skipped.
/// The margin is exactly 0 iff some scanned mode has a zero denominator.
inline MarginResult c2_margin_scan(DenominatorParams const& p, double v, std::uint64_t k,
                                   ScanOptions const& opts = {}) {
  if (k < 1) throw DomainError("k must be at least 1");
  check_index(k, "k");
  auto const weights = detail::margin_weights(v, k);
  std::vector<FixedFraction> xs(k + 1), ys(k + 1);
  for (std::uint64_t n = 0; n <= k; ++n) {
    xs[n] = (n * n) * p.x.frac;
    ys[n] = (n * n) * p.y.frac;
  }
  auto const chunks = split_range(0, k + 1, opts.threads);
  std::vector<detail::Candidate> best(chunks.size());
  for_each_chunk(chunks, [&](std::size_t ci, ChunkRange r) {
    detail::Candidate local;
    for (std::uint64_t a = r.begin; a < r.end; ++a) {
      for (std::uint64_t b = (a == 0 ? 1 : 0); b <= k; ++b) {
        FixedFraction const d = (xs[a] + ys[b]).nearest_int_distance();
        double const margin = d.raw() == 0 ? 0.0 : d.to_double() * weights[std::max(a, b)];
        detail::keep_better(local, {margin, a, b, 0, true});
      }
    }
    best[ci] = local;
  });
  detail::Candidate winner;
  for (auto const& c : best) detail::keep_better(winner, c);
  auto const md = mode_distance(p, winner.a, winner.b);
  return {winner.margin,
          {static_cast<std::int64_t>(winner.a), static_cast<std::int64_t>(winner.b), md.nearest_c}};
}

/// Margin of a single wave-equation mode with a given c.
inline double wave_mode_margin(DenominatorParams const& p, double v, std::uint64_t a, std::uint64_t b,
                               std::int64_t c, WaveForm form) {
  ExactValue s = quadratic_value(p, a, b);
  if (form == WaveForm::factored && s.integer < 0) {
    throw DomainError("negative radicand a²x + b²y in factored wave condition");
  }
  double const m2 = static_cast<double>(std::max(a, b)) * static_cast<double>(std::max(a, b));
  double const weight = std::pow(m2, v);
  double const sd = s.to_double();
  i128 const cc = detail::checked_mul(i128(c), i128(c));
  s.integer = detail::checked_add(s.integer, -cc);
  double value = std::abs(s.to_double());
  if (form == WaveForm::factored && value != 0.0) {
    value /= std::sqrt(sd) + std::abs(static_cast<double>(c));
  }
  return value * weight;
}

/// Minimum wave-condition margin over 1 <= a, b <= k and the optimal c >= 0.
inline MarginResult wave_condition_scan(DenominatorParams const& p, double v, std::uint64_t k,
                                        WaveForm form, ScanOptions const& opts = {}) {
  if (k < 1) throw DomainError("k must be at least 1");
  check_index(k, "k");
  auto const weights = detail::margin_weights(v, k);
  auto const chunks = split_range(1, k + 1, opts.threads);
  std::vector<detail::Candidate> best(chunks.size());
  for_each_chunk(chunks, [&](std::size_t ci, ChunkRange r) {
    detail::Candidate local;
    for (std::uint64_t a = r.begin; a < r.end; ++a) {
      for (std::uint64_t b = 1; b <= k; ++b) {
        auto const term = detail::best_wave_term(quadratic_value(p, a, b), form);
        double const margin = term.value == 0.0 ? 0.0 : term.value * weights[std::max(a, b)];
        detail::keep_better(local, {margin, a, b, term.c, true});
      }
    }
    best[ci] = local;
  });
  detail::Candidate winner;
  for (auto const& c : best) detail::keep_better(winner, c);
  return {winner.margin,
          {static_cast<std::int64_t>(winner.a), static_cast<std::int64_t>(winner.b), winner.c}};
}

}  // namespace torus_resonance
