#pragma once

// Resonance counting for the small denominators ‖a²x + b²y‖.
//
// A pair (a, b) is resonant at exponent v when
//
//     ‖a²x + b²y‖ < max(a², b²)^(-v).
//
// The left side is evaluated exactly in 128-bit fixed point. The right side
// is rounded toward zero onto the same grid (exactly, by integer division,
// when 2v is an integer; through pow() otherwise) and the comparison is
// strict, so a distance landing on the rounded threshold is not resonant.
//
// Counting runs over the positive quadrant 1 <= a, b <= k. The predicate is
// invariant under a -> -a and b -> -b, so a count over all of Z² minus the
// axes is exactly four times this one.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "torus_resonance/errors.hpp"
#include "torus_resonance/fixed_fraction.hpp"
#include "torus_resonance/parallel.hpp"
#include "torus_resonance/params.hpp"

namespace torus_resonance {

inline constexpr std::uint64_t kMaxIndex = 0xffffffffULL;  // a² must fit in 64 bits

inline void check_index(std::uint64_t n, char const* what) {
  if (n > kMaxIndex) throw RangeError(std::string(what) + " exceeds 2^32 - 1; its square overflows 64 bits");
}

/// Exact a²x + b²y as integer + fraction.
struct ExactValue {
  i128 integer = 0;
  FixedFraction frac;

  /// Nearest double; values just below an integer keep their small magnitude.
  double to_double() const {
    if (frac >= FixedFraction::half()) {
      return static_cast<double>(integer + 1) - frac.negated().to_double();
    }
    return static_cast<double>(integer) + frac.to_double();
  }

  /// round(value), half-integers rounding up.
  i128 rounded() const { return integer + (frac >= FixedFraction::half() ? 1 : 0); }
};

namespace detail {

inline i128 checked_add(i128 l, i128 r) {
  i128 out;
  if (__builtin_add_overflow(l, r, &out)) throw RangeError("integer part overflows 128 bits");
  return out;
}

inline i128 checked_mul(i128 l, i128 r) {
  i128 out;
  if (__builtin_mul_overflow(l, r, &out)) throw RangeError("integer part overflows 128 bits");
  return out;
}

inline std::int64_t to_int64(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw RangeError("value does not fit in 64 bits");
  }
  return static_cast<std::int64_t>(v);
}

inline std::uint64_t abs_index(std::int64_t n) {
  return n < 0 ? std::uint64_t(0) - std::uint64_t(n) : std::uint64_t(n);
}

}  // namespace detail

inline ExactValue quadratic_value(DenominatorParams const& p, std::uint64_t a, std::uint64_t b) {
  check_index(a, "a");
  check_index(b, "b");
  std::uint64_t const a2 = a * a;
  std::uint64_t const b2 = b * b;
  ScaledFraction const sx = multiply(a2, p.x.frac);
  ScaledFraction const sy = multiply(b2, p.y.frac);
  FixedFraction const frac = sx.frac + sy.frac;
  i128 integer = detail::checked_mul(i128(a2), i128(p.x.integer));
  integer = detail::checked_add(integer, detail::checked_mul(i128(b2), i128(p.y.integer)));
  integer = detail::checked_add(integer, i128(sx.carry) + i128(sy.carry) + (frac < sx.frac ? 1 : 0));
  return {integer, frac};
}

struct ModeDistance {
  double dist = 0.0;            ///< ‖a²x + b²y‖
  std::int64_t nearest_c = 0;   ///< c minimising |a²x + b²y + c|
};

inline ModeDistance mode_distance(DenominatorParams const& p, std::uint64_t a, std::uint64_t b) {
  ExactValue const v = quadratic_value(p, a, b);
  return {nearest_int_dist(v.frac), detail::to_int64(-v.rounded())};
}

/// Signed denominator x·a² + y·b² + c of the mode (a, b, c).
inline double denominator_value(DenominatorParams const& p, ModeIndex const& m) {
  if (m.is_zero()) throw DomainError("denominator of the zero mode (0,0,0) is undefined");
  ExactValue v = quadratic_value(p, detail::abs_index(m.a), detail::abs_index(m.b));
  v.integer = detail::checked_add(v.integer, i128(m.c));
  return v.to_double();
}

/// max(a², b²)^(-v) for every shell m = max(a, b) in [1, k], rounded toward
/// zero to 128-bit fixed point, plus the double value for reporting.
class ThresholdTable {
 public:
  ThresholdTable(double v, std::uint64_t k) : fixed_(validated_size(v, k)), value_(k + 1) {
    double const twice = 2.0 * v;
    bool const exact = twice == std::floor(twice) && twice <= 128.0;
    auto const power = static_cast<unsigned>(twice);
    for (std::uint64_t m = 1; m <= k; ++m) {
      double const m2 = static_cast<double>(m) * static_cast<double>(m);
      value_[m] = std::pow(m2, -v);
      fixed_[m] = exact ? exact_threshold(m, power) : rounded_threshold(value_[m]);
    }
  }

  std::uint64_t k() const { return fixed_.size() - 1; }
  FixedFraction fixed(std::uint64_t m) const { return fixed_[m]; }
  double value(std::uint64_t m) const { return value_[m]; }

 private:
  static constexpr FixedFraction kSaturated{~u128(0)};

  static std::size_t validated_size(double v, std::uint64_t k) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("exponent v must be positive and finite");
    check_index(k, "k");
    return k + 1;
  }

  // floor(2^128 / m^power), saturating at 2^128 - 1 (above any distance).
  static FixedFraction exact_threshold(std::uint64_t m, unsigned power) {
    if (m == 1 || power == 0) return kSaturated;
    u128 d = 1;
    for (unsigned i = 0; i < power; ++i) {
      if (d > ~u128(0) / m) return FixedFraction();  // m^power > 2^128
      d *= m;
    }
    u128 const all = ~u128(0);  // 2^128 - 1
    u128 q = all / d;
    if (all % d == d - 1) ++q;
    return FixedFraction(q);
  }

  static FixedFraction rounded_threshold(double t) {
    if (t >= 1.0) return kSaturated;
    return FixedFraction::from_double(t);
  }

  std::vector<FixedFraction> fixed_;
  std::vector<double> value_;
};

struct ResonanceWitness {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  double dist = 0.0;       ///< ‖a²x + b²y‖
  double threshold = 0.0;  ///< max(a², b²)^(-v)
  std::int64_t nearest_c = 0;

  friend bool operator==(ResonanceWitness const&, ResonanceWitness const&) = default;
};

/// Resonant pairs grouped by shell m = max(a, b); witnesses sorted by (a, b).
struct ShellScan {
  std::vector<std::uint64_t> shell_counts;  ///< index m in [0, k]; entry 0 unused
  std::optional<std::vector<ResonanceWitness>> witnesses;

  std::uint64_t total() const {
    std::uint64_t n = 0;
    for (auto c : shell_counts) n += c;
    return n;
  }
};

inline ShellScan scan_shells(DenominatorParams const& p, double v, std::uint64_t k,
                             bool retain_witnesses, ScanOptions const& opts = {}) {
  if (k < 1) throw DomainError("k must be at least 1");
  ThresholdTable const thresholds(v, k);

  // Fractional parts of a²x and b²y for every index.
  std::vector<FixedFraction> xs(k + 1), ys(k + 1);
  for (std::uint64_t n = 1; n <= k; ++n) {
    xs[n] = (n * n) * p.x.frac;
    ys[n] = (n * n) * p.y.frac;
  }

  auto const chunks = split_range(1, k + 1, opts.threads);
  std::vector<std::vector<std::uint64_t>> counts(chunks.size(), std::vector<std::uint64_t>(k + 1, 0));
  std::vector<std::vector<ResonanceWitness>> found(chunks.size());

  for_each_chunk(chunks, [&](std::size_t ci, ChunkRange r) {
    auto& shell = counts[ci];
    auto& wit = found[ci];
    FixedFraction const* const yrow = ys.data();
    for (std::uint64_t a = r.begin; a < r.end; ++a) {
      FixedFraction const ax = xs[a];
      auto record = [&](std::uint64_t b, std::uint64_t m) {
        ++shell[m];
        if (retain_witnesses) {
          FixedFraction const d = (ax + yrow[b]).nearest_int_distance();
          wit.push_back({a, b, d.to_double(), thresholds.value(m), mode_distance(p, a, b).nearest_c});
        }
      };
      // b <= a: the shell is a.
      u128 const ta = thresholds.fixed(a).raw();
      for (std::uint64_t b = 1; b <= a; ++b) {
        if ((ax + yrow[b]).nearest_int_distance().raw() < ta) record(b, a);
      }
      // b > a: the shell is b.
      for (std::uint64_t b = a + 1; b <= k; ++b) {
        if ((ax + yrow[b]).nearest_int_distance().raw() < thresholds.fixed(b).raw()) record(b, b);
      }
    }
  });

  ShellScan out;
  out.shell_counts.assign(k + 1, 0);
  for (auto const& c : counts) {
    for (std::uint64_t m = 0; m <= k; ++m) out.shell_counts[m] += c[m];
  }
  if (retain_witnesses) {
    std::vector<ResonanceWitness> all;
    for (auto& w : found) all.insert(all.end(), w.begin(), w.end());
    out.witnesses = std::move(all);
  }
  return out;
}

/// (Σ_{h=1}^{k} h^(-v))², the main term of the classical counting asymptotic.
/// Summed in increasing h with Neumaier compensation.
inline double predicted_count(std::uint64_t k, double v) {
  double sum = 0.0;
  double comp = 0.0;
  for (std::uint64_t h = 1; h <= k; ++h) {
    double const term = std::pow(static_cast<double>(h), -v);
    double const t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  }
  double const s = sum + comp;
  return s * s;
}

struct CountingReport {
  std::uint64_t k = 0;
  double v = 0.0;
  std::uint64_t count = 0;  ///< N(k, v; x, y)
  double predicted = 0.0;   ///< predicted_count(k, v)
  std::optional<std::vector<ResonanceWitness>> witnesses;
};

inline CountingReport count_resonances(DenominatorParams const& p, double v, std::uint64_t k,
                                       bool retain_witnesses, ScanOptions const& opts = {}) {
  ShellScan scan = scan_shells(p, v, k, retain_witnesses, opts);
  return {k, v, scan.total(), predicted_count(k, v), std::move(scan.witnesses)};
}

struct DyadicBlock {
  std::uint64_t lo = 0;  ///< first shell, 2^j
  std::uint64_t hi = 0;  ///< one past the last shell, min(2^(j+1), k_max + 1)
  std::uint64_t count = 0;
};

/// Groups per-shell counts into [2^j, 2^(j+1)) blocks covering [1, k].
inline std::vector<DyadicBlock> group_dyadic(std::vector<std::uint64_t> const& shell_counts) {
  std::vector<DyadicBlock> blocks;
  std::uint64_t const k = shell_counts.size() - 1;
  for (std::uint64_t lo = 1; lo <= k; lo *= 2) {
    DyadicBlock blk{lo, std::min(2 * lo, k + 1), 0};
    for (std::uint64_t m = blk.lo; m < blk.hi; ++m) blk.count += shell_counts[m];
    blocks.push_back(blk);
  }
  return blocks;
}

inline std::vector<DyadicBlock> dyadic_block_counts(DenominatorParams const& p, double v,
                                                    std::uint64_t k_max, ScanOptions const& opts = {}) {
  if (k_max < 2) throw DomainError("k_max must be at least 2");
  return group_dyadic(scan_shells(p, v, k_max, false, opts).shell_counts);
}

}  // namespace torus_resonance
