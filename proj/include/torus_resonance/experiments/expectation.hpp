#pragma once

// Monte Carlo studies of N(k, v; x, y) for (x, y) uniform on [0,1)².
//
// For fixed (a, b) != (0, 0) with a, b >= 1, a²x + b²y is uniform modulo 1,
// so the pair is resonant with probability exactly min(2 max(a², b²)^(-v), 1).
// Summing over pairs gives E[N] with no asymptotics involved; the experiments
// gate on that value and report the classical main term (Σ h^(-v))² next to it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "torus_resonance/errors.hpp"
#include "torus_resonance/experiments/sampling.hpp"
#include "torus_resonance/parallel.hpp"
#include "torus_resonance/resonance.hpp"

namespace torus_resonance::experiments {

/// Probability that a pair in shell m = max(a, b) is resonant, times the
/// 2m - 1 pairs of that shell.
inline double shell_expectation(std::uint64_t m, double v) {
  double const m2 = static_cast<double>(m) * static_cast<double>(m);
  return static_cast<double>(2 * m - 1) * std::min(2.0 * std::pow(m2, -v), 1.0);
}

/// Σ over shells in [lo, hi) with Neumaier compensation.
inline double shell_range_expectation(std::uint64_t lo, std::uint64_t hi, double v) {
  double sum = 0.0, comp = 0.0;
  for (std::uint64_t m = lo; m < hi; ++m) {
    double const term = shell_expectation(m, v);
    double const t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  return sum + comp;
}

/// E[N(k, v; x, y)] = Σ_{a,b=1}^{k} min(2 max(a², b²)^(-v), 1).
inline double exact_expectation(std::uint64_t k, double v) {
  if (!(v > 0.0)) throw DomainError("exponent v must be positive");
  return shell_range_expectation(1, k + 1, v);
}

struct SampleStats {
  double mean = 0.0;
  double sd = 0.0;  ///< sample standard deviation (n - 1); 0 when n == 1
  std::uint64_t n = 0;

  double standard_error() const { return n == 0 ? 0.0 : sd / std::sqrt(static_cast<double>(n)); }
};

/// Two-pass mean and deviation, accumulated in sample order.
template <class Range>
SampleStats sample_stats(Range const& values) {
  SampleStats s;
  for (auto const& x : values) {
    s.mean += static_cast<double>(x);
    ++s.n;
  }
  if (s.n == 0) return s;
  s.mean /= static_cast<double>(s.n);
  if (s.n == 1) return s;
  double ss = 0.0;
  for (auto const& x : values) {
    double const d = static_cast<double>(x) - s.mean;
    ss += d * d;
  }
  s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  return s;
}

struct SampleSpec {
  std::uint64_t seed = 0;
  std::uint64_t n_samples = 1;
  double v = 1.0;
  std::uint64_t k = 1;
};

struct SampleRecord {
  std::uint64_t index = 0;
  DenominatorParams params;
  std::uint64_t count = 0;
  bool saturated = false;  ///< count == k²: every pair resonant
};

struct ExpectationReport {
  double empirical_mean = 0.0;
  double empirical_sd = 0.0;
  double exact_expectation = 0.0;
  double eq4_prediction = 0.0;  ///< (Σ h^(-v))²
  std::uint64_t n_samples = 0;
  std::vector<SampleRecord> samples;
  std::vector<std::uint64_t> outliers;  ///< indices of saturated samples

  double standard_error() const {
    return n_samples == 0 ? 0.0 : empirical_sd / std::sqrt(static_cast<double>(n_samples));
  }
};

namespace detail {

// Per-sample shell scans, in sample order. Parallel over samples; each scan
// itself is serial.
inline std::vector<std::vector<std::uint64_t>> scan_samples(std::vector<DenominatorParams> const& params,
                                                            double v, std::uint64_t k,
                                                            ScanOptions const& opts) {
  std::vector<std::vector<std::uint64_t>> shells(params.size());
  for_each_chunk(split_range(0, params.size(), opts.threads), [&](std::size_t, ChunkRange r) {
    for (std::uint64_t i = r.begin; i < r.end; ++i) {
      shells[i] = scan_shells(params[i], v, k, false).shell_counts;
    }
  });
  return shells;
}

inline std::vector<DenominatorParams> seeded_params(std::uint64_t seed, std::uint64_t n) {
  std::vector<DenominatorParams> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(sample_params(seed, i));
  return out;
}

inline std::uint64_t sum(std::vector<std::uint64_t> const& v, std::uint64_t upto) {
  std::uint64_t s = 0;
  for (std::uint64_t m = 1; m <= upto && m < v.size(); ++m) s += v[m];
  return s;
}

}  // namespace detail

/// Counts N(k, v) on spec.n_samples seeded parameters followed by any
/// `injected` parameters (indices continue after the seeded ones).
inline ExpectationReport expectation_experiment(SampleSpec const& spec, ScanOptions const& opts = {},
                                                std::vector<DenominatorParams> const& injected = {}) {
  if (spec.n_samples == 0 && injected.empty()) throw DomainError("n_samples must be positive");
  if (spec.k < 1) throw DomainError("k must be at least 1");
  check_index(spec.k, "k");
  auto params = detail::seeded_params(spec.seed, spec.n_samples);
  params.insert(params.end(), injected.begin(), injected.end());

  std::vector<std::uint64_t> counts(params.size());
  for_each_chunk(split_range(0, params.size(), opts.threads), [&](std::size_t, ChunkRange r) {
    for (std::uint64_t i = r.begin; i < r.end; ++i) counts[i] = count_resonances(params[i], spec.v, spec.k, false).count;
  });

  ExpectationReport rep;
  auto const stats = sample_stats(counts);
  rep.empirical_mean = stats.mean;
  rep.empirical_sd = stats.sd;
  rep.n_samples = stats.n;
  rep.exact_expectation = exact_expectation(spec.k, spec.v);
  rep.eq4_prediction = predicted_count(spec.k, spec.v);
  std::uint64_t const full = spec.k * spec.k;
  for (std::uint64_t i = 0; i < params.size(); ++i) {
    bool const sat = counts[i] == full;
    rep.samples.push_back({i, params[i], counts[i], sat});
    if (sat) rep.outliers.push_back(i);
  }
  return rep;
}

struct BlockStat {
  std::uint64_t lo = 0;  ///< first shell 2^j
  std::uint64_t hi = 0;  ///< one past the last shell
  double empirical_mean = 0.0;
  double standard_error = 0.0;
  double exact_expectation = 0.0;

  /// |mean - exact| <= 3 standard errors.
  bool within_3se() const { return std::abs(empirical_mean - exact_expectation) <= 3.0 * standard_error; }
};

struct TailReport {
  double v = 0.0;
  std::uint64_t n_samples = 0;
  std::vector<BlockStat> blocks;

  bool all_within_3se() const {
    return std::all_of(blocks.begin(), blocks.end(), [](BlockStat const& b) { return b.within_3se(); });
  }
  /// Strict monotonicity of the empirical block means.
  bool empirical_increasing() const {
    for (std::size_t j = 1; j < blocks.size(); ++j)
      if (!(blocks[j].empirical_mean > blocks[j - 1].empirical_mean)) return false;
    return true;
  }
  bool empirical_decreasing() const {
    for (std::size_t j = 1; j < blocks.size(); ++j)
      if (!(blocks[j].empirical_mean < blocks[j - 1].empirical_mean)) return false;
    return true;
  }
};

/// Per-block empirical means of resonance counts over shells [2^j, 2^(j+1)),
/// j < j_max, against the exact per-block expectation.
inline TailReport tail_transition_experiment(std::uint64_t seed, double v, unsigned j_max,
                                             std::uint64_t n_samples, ScanOptions const& opts = {}) {
  if (j_max < 2 || j_max > 31) throw DomainError("j_max must lie in [2, 31]");
  if (n_samples == 0) throw DomainError("n_samples must be positive");
  std::uint64_t const k_max = (std::uint64_t(1) << j_max) - 1;
  auto const shells = detail::scan_samples(detail::seeded_params(seed, n_samples), v, k_max, opts);

  TailReport rep{v, n_samples, {}};
  for (unsigned j = 0; j < j_max; ++j) {
    std::uint64_t const lo = std::uint64_t(1) << j;
    std::uint64_t const hi = lo << 1;
    std::vector<std::uint64_t> per_sample;
    per_sample.reserve(n_samples);
    for (auto const& s : shells) {
      std::uint64_t c = 0;
      for (std::uint64_t m = lo; m < hi; ++m) c += s[m];
      per_sample.push_back(c);
    }
    auto const st = sample_stats(per_sample);
    rep.blocks.push_back({lo, hi, st.mean, st.standard_error(), shell_range_expectation(lo, hi, v)});
  }
  return rep;
}

/// Whether N(k, v) still moves between k_lo and k_hi.
///
/// By Markov's inequality P(N(k_hi) > N(k_lo)) <= E[N(k_hi) - N(k_lo)], the
/// exact tail expectation. The probe passes when the observed fraction stays
/// below that bound plus three binomial standard errors.
struct BoundednessProbe {
  std::uint64_t k_lo = 0;
  std::uint64_t k_hi = 0;
  std::uint64_t n_samples = 0;
  std::uint64_t changed = 0;
  double fraction_changed = 0.0;
  double tail_expectation = 0.0;
  double bound_3sigma = 0.0;

  bool passes() const { return fraction_changed < bound_3sigma; }
};

inline BoundednessProbe boundedness_probe(std::uint64_t seed, double v, std::uint64_t k_lo, std::uint64_t k_hi,
                                          std::uint64_t n_samples, ScanOptions const& opts = {}) {
  if (!(k_lo >= 1 && k_hi > k_lo)) throw DomainError("need 1 <= k_lo < k_hi");
  if (n_samples == 0) throw DomainError("n_samples must be positive");
  check_index(k_hi, "k_hi");
  auto const shells = detail::scan_samples(detail::seeded_params(seed, n_samples), v, k_hi, opts);
  BoundednessProbe p{k_lo, k_hi, n_samples, 0, 0.0, 0.0, 0.0};
  for (auto const& s : shells) {
    if (detail::sum(s, k_hi) > detail::sum(s, k_lo)) ++p.changed;
  }
  double const n = static_cast<double>(n_samples);
  p.fraction_changed = static_cast<double>(p.changed) / n;
  double const t = shell_range_expectation(k_lo + 1, k_hi + 1, v);
  p.tail_expectation = t;
  double const q = std::min(t, 1.0);
  p.bound_3sigma = t + 3.0 * std::sqrt(q * (1.0 - q) / n);
  return p;
}

struct CurvePoint {
  std::uint64_t k = 0;
  double empirical_mean = 0.0;
  double standard_error = 0.0;
  double exact_expectation = 0.0;
  double eq4_prediction = 0.0;

  bool within_3se() const { return std::abs(empirical_mean - exact_expectation) <= 3.0 * standard_error; }
};

/// Empirical mean of N(k) at each requested k (one scan per sample at the
/// largest k), with the exact expectation and the classical main term.
inline std::vector<CurvePoint> count_curves(std::uint64_t seed, double v, std::vector<std::uint64_t> ks,
                                            std::uint64_t n_samples, ScanOptions const& opts = {}) {
  if (ks.empty()) return {};
  if (n_samples == 0) throw DomainError("n_samples must be positive");
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  if (ks.front() < 1) throw DomainError("k values must be positive");
  check_index(ks.back(), "k");
  auto const shells = detail::scan_samples(detail::seeded_params(seed, n_samples), v, ks.back(), opts);

  std::vector<CurvePoint> out;
  for (auto k : ks) {
    std::vector<std::uint64_t> counts;
    counts.reserve(n_samples);
    for (auto const& s : shells) counts.push_back(detail::sum(s, k));
    auto const st = sample_stats(counts);
    out.push_back({k, st.mean, st.standard_error(), exact_expectation(k, v), predicted_count(k, v)});
  }
  return out;
}

/// 1..10 followed by ten points per decade up to k_max, always ending at k_max.
inline std::vector<std::uint64_t> log_spaced_ks(std::uint64_t k_max) {
  std::vector<std::uint64_t> ks;
  for (std::uint64_t k = 1; k <= std::min<std::uint64_t>(10, k_max); ++k) ks.push_back(k);
  for (int i = 11; ; ++i) {
    auto const k = static_cast<std::uint64_t>(std::llround(std::pow(10.0, i / 10.0)));
    if (k >= k_max) break;
    if (k > ks.back()) ks.push_back(k);
  }
  if (ks.back() != k_max) ks.push_back(k_max);
  return ks;
}

}  // namespace torus_resonance::experiments
