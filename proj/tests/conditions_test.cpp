#include <cmath>

#include <gtest/gtest.h>

#include "oracles/oracles.hpp"
#include "torus_resonance/conditions.hpp"
#include "torus_resonance/experiments/sampling.hpp"
#include "torus_resonance/parse.hpp"

namespace tr = torus_resonance;

namespace {

tr::DenominatorParams params(char const* x, char const* y) { return {*tr::parse_real(x), *tr::parse_real(y)}; }

TEST(C2MarginScan, ExactResonance) {
  auto const r = tr::c2_margin_scan(params("0.5", "0.5"), 1.0, 2);
  EXPECT_EQ(r.min_margin, 0.0);
  // (0, 2, -2) is also exactly resonant but lies in a later shell.
  EXPECT_EQ(r.argmin, (tr::ModeIndex{1, 1, -1}));
  EXPECT_EQ(tr::denominator_value(params("0.5", "0.5"), {0, 2, -2}), 0.0);
}

TEST(C2MarginScan, DegenerateParameters) {
  for (double v : {0.5, 2.0})
    EXPECT_EQ(tr::c2_margin_scan(params("0", "0"), v, 7).min_margin, 0.0);
}

TEST(C2MarginScan, IrrationalPairMatchesDoubleOracle) {
  auto const p = params("sqrt:2-1", "sqrt:3-1");
  auto const r = tr::c2_margin_scan(p, 2.0, 50);
  EXPECT_GT(r.min_margin, 0.0);
  double const oracle = oracles::double_c2_margin(std::sqrt(2.0) - 1, std::sqrt(3.0) - 1, 2.0, 50);
  EXPECT_NEAR(r.min_margin, oracle, 1e-9 * oracle);
  // The reported argmin attains the reported margin.
  double const m = double(std::max(r.argmin.a, r.argmin.b));
  EXPECT_NEAR(std::abs(tr::denominator_value(p, r.argmin)) * std::pow(m * m, 2.0), r.min_margin, 1e-12 * r.min_margin);
}

TEST(C2MarginScan, ZeroIffExactZeroDenominator) {
  // 1/6: 36·(1/6) = 6, so the scan hits exactly zero once a >= 6.
  EXPECT_GT(tr::c2_margin_scan(params("1/7", "sqrt:2-1"), 1.0, 5).min_margin, 0.0);
  EXPECT_EQ(tr::c2_margin_scan(params("0.125", "sqrt:2-1"), 1.0, 5).min_margin, 0.0);
  // Truncated 1/6 is never exactly an integer multiple on the grid.
  EXPECT_GT(tr::c2_margin_scan(params("1/6", "sqrt:2-1"), 1.0, 10).min_margin, 0.0);
}

TEST(C2MarginScan, ThreadCountDoesNotChangeResult) {
  for (std::uint64_t i = 0; i < 5; ++i) {
    auto const p = tr::experiments::sample_params(21, i);
    auto const serial = tr::c2_margin_scan(p, 1.5, 200, {1});
    for (unsigned t : {2u, 7u, 16u}) EXPECT_EQ(tr::c2_margin_scan(p, 1.5, 200, {t}), serial);
  }
}

TEST(WaveCondition, SingleModeExamples) {
  auto const ones = params("1", "1");
  EXPECT_EQ(tr::wave_mode_margin(ones, 1.0, 1, 1, 1, tr::WaveForm::quadratic), 1.0);
  EXPECT_NEAR(tr::wave_mode_margin(ones, 1.0, 1, 1, 1, tr::WaveForm::factored), std::sqrt(2.0) - 1.0, 1e-15);
  EXPECT_EQ(tr::wave_mode_margin(params("1", "0"), 1.0, 3, 5, 3, tr::WaveForm::quadratic), 0.0);
  EXPECT_EQ(tr::wave_mode_margin(params("1", "0"), 1.0, 3, 5, 3, tr::WaveForm::factored), 0.0);
}

TEST(WaveCondition, ScanPicksBestC) {
  auto const q = tr::wave_condition_scan(params("1", "1"), 1.0, 1, tr::WaveForm::quadratic);
  EXPECT_EQ(q.min_margin, 1.0);
  EXPECT_EQ(q.argmin, (tr::ModeIndex{1, 1, 1}));
  auto const f = tr::wave_condition_scan(params("1", "1"), 1.0, 1, tr::WaveForm::factored);
  EXPECT_NEAR(f.min_margin, std::sqrt(2.0) - 1.0, 1e-15);

  auto const sq = tr::wave_condition_scan(params("1", "0"), 1.0, 4, tr::WaveForm::quadratic);
  EXPECT_EQ(sq.min_margin, 0.0);
  EXPECT_EQ(sq.argmin, (tr::ModeIndex{1, 1, 1}));
}

TEST(WaveCondition, MatchesBruteForceOverC) {
  auto const p = params("sqrt:2", "sqrt:5");
  double const x = std::sqrt(2.0), y = std::sqrt(5.0);
  for (auto form : {tr::WaveForm::quadratic, tr::WaveForm::factored}) {
    auto const r = tr::wave_condition_scan(p, 1.0, 12, form);
    double best = INFINITY;
    for (int a = 1; a <= 12; ++a)
      for (int b = 1; b <= 12; ++b)
        for (int c = 0; c <= 40; ++c) {
          double const s = a * a * x + b * b * y;
          double const val = form == tr::WaveForm::quadratic ? std::abs(s - c * c) : std::abs(std::sqrt(s) - c);
          best = std::min(best, val * std::pow(double(std::max(a, b)) * std::max(a, b), 1.0));
        }
    EXPECT_NEAR(r.min_margin, best, 1e-9 * best);
  }
}

TEST(WaveCondition, NegativeRadicandRejected) {
  EXPECT_THROW(tr::wave_condition_scan(params("-1", "0.2"), 1.0, 3, tr::WaveForm::factored), tr::DomainError);
  EXPECT_NO_THROW(tr::wave_condition_scan(params("-1", "0.2"), 1.0, 3, tr::WaveForm::quadratic));
}

}  // namespace
