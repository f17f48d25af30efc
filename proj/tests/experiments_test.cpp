#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "oracles/oracles.hpp"
#include "torus_resonance/experiments/expectation.hpp"
#include "torus_resonance/experiments/philox.hpp"
#include "torus_resonance/experiments/sampling.hpp"

namespace tr = torus_resonance;
namespace ex = torus_resonance::experiments;

namespace {

TEST(Philox, KnownAnswers) {
  // Reference blocks from numpy.random.Philox (4x64, 10 rounds).
  ex::Philox4x64 const zero_key({0, 0});
  EXPECT_EQ(zero_key({1, 0, 0, 0}),
            (ex::Philox4x64::Block{0x02f4ba6408e4d89bULL, 0x3dd62b0b9ca8c5b2ULL, 0x1c8667a55d902e79ULL,
                                   0x907d7a052fd5b4dcULL}));
  ex::Philox4x64 const keyed({5, 0});
  EXPECT_EQ(keyed({7, 0, 0, 0}),
            (ex::Philox4x64::Block{0x766a7301750c73c3ULL, 0xf99f8b6b0a4e3257ULL, 0x98d902b09a601d51ULL,
                                   0x121b4d7754fdfab6ULL}));
}

TEST(SampleParams, Deterministic) {
  EXPECT_EQ(ex::sample_params(42, 17), ex::sample_params(42, 17));
  EXPECT_NE(ex::sample_params(42, 17), ex::sample_params(42, 18));
  auto const p = ex::sample_params(42, 17);
  EXPECT_EQ(p.x.integer, 0);
  EXPECT_EQ(p.y.integer, 0);
}

TEST(SampleParams, UniformMean) {
  std::uint64_t const n = 100000;
  double sx = 0, sy = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    auto const p = ex::sample_params(1, i);
    sx += p.x.frac.to_double();
    sy += p.y.frac.to_double();
  }
  double const tol = 5 * 0.5 / std::sqrt(double(n));
  EXPECT_NEAR(sx / n, 0.5, tol);
  EXPECT_NEAR(sy / n, 0.5, tol);
}

TEST(SampleParams, SeedsGiveDistinctStreams) {
  std::set<tr::u128> first;
  for (std::uint64_t seed = 0; seed < 100; ++seed) first.insert(ex::sample_params(seed, 0).x.frac.raw());
  EXPECT_EQ(first.size(), 100u);
}

TEST(ExactExpectation, SmallCases) {
  EXPECT_EQ(ex::exact_expectation(1, 1.0), 1.0);
  // Quadrature over a midpoint grid agrees with the closed form.
  double const grid = oracles::grid_expectation(2, 1.0, 400);
  EXPECT_NEAR(grid, 2.5, 0.01);
  EXPECT_DOUBLE_EQ(ex::exact_expectation(2, 1.0), 2.5);
}

TEST(ExactExpectation, MatchesPairwiseSum) {
  for (double v : {0.3, 0.5, 1.0, 1.7, 2.0})
    for (std::uint64_t k : {1u, 5u, 37u, 200u}) {
      double const e = ex::exact_expectation(k, v);
      EXPECT_NEAR(e, oracles::brute_expectation(k, v), 1e-12 * e);
      EXPECT_GT(e, 0.0);
      EXPECT_LE(e, double(k * k));
    }
}

TEST(ExpectationExperiment, AgreesWithExactExpectation) {
  ex::SampleSpec const spec{123, 2000, 1.5, 60};
  auto const rep = ex::expectation_experiment(spec);
  EXPECT_EQ(rep.n_samples, 2000u);
  EXPECT_NEAR(rep.empirical_mean, rep.exact_expectation, 3 * rep.standard_error());
  EXPECT_DOUBLE_EQ(rep.eq4_prediction, tr::predicted_count(60, 1.5));
  EXPECT_TRUE(rep.outliers.empty());
}

TEST(ExpectationExperiment, InjectedDegeneratePointIsFlagged) {
  ex::SampleSpec const spec{7, 50, 2.0, 30};
  auto const rep = ex::expectation_experiment(spec, {}, {tr::DenominatorParams::from_doubles(0, 0)});
  EXPECT_EQ(rep.n_samples, 51u);
  ASSERT_EQ(rep.outliers.size(), 1u);
  EXPECT_EQ(rep.outliers[0], 50u);
  EXPECT_EQ(rep.samples[50].count, 900u);
  EXPECT_TRUE(rep.samples[50].saturated);
}

TEST(ExpectationExperiment, SingleSample) {
  ex::SampleSpec const spec{3, 1, 1.0, 20};
  auto const rep = ex::expectation_experiment(spec);
  EXPECT_EQ(rep.empirical_sd, 0.0);
  EXPECT_EQ(rep.empirical_mean, double(tr::count_resonances(ex::sample_params(3, 0), 1.0, 20, false).count));
}

TEST(ExpectationExperiment, ReproducibleAcrossThreads) {
  ex::SampleSpec const spec{99, 64, 0.9, 50};
  auto const a = ex::expectation_experiment(spec, {1});
  auto const b = ex::expectation_experiment(spec, {5});
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) EXPECT_EQ(a.samples[i].count, b.samples[i].count);
  EXPECT_EQ(a.empirical_mean, b.empirical_mean);
  EXPECT_EQ(a.empirical_sd, b.empirical_sd);
}

TEST(TailTransition, ExactBlockTrends) {
  auto block = [](unsigned j, double v) {
    return ex::shell_range_expectation(std::uint64_t(1) << j, std::uint64_t(2) << j, v);
  };
  for (unsigned j = 1; j < 12; ++j) {
    EXPECT_LT(block(j, 2.0), block(j - 1, 2.0));
    EXPECT_GT(block(j, 0.5), block(j - 1, 0.5));
  }
}

TEST(TailTransition, BlocksPartitionAndMatch) {
  auto const rep = ex::tail_transition_experiment(11, 0.5, 7, 200);
  ASSERT_EQ(rep.blocks.size(), 7u);
  EXPECT_EQ(rep.blocks.front().lo, 1u);
  EXPECT_EQ(rep.blocks.back().hi, 128u);
  double total = 0;
  for (std::size_t j = 0; j + 1 < rep.blocks.size(); ++j) EXPECT_EQ(rep.blocks[j].hi, rep.blocks[j + 1].lo);
  for (auto const& b : rep.blocks) total += b.exact_expectation;
  EXPECT_NEAR(total, ex::exact_expectation(127, 0.5), 1e-9);
  EXPECT_TRUE(rep.all_within_3se());
  EXPECT_TRUE(rep.empirical_increasing());
  EXPECT_THROW(ex::tail_transition_experiment(1, 0.5, 1, 10), tr::DomainError);
}

TEST(BoundednessProbe, SteepExponent) {
  auto const p = ex::boundedness_probe(4, 2.0, 100, 400, 50);
  EXPECT_NEAR(p.tail_expectation, ex::exact_expectation(400, 2.0) - ex::exact_expectation(100, 2.0), 1e-12);
  EXPECT_TRUE(p.passes());
}

TEST(CountCurves, PrefixSumsMatchDirectCounts) {
  auto const pts = ex::count_curves(6, 1.0, {1, 10, 33, 80}, 5);
  ASSERT_EQ(pts.size(), 4u);
  for (auto const& pt : pts) {
    double mean = 0;
    for (std::uint64_t i = 0; i < 5; ++i) mean += double(tr::count_resonances(ex::sample_params(6, i), 1.0, pt.k, false).count);
    EXPECT_DOUBLE_EQ(pt.empirical_mean, mean / 5);
    EXPECT_DOUBLE_EQ(pt.exact_expectation, ex::exact_expectation(pt.k, 1.0));
  }
  auto const ks = ex::log_spaced_ks(10000);
  EXPECT_EQ(ks.front(), 1u);
  EXPECT_EQ(ks.back(), 10000u);
  EXPECT_TRUE(std::is_sorted(ks.begin(), ks.end()));
}

}  // namespace
