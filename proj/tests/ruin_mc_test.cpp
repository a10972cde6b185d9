#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "parisian/errors.hpp"
#include "parisian/ruin_mc.hpp"
#include "parisian/simd.hpp"

namespace parisian {
namespace {

RiskParams bm(double u, double c = 1.0) { return RiskParams{u, c, 1.0, CovarianceModel::fbm(0.5)}; }

RuinConfig bm_config(double u, double T, std::size_t n, std::uint64_t seed = 1) {
  RuinConfig cfg;
  cfg.params = bm(u);
  cfg.window = WindowSpec::deterministic(T);
  cfg.horizon = 6.0;
  cfg.step = 0.01;
  cfg.n = n;
  cfg.seed = seed;
  return cfg;
}

// Brute force over the definition: R[k - w .. k] all negative.
std::optional<std::size_t> parisian_index_brute(const std::vector<double>& r, std::size_t w) {
  for (std::size_t k = w; k < r.size(); ++k) {
    bool all = true;
    for (std::size_t j = k - w; j <= k; ++j) all = all && r[j] < 0.0;
    if (all) return k;
  }
  return std::nullopt;
}

TEST(ParisianIndex, ScansAgreeWithDefinition) {
  std::mt19937_64 gen(4);
  std::normal_distribution<double> noise;
  std::vector<const simd::KernelTable*> tables{&simd::scalar_kernels()};
  if (const auto* avx = simd::kernels_for(simd::Isa::Avx2)) tables.push_back(avx);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 97;
    const double bias = (trial % 5) * 0.3 - 0.6;
    std::vector<double> r(n);
    for (double& x : r) x = noise(gen) + bias;
    if (trial % 7 == 0) r[n / 2] = 0.0;  // zero counts as nonnegative
    for (std::size_t w : {0u, 1u, 2u, 3u, 8u, 40u}) {
      const auto expected = parisian_index_brute(r, w);
      EXPECT_EQ(parisian_index_reference(r, w), expected);
      for (const auto* k : tables) EXPECT_EQ(parisian_index(*k, r, w), expected);
    }
  }
}

TEST(ParisianIndex, EdgeCases) {
  const std::vector<double> none{1.0, 0.0, 2.0};
  EXPECT_FALSE(parisian_index_reference(none, 0).has_value());
  const std::vector<double> all{-1.0, -1.0, -1.0};
  EXPECT_EQ(parisian_index_reference(all, 2), 2u);
  EXPECT_FALSE(parisian_index_reference(all, 3).has_value());
  EXPECT_EQ(parisian_index(simd::active(), all, 2), 2u);
}

TEST(SimulateRuin, ZeroWindowIsClassicalRuin) {
  for (std::size_t r = 0; r < 300; ++r) {
    const RuinSample s = simulate_ruin(bm(0.5), WindowSpec::deterministic(0.0), 5.0, 0.01, {3, r});
    EXPECT_EQ(s.tau.has_value(), s.tau_star.has_value());
    if (s.tau) EXPECT_EQ(*s.tau, *s.tau_star);
    EXPECT_EQ(s.ruined, s.tau_star.has_value());
  }
}

TEST(SimulateRuin, SampleInvariants) {
  const double T = 0.3, dt = 0.01;
  int ruined = 0;
  for (std::size_t r = 0; r < 400; ++r) {
    const RuinSample s = simulate_ruin(bm(0.5), WindowSpec::deterministic(T), 5.0, dt, {8, r});
    EXPECT_GE(s.kappa_clock, 0.0);
    if (!s.tau_star) continue;
    ++ruined;
    ASSERT_TRUE(s.tau.has_value());
    EXPECT_LE(*s.tau, *s.tau_star);
    EXPECT_GE(*s.tau_star - *s.tau, T - dt - 1e-12);
  }
  EXPECT_GT(ruined, 10);
}

TEST(SimulateRuin, MonotoneInReservePathByPath) {
  for (std::size_t r = 0; r < 300; ++r) {
    const RuinSample lo = simulate_ruin(bm(0.3), WindowSpec::deterministic(0.2), 5.0, 0.01, {2, r});
    const RuinSample hi = simulate_ruin(bm(0.9), WindowSpec::deterministic(0.2), 5.0, 0.01, {2, r});
    if (hi.tau) EXPECT_TRUE(lo.tau.has_value());
    if (hi.ruined) EXPECT_TRUE(lo.ruined);
  }
}

TEST(SimulateRuin, ZeroReserveNeverRuinsBeforeWindow) {
  for (std::size_t r = 0; r < 200; ++r) {
    const RuinSample s = simulate_ruin(bm(0.0), WindowSpec::deterministic(0.1), 2.0, 0.01, {6, r});
    if (s.tau_star) EXPECT_GT(*s.tau_star, 0.1);
  }
}

TEST(SimulateRuin, CoarseGridIsResolutionError) {
  EXPECT_THROW(simulate_ruin(bm(1.0), WindowSpec::deterministic(0.005), 5.0, 0.01, {}), ResolutionError);
  EXPECT_NO_THROW(simulate_ruin(bm(1.0), WindowSpec::deterministic(0.01), 5.0, 0.01, {}));
  EXPECT_THROW(simulate_ruin(bm(1.0), WindowSpec::deterministic(1.0), 5.0, 0.0, {}), ParameterError);
}

TEST(SimulateRuin, CustomModelPropagatesCovarianceError) {
  RiskParams p{1.0, 1.0, 1.0, CovarianceModel::custom([](double s, double t) { return -s * t; }, 0.5)};
  EXPECT_THROW(simulate_ruin(p, WindowSpec::deterministic(0.1), 0.5, 0.01, {}), CovarianceError);
}

TEST(WindowSpec, RandomDurationsUseTheirOwnStream) {
  const WindowSpec w = WindowSpec::exponential(2.0);
  EXPECT_TRUE(w.is_random());
  EXPECT_EQ(w.steps({1, 5}, 0.01), w.steps({1, 5}, 0.01));
  double mean = 0.0;
  for (std::size_t r = 0; r < 20000; ++r) {
    const std::size_t s = w.steps({1, r}, 0.001);
    EXPECT_GE(s, 1u);
    mean += static_cast<double>(s) * 0.001;
  }
  EXPECT_NEAR(mean / 20000.0, 0.5, 0.02);
  const WindowSpec fixed = WindowSpec::custom([](PhiloxEngine&) { return 0.25; });
  EXPECT_EQ(fixed.steps({1, 0}, 0.01), 25u);
  const WindowSpec tiny = WindowSpec::custom([](PhiloxEngine&) { return 1e-6; });
  EXPECT_EQ(tiny.steps({1, 0}, 0.01), 1u);
  const WindowSpec bad = WindowSpec::custom([](PhiloxEngine&) { return -1.0; });
  EXPECT_THROW(bad.steps({1, 0}, 0.01), ParameterError);
  EXPECT_THROW(WindowSpec::exponential(0.0), ParameterError);
  EXPECT_THROW(WindowSpec::deterministic(-1.0), ParameterError);
}

TEST(EstimateRuin, DominanceAndBinomialError) {
  const RuinEstimates e = estimate_ruin_probs(bm_config(0.5, 0.5, 3000));
  EXPECT_LE(e.parisian.hits, e.classical.hits);
  EXPECT_GT(e.parisian.hits, 0u);
  for (const MCEstimate* m : {&e.classical, &e.parisian}) {
    EXPECT_EQ(m->n, 3000u);
    EXPECT_DOUBLE_EQ(m->p_hat, static_cast<double>(m->hits) / 3000.0);
    EXPECT_DOUBLE_EQ(m->stderr, std::sqrt(m->p_hat * (1 - m->p_hat) / 3000.0));
  }
  EXPECT_EQ(e.classical.kind, RuinKind::Classical);
  EXPECT_EQ(e.parisian.kind, RuinKind::Parisian);
  EXPECT_EQ(e.parisian.config.horizon, 6.0);
}

TEST(EstimateRuin, IndependentOfWorkerCount) {
  RuinConfig a = bm_config(0.5, 0.2, 2600, 9);
  RuinConfig b = a;
  b.jobs = 3;
  const RuinEstimates x = estimate_ruin_probs(a), y = estimate_ruin_probs(b);
  EXPECT_EQ(x.classical.hits, y.classical.hits);
  EXPECT_EQ(x.parisian.hits, y.parisian.hits);
}

TEST(EstimateRuin, DefaultHorizon) {
  EXPECT_DOUBLE_EQ(default_horizon(bm(4.0)), 20.0);
  EXPECT_DOUBLE_EQ(default_horizon(bm(0.0)), 5.0);
  RuinConfig cfg = bm_config(2.0, 0.0, 100);
  cfg.horizon = 0.0;
  EXPECT_DOUBLE_EQ(estimate_ruin_prob(cfg, RuinKind::Classical).config.horizon, 10.0);
  cfg.n = 99;
  EXPECT_THROW(estimate_ruin_probs(cfg), ParameterError);
}

// The sup-inf sweep and the sojourn-clock scan see the same paths and must
// count the same ruined replications.
TEST(RuinSweep, MatchesDirectSimulation) {
  SweepConfig sc;
  sc.reserves = {0.3, 0.8};
  sc.windows = {WindowSpec::deterministic(0.0), WindowSpec::deterministic(0.25),
                WindowSpec::exponential(3.0)};
  sc.horizon = 6.0;
  sc.step = 0.01;
  sc.n = 1500;
  sc.seed = 21;
  const SweepResult r = run_ruin_sweep(sc);
  EXPECT_EQ(r.dominance_violations, 0u);
  for (std::size_t iu = 0; iu < sc.reserves.size(); ++iu)
    for (std::size_t iw = 0; iw < sc.windows.size(); ++iw) {
      RuinConfig cfg = bm_config(sc.reserves[iu], 0.0, sc.n, sc.seed);
      cfg.window = sc.windows[iw];
      const RuinEstimates e = estimate_ruin_probs(cfg);
      EXPECT_EQ(r.classical_hits[iu], e.classical.hits);
      EXPECT_EQ(r.parisian_hits[iw][iu], e.parisian.hits) << "u=" << sc.reserves[iu] << " w=" << iw;
    }
}

TEST(RuinSweep, MonotoneInWindowAndReserve) {
  SweepConfig sc;
  sc.model = CovarianceModel::fbm(0.7);
  sc.reserves = {0.2, 0.5, 1.0, 1.5};
  for (double T : {0.0, 0.05, 0.1, 0.4, 1.0}) sc.windows.push_back(WindowSpec::deterministic(T));
  sc.horizon = 5.0;
  sc.step = 0.01;
  sc.n = 2000;
  sc.seed = 5;
  sc.jobs = 2;
  const SweepResult r = run_ruin_sweep(sc);
  EXPECT_EQ(r.dominance_violations, 0u);
  for (std::size_t iu = 0; iu < sc.reserves.size(); ++iu) {
    EXPECT_EQ(r.parisian_hits[0][iu], r.classical_hits[iu]);
    for (std::size_t iw = 1; iw < sc.windows.size(); ++iw)
      EXPECT_LE(r.parisian_hits[iw][iu], r.parisian_hits[iw - 1][iu]);
    if (iu > 0) {
      EXPECT_LE(r.classical_hits[iu], r.classical_hits[iu - 1]);
      for (std::size_t iw = 0; iw < sc.windows.size(); ++iw)
        EXPECT_LE(r.parisian_hits[iw][iu], r.parisian_hits[iw][iu - 1]);
    }
  }
}

TEST(ConditionalRuinTimes, FilterContract) {
  RuinConfig cfg = bm_config(1.0, 0.25, 0, 13);
  cfg.horizon = 4.0;
  const ConditionalRuinTimes r = sample_conditional_ruin_times(cfg, 60, 1000000);
  ASSERT_TRUE(r.complete);
  ASSERT_EQ(r.samples.size(), 60u);
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    const RuinSample& s = r.samples[i];
    ASSERT_TRUE(s.tau && s.tau_star);
    EXPECT_LE(*s.tau, *s.tau_star);
    EXPECT_LE(*s.tau_star, cfg.horizon);
    if (i > 0) EXPECT_GT(r.replications[i], r.replications[i - 1]);
  }
  EXPECT_EQ(r.attempted, r.replications.back() + 1);
}

TEST(ConditionalRuinTimes, IndependentOfWorkerCount) {
  RuinConfig cfg = bm_config(1.0, 0.25, 0, 14);
  const ConditionalRuinTimes a = sample_conditional_ruin_times(cfg, 80, 1000000);
  cfg.jobs = 3;
  const ConditionalRuinTimes b = sample_conditional_ruin_times(cfg, 80, 1000000);
  EXPECT_EQ(a.replications, b.replications);
  for (std::size_t i = 0; i < a.samples.size(); ++i) EXPECT_EQ(*a.samples[i].tau_star, *b.samples[i].tau_star);
}

TEST(ConditionalRuinTimes, CapGivesPartialResult) {
  RuinConfig cfg = bm_config(3.0, 0.5, 0, 15);
  const ConditionalRuinTimes r = sample_conditional_ruin_times(cfg, 50, 600);
  EXPECT_FALSE(r.complete);
  EXPECT_LT(r.samples.size(), 50u);
  EXPECT_EQ(r.attempted, 600u);
  EXPECT_THROW(sample_conditional_ruin_times(cfg, 10, 600), ParameterError);
}

}  // namespace
}  // namespace parisian
