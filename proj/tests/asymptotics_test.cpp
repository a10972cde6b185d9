#include <gtest/gtest.h>

#include <cmath>

#include "parisian/asymptotics.hpp"
#include "parisian/closed_form.hpp"
#include "parisian/errors.hpp"
#include "parisian/normal.hpp"

namespace parisian {
namespace {

RiskParams fbm_params(double h, double c, double beta = 1.0, double u = 1.0) {
  return RiskParams{u, c, beta, CovarianceModel::fbm(h)};
}

DerivedConstants constants_of(const RiskParams& p) {
  return derived_constants(p, LocalStationarity::fbm(p));
}

TEST(ClassicalAsymptotic, BrownianCollapsesToExponential) {
  for (double c : {0.5, 1.0, 2.0})
    for (double u : {1.0, 5.0, 10.0}) {
      const RiskParams p = fbm_params(0.5, c);
      const double expected = std::exp(-2.0 * c * u);
      EXPECT_NEAR(classical_ruin_asymptotic(p, constants_of(p), u, 1.0) / expected, 1.0, 1e-12)
          << "c=" << c << " u=" << u;
    }
}

TEST(ClassicalAsymptotic, DecreasingAlongDyadicReserves) {
  const RiskParams p = fbm_params(0.75, 1.0);
  const DerivedConstants dc = constants_of(p);
  double previous = INFINITY;
  for (int k = 0; k < 8; ++k) {
    const double v = classical_ruin_asymptotic(p, dc, std::ldexp(1.0, k), 1.2);
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, previous);
    previous = v;
  }
}

TEST(ClassicalAsymptotic, MissingConstantIsDependencyError) {
  const RiskParams p = fbm_params(0.75, 1.0);
  EXPECT_THROW(classical_ruin_asymptotic(p, constants_of(p), 10.0, std::nullopt), DependencyError);
  EXPECT_THROW(parisian_ruin_asymptotic(p, constants_of(p), WindowRegime{1.0, {}}, 10.0,
                                        std::nullopt, 1.0),
               DependencyError);
}

TEST(ParisianAsymptotic, ZeroWindowEqualsClassical) {
  const RiskParams p = fbm_params(0.75, 1.3);
  const DerivedConstants dc = constants_of(p);
  const double h = 1.17;
  EXPECT_DOUBLE_EQ(parisian_ruin_asymptotic(p, dc, WindowRegime{0.0, {}}, 7.0, h, h),
                   classical_ruin_asymptotic(p, dc, 7.0, h));
}

TEST(ParisianAsymptotic, RatioIsConstantRatio) {
  const RiskParams p = fbm_params(0.6, 0.8);
  const DerivedConstants dc = constants_of(p);
  for (double u : {1.0, 3.0, 20.0}) {
    const double ratio = parisian_ruin_asymptotic(p, dc, WindowRegime{0.5, {}}, u, 0.3, 1.5) /
                         classical_ruin_asymptotic(p, dc, u, 1.5);
    EXPECT_NEAR(ratio, 0.2, 1e-14);
  }
}

TEST(ParisianAsymptotic, BrownianMatchesExactFormula) {
  const RiskParams p = fbm_params(0.5, 1.0);
  const DerivedConstants dc = constants_of(p);
  for (double T : {0.0, 0.5, 1.0, 3.0})
    for (double u : {1.0, 4.0}) {
      const double g = g1_closed_form(dc.D0 * T);
      const double value =
          parisian_ruin_asymptotic(p, dc, WindowRegime::constant(T, T), u, g, 1.0);
      EXPECT_NEAR(value / bm_parisian_exact(u, 1.0, T), 1.0, 1e-12);
    }
}

TEST(FbmAsymptotic, AgreesWithGeneralFormula) {
  for (double h : {0.3, 0.5, 0.7, 0.9})
    for (double c : {0.5, 1.0, 2.0})
      for (double u : {1.0, 4.0, 10.0}) {
        const RiskParams p = fbm_params(h, c);
        const DerivedConstants dc = constants_of(p);
        const double g = 0.37;
        const double general = parisian_ruin_asymptotic(p, dc, WindowRegime{0.8, {}}, u, g, 1.0);
        const double fbm = fbm_parisian_asymptotic(h, c, 0.8, u, g);
        EXPECT_NEAR(fbm / general, 1.0, 1e-10) << "H=" << h << " c=" << c << " u=" << u;
      }
}

TEST(FbmAsymptotic, BrownianCase) {
  EXPECT_NEAR(fbm_parisian_asymptotic(0.5, 1.0, 1.0, 3.0, 0.25) / (0.25 * std::exp(-6.0)), 1.0,
              1e-13);
}

TEST(WindowedSupInf, UnboundedWindowReducesToParisianAsymptotic) {
  const RiskParams p = fbm_params(0.7, 1.0);
  const DerivedConstants dc = constants_of(p);
  const double u = 5.0, v = dc.v(u);
  const double windowed =
      windowed_supinf_asymptotic(p, dc, Unbounded{}, Unbounded{}, 0.6, v, 0.4, 1.1);
  const double parisian = parisian_ruin_asymptotic(p, dc, WindowRegime{0.6, {}}, u, 0.4, 1.1);
  EXPECT_NEAR(windowed / parisian, 1.0, 1e-12);
}

TEST(WindowedSupInf, SymmetricFiniteWindow) {
  const RiskParams p = fbm_params(0.5, 1.0);
  const DerivedConstants dc = constants_of(p);
  const double x = 0.8, v = 2.0;
  const double u = std::pow(v, dc.beta / (dc.beta - dc.hurst));
  const double factor = 2.0 * normal_cdf(std::sqrt(dc.B / dc.A) * x) - 1.0;
  EXPECT_NEAR(window_probability_factor(dc, x, x), factor, 1e-15);
  EXPECT_NEAR(windowed_supinf_asymptotic(p, dc, x, x, 0.0, v, std::nullopt, 1.0) /
                  (factor * classical_ruin_asymptotic(p, dc, u, 1.0)),
              1.0, 1e-12);
}

TEST(WindowedSupInf, FactorMonotoneInBothHalfWidths) {
  const DerivedConstants dc = constants_of(fbm_params(0.6, 1.0));
  double previous = -1.0;
  for (double x2 : {-0.5, 0.0, 0.5, 1.0, 2.0}) {
    const double f = window_probability_factor(dc, 1.0, x2);
    EXPECT_GT(f, previous);
    previous = f;
  }
  previous = -1.0;
  for (double x1 : {-0.5, 0.0, 0.5, 1.0, 2.0}) {
    const double f = window_probability_factor(dc, x1, 1.0);
    EXPECT_GT(f, previous);
    previous = f;
  }
  EXPECT_DOUBLE_EQ(window_probability_factor(dc, Unbounded{}, Unbounded{}), 1.0);
  EXPECT_THROW(window_probability_factor(dc, -1.0, 0.5), ParameterError);
}

TEST(Normalizers, ParisianTime) {
  const DerivedConstants dc = constants_of(fbm_params(0.5, 1.0));
  EXPECT_DOUBLE_EQ(parisian_time_normalizer(dc, 4.0, 6.0), 1.0);
  EXPECT_DOUBLE_EQ(parisian_time_normalizer(dc, 4.0, 4.0), 0.0);
  const DerivedConstants fbm = constants_of(fbm_params(0.7, 2.0, 1.3));
  const double u = 9.0, centre = fbm.t0 * std::pow(u, 1.0 / 1.3);
  EXPECT_NEAR(parisian_time_normalizer(fbm, u, centre), 0.0, 1e-13);
  EXPECT_LT(parisian_time_normalizer(fbm, u, centre - 0.1), parisian_time_normalizer(fbm, u, centre));
}

TEST(Normalizers, TimeGap) {
  const DerivedConstants dc = constants_of(fbm_params(0.5, 1.0));
  EXPECT_DOUBLE_EQ(time_gap_normalizer(dc, 4.0, 3.0, 3.0), 0.0);
  EXPECT_DOUBLE_EQ(time_gap_normalizer(dc, 4.0, 3.0, 5.0), 1.0);
  EXPECT_THROW(time_gap_normalizer(dc, 4.0, 3.0, 2.5), OrderingError);
  // H + 1 = beta: the gap is not rescaled.
  const DerivedConstants flat = constants_of(fbm_params(0.5, 1.0, 1.5));
  EXPECT_NEAR(time_gap_normalizer(flat, 17.0, 1.0, 1.75), 0.75, 1e-14);
}

TEST(RandomWindow, EquivalenceCondition) {
  EXPECT_TRUE(random_window_equivalence_holds(constants_of(fbm_params(0.75, 1.0))));
  EXPECT_FALSE(random_window_equivalence_holds(constants_of(fbm_params(0.5, 1.0))));
}

}  // namespace
}  // namespace parisian
