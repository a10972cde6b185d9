#pragma once

// Large-reserve approximations of classical and Parisian ruin quantities.
// Pickands-type constants are injected: exact where known, Monte Carlo
// estimates otherwise.

#include <functional>
#include <optional>
#include <variant>

#include "parisian/risk_model.hpp"

namespace parisian {

// Deterministic window T_u and its scaled limit
// T = lim T_u u^{-1/beta} / K_inv(u^{H/beta - 1}).
struct WindowRegime {
  double T = 0.0;
  std::function<double(double)> Tu_fn;

  // Constant window T_u == Tu; its limit T is computed for the given constants
  // only when the scaling exponent vanishes (e.g. Brownian motion, beta = 1).
  static WindowRegime constant(double Tu, double limit_T);
};

// Scaled window T_u u^{-1/beta} / K_inv(u^{H/beta - 1}) at finite u.
double scaled_window(const DerivedConstants& dc, double u, double Tu);

// Prefactor * u^{2H/beta - 2} / K_inv(u^{H/beta - 1}) * exp(-u^{2(1 - H/beta)} / (2 A^2)).
double classical_ruin_asymptotic(const RiskParams& params, const DerivedConstants& dc, double u,
                                 std::optional<double> h_alpha);

// (g_alpha / h_alpha) times the classical approximation; g_alpha is the
// generalized constant at D0 * regime.T.
double parisian_ruin_asymptotic(const RiskParams& params, const DerivedConstants& dc,
                                const WindowRegime& regime, double u, std::optional<double> g_alpha,
                                std::optional<double> h_alpha);

// 2^{-1/(2H)} c^2 H^{-2} (1-H)^{2 - 1/H}
double fbm_D0(double hurst, double c);

// Parisian ruin approximation for u + c t - B_{2H}(t); g2h is the generalized
// constant at fbm_D0(H, c) * T.
double fbm_parisian_asymptotic(double hurst, double c, double T, double u, double g2h);

struct Unbounded {};
using HalfWidth = std::variant<double, Unbounded>;

// Tail of the windowed sup-inf functional of Z around t0 at level v.
double windowed_supinf_asymptotic(const RiskParams& params, const DerivedConstants& dc,
                                  HalfWidth x1, HalfWidth x2, double lambda, double v,
                                  std::optional<double> g_alpha, std::optional<double> h_alpha);

// Phi(A^{-1/2} B^{1/2} x2) - Phi(-A^{-1/2} B^{1/2} x1)
double window_probability_factor(const DerivedConstants& dc, HalfWidth x1, HalfWidth x2);

// (tau_star - t0 u^{1/beta}) / (A^{1/2} B^{-1/2} u^{H/beta + 1/beta - 1})
double parisian_time_normalizer(const DerivedConstants& dc, double u, double tau_star);

// (tau_star - tau) / u^{H/beta + 1/beta - 1}; throws OrderingError if tau_star < tau.
double time_gap_normalizer(const DerivedConstants& dc, double u, double tau, double tau_star);

// Random-window equivalence condition 2H + alpha > 2 beta.
bool random_window_equivalence_holds(const DerivedConstants& dc);

}  // namespace parisian
