#include "parisian/asymptotics.hpp"

#include <cmath>
#include <limits>

#include "parisian/errors.hpp"
#include "parisian/normal.hpp"

namespace parisian {

namespace {

double require_constant(std::optional<double> value, const char* name) {
  if (!value) throw DependencyError(std::string("missing value for ") + name);
  detail::require(std::isfinite(*value) && *value > 0.0, "Pickands-type constants must be > 0");
  return *value;
}

// u^{H/beta + 1/beta - 1}
double time_scale(const DerivedConstants& dc, double u) {
  return std::pow(u, dc.hurst / dc.beta + 1.0 / dc.beta - 1.0);
}

}  // namespace

WindowRegime WindowRegime::constant(double Tu, double limit_T) {
  detail::require(Tu >= 0.0 && limit_T >= 0.0, "window durations must be >= 0");
  return WindowRegime{limit_T, [Tu](double) { return Tu; }};
}

double scaled_window(const DerivedConstants& dc, double u, double Tu) {
  detail::require(u > 0.0, "u must be > 0");
  return Tu * std::pow(u, -1.0 / dc.beta) / dc.K_inv(std::pow(u, dc.hurst / dc.beta - 1.0));
}

double classical_ruin_asymptotic(const RiskParams& params, const DerivedConstants& dc, double u,
                                 std::optional<double> h_alpha) {
  params.validate();
  detail::require(u > 0.0, "u must be > 0");
  const double h = require_constant(h_alpha, "the Pickands constant H_alpha");
  const double a = dc.alpha;
  const double H = dc.hurst, beta = dc.beta;
  const double lead = std::pow(dc.A, 1.5 - 2.0 / a) * std::pow(dc.Q, 1.0 / a) * h /
                      (std::pow(2.0, 1.0 / a) * std::sqrt(dc.B));
  const double power = std::pow(u, 2.0 * H / beta - 2.0) / dc.K_inv(std::pow(u, H / beta - 1.0));
  const double expo = std::exp(-std::pow(u, 2.0 * (1.0 - H / beta)) / (2.0 * dc.A * dc.A));
  return lead * power * expo;
}

double parisian_ruin_asymptotic(const RiskParams& params, const DerivedConstants& dc,
                                const WindowRegime& regime, double u, std::optional<double> g_alpha,
                                std::optional<double> h_alpha) {
  detail::require(regime.T >= 0.0, "window limit T must be >= 0");
  const double g = require_constant(g_alpha, "the generalized Pickands constant");
  const double h = require_constant(h_alpha, "the Pickands constant H_alpha");
  return g / h * classical_ruin_asymptotic(params, dc, u, h);
}

double fbm_D0(double hurst, double c) {
  detail::require(hurst > 0.0 && hurst < 1.0, "H must lie in (0,1)");
  detail::require(c > 0.0, "c must be > 0");
  return std::pow(2.0, -1.0 / (2.0 * hurst)) * c * c * std::pow(hurst, -2.0) *
         std::pow(1.0 - hurst, 2.0 - 1.0 / hurst);
}

double fbm_parisian_asymptotic(double hurst, double c, double T, double u, double g2h) {
  detail::require(hurst > 0.0 && hurst < 1.0, "H must lie in (0,1)");
  detail::require(c > 0.0 && u > 0.0 && T >= 0.0, "require c > 0, u > 0, T >= 0");
  detail::require(g2h > 0.0, "generalized Pickands constant must be > 0");
  const double H = hurst;
  const double lead = std::pow(2.0, -1.0 / (2.0 * H)) / std::sqrt(H * (1.0 - H));
  const double base = std::pow(c, H) * std::pow(u, 1.0 - H) /
                      (std::pow(H, H) * std::pow(1.0 - H, 1.0 - H));
  const double expo = std::exp(-std::pow(c, 2.0 * H) * std::pow(u, 2.0 * (1.0 - H)) /
                               (2.0 * std::pow(H, 2.0 * H) * std::pow(1.0 - H, 2.0 * (1.0 - H))));
  return g2h * lead * std::pow(base, 1.0 / H - 2.0) * expo;
}

double window_probability_factor(const DerivedConstants& dc, HalfWidth x1, HalfWidth x2) {
  const double k = std::sqrt(dc.B / dc.A);
  const bool inf1 = std::holds_alternative<Unbounded>(x1);
  const bool inf2 = std::holds_alternative<Unbounded>(x2);
  if (!inf1 && !inf2)
    detail::require(std::get<double>(x2) > -std::get<double>(x1), "require x2 > -x1");
  const double upper = inf2 ? 1.0 : normal_cdf(k * std::get<double>(x2));
  const double lower = inf1 ? 0.0 : normal_cdf(-k * std::get<double>(x1));
  return upper - lower;
}

double windowed_supinf_asymptotic(const RiskParams& params, const DerivedConstants& dc,
                                  HalfWidth x1, HalfWidth x2, double lambda, double v,
                                  std::optional<double> g_alpha, std::optional<double> h_alpha) {
  detail::require(lambda >= 0.0, "lambda must be >= 0");
  detail::require(v > 0.0, "v must be > 0");
  const double h = require_constant(h_alpha, "the Pickands constant H_alpha");
  // A zero window makes the generalized constant equal to H_alpha.
  const double g = lambda == 0.0 && !g_alpha ? h : require_constant(g_alpha, "the generalized Pickands constant");
  // v(u) = u^{1 - H/beta}  =>  u = v^{beta / (beta - H)}
  const double u = std::pow(v, dc.beta / (dc.beta - dc.hurst));
  return g / h * window_probability_factor(dc, x1, x2) *
         classical_ruin_asymptotic(params, dc, u, h);
}

double parisian_time_normalizer(const DerivedConstants& dc, double u, double tau_star) {
  detail::require(u > 0.0, "u must be > 0");
  const double centre = dc.t0 * std::pow(u, 1.0 / dc.beta);
  const double scale = std::sqrt(dc.A / dc.B) * time_scale(dc, u);
  return (tau_star - centre) / scale;
}

double time_gap_normalizer(const DerivedConstants& dc, double u, double tau, double tau_star) {
  detail::require(u > 0.0, "u must be > 0");
  detail::require(tau >= 0.0, "tau must be >= 0");
  if (tau_star < tau) throw OrderingError("Parisian ruin time precedes classical ruin time");
  return (tau_star - tau) / time_scale(dc, u);
}

bool random_window_equivalence_holds(const DerivedConstants& dc) {
  return 2.0 * dc.hurst + dc.alpha > 2.0 * dc.beta;
}

}  // namespace parisian
