#include "parisian/risk_model.hpp"

#include <cmath>

#include "parisian/errors.hpp"

namespace parisian {

void RiskParams::validate() const {
  detail::require(std::isfinite(u) && u >= 0.0, "initial reserve u must be >= 0");
  detail::require(std::isfinite(c) && c > 0.0, "premium rate c must be > 0");
  detail::require(std::isfinite(beta) && beta > 0.0, "premium exponent beta must be > 0");
  detail::require(beta > hurst(), "premium exponent beta must exceed the Hurst index H");
}

LocalStationarity LocalStationarity::fbm(const RiskParams& params) {
  params.validate();
  const double h = params.hurst();
  const double t0 = std::pow(h / (params.c * (params.beta - h)), 1.0 / params.beta);
  LocalStationarity ls;
  ls.alpha = 2.0 * h;
  ls.Q = std::pow(t0, -2.0 * h);
  ls.K = [h](double t) { return std::pow(t, h); };
  ls.K_inv = [h](double x) { return std::pow(x, 1.0 / h); };
  return ls;
}

double DerivedConstants::v(double u) const { return std::pow(u, 1.0 - hurst / beta); }

double DerivedConstants::q(double vv) const { return K_inv(1.0 / vv); }

double DerivedConstants::Sv(double u, double Tu) const { return Tu * std::pow(u, -1.0 / beta); }

double sigma_z(const RiskParams& params, double t) {
  detail::require(t >= 0.0, "sigma_z: t must be >= 0");
  return std::pow(t, params.hurst()) / (1.0 + params.c * std::pow(t, params.beta));
}

DerivedConstants derived_constants(const RiskParams& params, const LocalStationarity& ls) {
  params.validate();
  detail::require(ls.alpha > 0.0 && ls.alpha <= 2.0, "local index alpha must lie in (0,2]");
  detail::require(ls.Q > 0.0, "local stationarity constant Q must be > 0");
  const double h = params.hurst();
  const double beta = params.beta;
  const double ratio = h / (params.c * (beta - h));
  DerivedConstants d;
  d.t0 = std::pow(ratio, 1.0 / beta);
  d.A = (beta - h) / beta * std::pow(ratio, h / beta);
  d.B = std::pow(ratio, -(h + 2.0) / beta) * h * beta;
  d.alpha = ls.alpha;
  d.Q = ls.Q;
  d.D0 = std::pow(2.0, -1.0 / ls.alpha) * std::pow(d.A, -2.0 / ls.alpha) *
         std::pow(ls.Q, 1.0 / ls.alpha);
  d.hurst = h;
  d.beta = beta;
  d.K_inv = ls.K_inv;
  return d;
}

double variance_expansion_error(const RiskParams& params, const LocalStationarity& ls,
                                double eps) {
  const DerivedConstants d = derived_constants(params, ls);
  detail::require(std::abs(eps) < d.t0, "variance_expansion_error: |eps| must be < t0");
  const double quad = d.A - 0.5 * d.B * d.A * d.A * eps * eps;
  return std::abs(sigma_z(params, d.t0 + eps) - quad);
}

}  // namespace parisian
