#pragma once

// Surplus model R_u(t) = u + c t^beta - X_H(t) and the analytic quantities
// derived from the standardized process Z(t) = X_H(t) / (1 + c t^beta).

#include <functional>

#include "parisian/process_sim.hpp"

namespace parisian {

struct RiskParams {
  double u = 0.0;     // initial reserve
  double c = 1.0;     // premium rate
  double beta = 1.0;  // premium exponent, must exceed H
  CovarianceModel model = CovarianceModel::fbm(0.5);

  double hurst() const { return model.hurst(); }
  // Throws ParameterError unless u >= 0, c > 0, beta > H.
  void validate() const;
};

// Local behaviour of the standardized process near its variance peak:
// E(Xbar(s) - Xbar(t))^2 ~ Q K^2(|s - t|), K regularly varying with index alpha/2.
struct LocalStationarity {
  double alpha = 1.0;
  double Q = 1.0;
  std::function<double(double)> K;
  std::function<double(double)> K_inv;

  // fBm preset: K(t) = t^H, K_inv(x) = x^{1/H}, alpha = 2H, Q = t0^{-2H}.
  static LocalStationarity fbm(const RiskParams& params);
};

struct DerivedConstants {
  double t0 = 0.0;  // argmax of sigma_Z
  double A = 0.0;   // sigma_Z(t0)
  double B = 0.0;   // curvature: sigma_Z(t) = A - B A^2 (t - t0)^2 / 2 + ...
  double D0 = 0.0;  // 2^{-1/alpha} A^{-2/alpha} Q^{1/alpha}
  double alpha = 1.0;
  double Q = 1.0;
  double hurst = 0.5;
  double beta = 1.0;
  std::function<double(double)> K_inv;

  // u^{1 - H/beta}
  double v(double u) const;
  // K_inv(1/v)
  double q(double v) const;
  // T_u u^{-1/beta}
  double Sv(double u, double Tu) const;
};

double sigma_z(const RiskParams& params, double t);
DerivedConstants derived_constants(const RiskParams& params, const LocalStationarity& ls);

// |sigma_Z(t0 + eps) - (A - B A^2 eps^2 / 2)|
double variance_expansion_error(const RiskParams& params, const LocalStationarity& ls, double eps);

}  // namespace parisian
