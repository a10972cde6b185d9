#include "parisian/closed_form.hpp"

#include <cmath>
#include <numbers>

#include "parisian/errors.hpp"
#include "parisian/normal.hpp"

namespace parisian {

namespace {

// [e^{-x/2} - sqrt(2 pi x) Phi(-sqrt x)] / [e^{-x/2} + sqrt(2 pi x) Phi(sqrt x)], x = c^2 T
double window_factor(double x) {
  if (x == 0.0) return 1.0;
  const double r = std::sqrt(x);
  const double e = std::exp(-0.5 * x);
  const double s = std::sqrt(2.0 * std::numbers::pi) * r;
  return (e - s * normal_cdf(-r)) / (e + s * normal_cdf(r));
}

}  // namespace

double bm_parisian_prefactor(double c, double T) {
  detail::require(std::isfinite(c) && c > 0.0, "c must be > 0");
  detail::require(std::isfinite(T) && T >= 0.0, "window T must be >= 0");
  return window_factor(c * c * T);
}

double bm_parisian_exact(double u, double c, double T) {
  detail::require(std::isfinite(u) && u >= 0.0, "u must be >= 0");
  return bm_parisian_prefactor(c, T) * std::exp(-2.0 * c * u);
}

double g1_closed_form(double T) {
  detail::require(std::isfinite(T) && T >= 0.0, "T must be >= 0");
  if (T == 0.0) return 1.0;
  const double e = std::exp(-0.25 * T);
  const double s = std::sqrt(std::numbers::pi * T);
  const double r = std::sqrt(0.5 * T);
  return (e - s * normal_cdf(-r)) / (e + s * normal_cdf(r));
}

}  // namespace parisian
