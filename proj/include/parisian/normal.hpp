#pragma once

namespace parisian {

// Standard normal distribution function, computed from erfc so that both
// tails keep full relative accuracy.
double normal_cdf(double x);
double normal_pdf(double x);

}  // namespace parisian
