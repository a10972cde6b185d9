#pragma once

namespace parisian {

// T-dependent factor of the Brownian Parisian ruin probability:
// [e^{-c^2 T/2} - c sqrt(2 pi T) Phi(-c sqrt T)] / [e^{-c^2 T/2} + c sqrt(2 pi T) Phi(c sqrt T)].
double bm_parisian_prefactor(double c, double T);

// Exact Parisian ruin probability of u + c t - W(t) with window T:
// prefactor(c, T) * exp(-2 c u).
double bm_parisian_exact(double u, double c, double T);

// Generalized Pickands constant for alpha = 1, with the denominator
// evaluated at Phi(+sqrt(T/2)); satisfies g1_closed_form(2 c^2 T) == bm_parisian_prefactor(c, T).
double g1_closed_form(double T);

}  // namespace parisian
