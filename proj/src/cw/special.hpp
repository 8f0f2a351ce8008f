#pragma once

namespace cw {

// Self-contained special functions so that sampling and test statistics are
// bit-reproducible regardless of the host libm.

// log Gamma(x) for x > 0 (Lanczos approximation, ~1e-14 relative accuracy).
double log_gamma(double x);

// Standard normal quantile Phi^{-1}(p), p in (0,1) (Wichura's AS 241).
double normal_quantile(double p);

// Regularized incomplete beta I_x(a, b), x in [0,1].
double reg_inc_beta(double a, double b, double x);

// Inverse of I_x(a, b) in x for u in [0,1].
double reg_inc_beta_inv(double a, double b, double u);

// One-sided survival P(T > t) for Student's t with df degrees of freedom.
double student_t_sf(double t, double df);

} // namespace cw
