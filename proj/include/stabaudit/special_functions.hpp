#pragma once

namespace stabaudit {

// Distribution tails used by the test kernels. Implemented from the classic
// series / continued-fraction expansions (Lentz's method for the incomplete
// beta, series + CF split for the incomplete gamma); accurate to ~1e-12 over
// the parameter ranges the kernels use.

/// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
double regularized_incomplete_beta(double a, double b, double x);

/// Regularized upper incomplete gamma Q(a, x), a > 0, x >= 0.
double regularized_gamma_q(double a, double x);

/// Standard normal survival function P(Z > z).
double normal_sf(double z);

/// Two-sided normal p-value: P(|Z| >= |z|).
double normal_two_sided_p(double z);

/// Two-sided Student-t p-value with dof degrees of freedom: P(|T| >= |t|).
double student_t_two_sided_p(double t, double dof);

/// Upper-tail F p-value: P(F >= f) with (d1, d2) degrees of freedom.
double f_upper_p(double f, double d1, double d2);

/// Upper-tail chi-squared p-value: P(X >= x) with dof degrees of freedom.
double chi_squared_upper_p(double x, double dof);

}  // namespace stabaudit
