#pragma once

// Special functions needed by the proposal transports and the bundled models.
// All functions are pure and reentrant.

namespace qda::special {

/// log|Gamma(x)| via the Lanczos approximation (g = 7, 9 terms), with the
/// reflection formula for x < 1/2. Relative error around 1e-15 away from the
/// zeros at x = 1, 2.
double log_gamma(double x);

double norm_cdf(double x);
double norm_log_pdf(double x);

/// Standard normal quantile, Wichura's AS241 (PPND16). Throws
/// std::domain_error outside (0,1).
double inv_norm_cdf(double p);

/// Regularized lower incomplete gamma P(a, x): power series for x < a+1,
/// Lentz continued fraction for Q otherwise.
double gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

/// Quantile of Gamma(shape, scale): Wilson-Hilferty start, then safeguarded
/// Newton on P (or on Q in the upper half for precision).
double gamma_quantile(double p, double shape, double scale);

double gamma_log_pdf(double x, double shape, double scale);

/// Regularized incomplete beta I_x(a, b), continued fraction with the
/// usual symmetry switch.
double beta_inc(double a, double b, double x);

double beta_log_pdf(double x, double a, double b);

double student_t_cdf(double t, double nu);
double student_t_quantile(double p, double nu);

}  // namespace qda::special
