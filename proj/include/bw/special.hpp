#pragma once

namespace bw {

// Special functions backing the statistical machinery. Implemented locally
// (continued fractions / series) so the library carries no statistics
// dependency; validated against reference tables in the test suite.

/// Standard normal quantile (inverse CDF), |error| < 1.2e-9.
double normal_quantile(double p);

/// Standard normal CDF.
double normal_cdf(double x);

/// Regularized incomplete beta function I_x(a, b).
double incbeta(double a, double b, double x);

/// Regularized lower incomplete gamma P(a, x).
double gammp(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gammq(double a, double x);

/// Two-sided p-value of a Student-t statistic with df degrees of freedom.
double student_t_two_sided_p(double t, double df);

/// Upper-tail p-value of a chi-square statistic with df degrees of freedom.
double chi_square_upper_p(double x, double df);

}  // namespace bw
