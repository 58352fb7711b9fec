#pragma once

namespace parnn {

double normal_pdf(double x);
double normal_cdf(double x);

/// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction,
/// relative accuracy around 1e-12.
double regularized_incomplete_beta(double a, double b, double x);

/// CDF of the F distribution with (d1, d2) degrees of freedom.
double f_cdf(double x, int d1, int d2);

/// Upper-alpha critical value of the F distribution (P(F > x) = alpha).
double f_critical(double alpha, int d1, int d2);

/// CDF of the range (max - min) of k independent standard normals,
/// evaluated by numerical integration.
double normal_range_cdf(double w, int k);

/// Upper-alpha quantile of the range of k independent standard normals,
/// inverted by bisection to absolute tolerance 1e-6.
double normal_range_quantile(double alpha, int k);

} // namespace parnn
