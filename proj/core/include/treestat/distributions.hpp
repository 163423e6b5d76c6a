#pragma once

namespace treestat {

/// Regularized incomplete beta function I_x(a, b), continued-fraction
/// evaluation, relative accuracy around 1e-13.
double regularized_incomplete_beta(double a, double b, double x);

/// F distribution with d1, d2 degrees of freedom.
double f_cdf(double x, double d1, double d2);
double f_sf(double x, double d1, double d2);  // upper tail, accurate when tiny
double f_quantile(double p, double d1, double d2);

/// Student t distribution with df degrees of freedom.
double t_cdf(double x, double df);
double t_sf(double x, double df);
double t_quantile(double p, double df);

}  // namespace treestat
