#include "treestat/distributions.hpp"

#include <cmath>
#include <limits>

#include "treestat/error.hpp"

namespace treestat {

namespace {

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

/// Continued fraction for the incomplete beta function (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;

  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0))
    throw Error("regularized_incomplete_beta requires positive shapes");
  if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front =
      std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0))
    return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - std::exp(b * std::log1p(-x) + a * std::log(x) - log_beta(b, a)) *
                   beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_cdf(double x, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw Error("f_cdf requires positive df");
  if (x <= 0.0) return 0.0;
  return regularized_incomplete_beta(d1 / 2.0, d2 / 2.0,
                                     d1 * x / (d1 * x + d2));
}

double f_sf(double x, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw Error("f_sf requires positive df");
  if (x <= 0.0) return 1.0;
  // Evaluate the upper tail directly so tiny p-values keep precision.
  return regularized_incomplete_beta(d2 / 2.0, d1 / 2.0,
                                     d2 / (d2 + d1 * x));
}

double f_quantile(double p, double d1, double d2) {
  if (!(p >= 0.0) || !(p < 1.0)) throw Error("f_quantile requires p in [0,1)");
  if (p == 0.0) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (f_cdf(hi, d1, d2) < p) {
    hi *= 2.0;
    if (hi > 1e300) throw Error("f_quantile failed to bracket");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (f_cdf(mid, d1, d2) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double t_cdf(double x, double df) {
  if (!(df > 0.0)) throw Error("t_cdf requires positive df");
  if (x == 0.0) return 0.5;
  const double tail =
      0.5 * regularized_incomplete_beta(df / 2.0, 0.5, df / (df + x * x));
  return x > 0.0 ? 1.0 - tail : tail;
}

double t_sf(double x, double df) {
  if (!(df > 0.0)) throw Error("t_sf requires positive df");
  if (x == 0.0) return 0.5;
  const double tail =
      0.5 * regularized_incomplete_beta(df / 2.0, 0.5, df / (df + x * x));
  return x > 0.0 ? tail : 1.0 - tail;
}

double t_quantile(double p, double df) {
  if (!(p > 0.0) || !(p < 1.0))
    throw Error("t_quantile requires p in (0,1)");
  if (p == 0.5) return 0.0;
  if (p < 0.5) return -t_quantile(1.0 - p, df);
  double lo = 0.0;
  double hi = 1.0;
  while (t_cdf(hi, df) < p) {
    hi *= 2.0;
    if (hi > 1e300) throw Error("t_quantile failed to bracket");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (t_cdf(mid, df) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace treestat
