#include "refprior/special_functions.hpp"

#include <cmath>
#include <numbers>

#include "refprior/errors.hpp"

namespace refprior {

double digamma(double x) {
  if (!(x > 0.0)) throw DomainError("digamma: requires x > 0");
  double acc = 0.0;
  // psi(x) = psi(x+1) - 1/x, applied until the series region x >= 6.
  while (x < 6.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  // ln x - 1/(2x) - sum_{n=1..6} B_{2n} / (2n x^{2n}).
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series =
      inv2 * (1.0 / 12 -
              inv2 * (1.0 / 120 -
                      inv2 * (1.0 / 252 -
                              inv2 * (1.0 / 240 -
                                      inv2 * (1.0 / 132 -
                                              inv2 * (691.0 / 32760))))));
  return acc + std::log(x) - 0.5 * inv - series;
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0);
}

namespace {

// Acklam's rational approximation to the normal quantile (relative error
// below 1.15e-9 on its own), used as the starting point for one Newton step.
double quantile_seed(double p) {
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double plow = 0.02425;

  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
          a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw DomainError("normal_quantile: requires p in (0,1)");
  double x = quantile_seed(p);
  // Newton step on Phi(x) - p; the density never vanishes.
  const double err = normal_cdf(x) - p;
  const double phi =
      std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  x -= err / phi;
  return x;
}

}  // namespace refprior
