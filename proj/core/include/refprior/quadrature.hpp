#ifndef REFPRIOR_QUADRATURE_HPP
#define REFPRIOR_QUADRATURE_HPP

#include <functional>

namespace refprior {

// Change of variable used to map a semi-infinite domain (a, inf) onto (0,1).
// OneOverX: theta = a + x/(1-x), suited to algebraic tails.
// ExpDecay: theta = a - log(1-x), suited to exponential tails.
enum class TailTransform { OneOverX, ExpDecay };

struct QuadratureSettings {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int max_subdivisions = 2000;
  TailTransform tail = TailTransform::OneOverX;
};

struct QuadResult {
  double value = 0.0;
  double err_estimate = 0.0;
  int subdivisions_used = 0;
};

// Adaptive integration of f over (a, b) with a nested 7/15-point
// Gauss-Kronrod rule and bisection of the worst segment. b may be
// +infinity (a must be finite), in which case the tail transform from the
// settings is applied first. Interval endpoints are never evaluated, so
// integrable endpoint singularities are handled.
//
// Converged when the summed error estimate is at or below
// max(abs_tol, rel_tol * |integral|). Throws QuadratureError when that
// target is not met within max_subdivisions bisections, NaNError if f
// returns NaN at an evaluated node, DomainError for an invalid interval.
QuadResult integrate_adaptive(const std::function<double(double)>& f,
                              double a, double b,
                              const QuadratureSettings& settings = {});

// log of the integral of exp(logf) over (a, b). The integrand is shifted by
// the maximum of logf over a 33-point probe grid (plus near-endpoint
// probes) before exponentiating, so the computation never overflows and
// underflow far from the peak is harmless. logf may return -infinity
// anywhere on the interval; returns -infinity when no probe finds mass.
//
// Shift invariance: log_integrate(logf + s) = log_integrate(logf) + s up to
// 1e-12 for |s| <= 500.
double log_integrate(const std::function<double(double)>& logf,
                     double a, double b,
                     const QuadratureSettings& settings = {});

}  // namespace refprior

#endif
