#include "refprior/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "refprior/errors.hpp"

namespace refprior {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 15-point Kronrod abscissae on [-1,1] (positive half; symmetric) with the
// Kronrod weights and the embedded 7-point Gauss weights. Odd indices are
// the Gauss nodes.
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Segment {
  double a, b;
  double integral;
  double error;
};

struct SegmentWorse {
  bool operator()(const Segment& x, const Segment& y) const {
    return x.error < y.error;
  }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  if (std::isnan(fc)) throw NaNError("integrate_adaptive: integrand is NaN");
  double resk = kWgk[7] * fc;
  double resg = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kXgk[i];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    if (std::isnan(f1) || std::isnan(f2))
      throw NaNError("integrate_adaptive: integrand is NaN");
    const double fsum = f1 + f2;
    resk += kWgk[i] * fsum;
    if (i % 2 == 1) resg += kWg[i / 2] * fsum;
  }
  return {a, b, resk * h, std::abs((resk - resg) * h)};
}

QuadResult adapt_finite(const std::function<double(double)>& f, double a,
                        double b, const QuadratureSettings& s) {
  std::priority_queue<Segment, std::vector<Segment>, SegmentWorse> queue;
  Segment first = gk15(f, a, b);
  double total = first.integral;
  double err = first.error;
  queue.push(first);
  int used = 0;
  while (err > std::max(s.abs_tol, s.rel_tol * std::abs(total))) {
    if (used >= s.max_subdivisions)
      throw QuadratureError(
          "integrate_adaptive: error target not reached within subdivision "
          "budget");
    const Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b))
      throw QuadratureError(
          "integrate_adaptive: interval can no longer be bisected");
    const Segment left = gk15(f, worst.a, mid);
    const Segment right = gk15(f, mid, worst.b);
    total += left.integral + right.integral - worst.integral;
    err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++used;
  }
  return {total, err, used};
}

// Wraps f for integration over (a, inf) as an integral over (0, 1).
std::function<double(double)> tail_wrap(const std::function<double(double)>& f,
                                        double a, TailTransform tail) {
  if (tail == TailTransform::OneOverX) {
    return [&f, a](double x) {
      const double om = 1.0 - x;
      return f(a + x / om) / (om * om);
    };
  }
  return [&f, a](double x) {
    const double om = 1.0 - x;
    return f(a - std::log(om)) / om;
  };
}

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a,
                              double b, const QuadratureSettings& s) {
  if (std::isnan(a) || std::isnan(b) || std::isinf(a) || !(a < b))
    throw DomainError("integrate_adaptive: requires finite a < b");
  if (s.max_subdivisions < 1 || !(s.rel_tol > 0.0) || s.abs_tol < 0.0)
    throw DomainError("integrate_adaptive: invalid settings");
  if (std::isinf(b)) {
    const auto g = tail_wrap(f, a, s.tail);
    return adapt_finite(g, 0.0, 1.0, s);
  }
  return adapt_finite(f, a, b, s);
}

double log_integrate(const std::function<double(double)>& logf, double a,
                     double b, const QuadratureSettings& s) {
  if (std::isnan(a) || std::isnan(b) || std::isinf(a) || !(a < b))
    throw DomainError("log_integrate: requires finite a < b");

  // Reduce to a finite interval first so probing covers the tail too.
  std::function<double(double)> lg;
  double lo = a, hi = b;
  if (std::isinf(b)) {
    lo = 0.0;
    hi = 1.0;
    if (s.tail == TailTransform::OneOverX) {
      lg = [&logf, a](double x) {
        const double om = 1.0 - x;
        return logf(a + x / om) - 2.0 * std::log(om);
      };
    } else {
      lg = [&logf, a](double x) {
        const double om = 1.0 - x;
        return logf(a - std::log(om)) - std::log(om);
      };
    }
  } else {
    lg = logf;
  }

  // Shift by the largest log value seen on a probe grid (33 interior points
  // plus near-endpoint probes) so the exponentiated integrand peaks near 1.
  const double w = hi - lo;
  double shift = -kInf;
  auto probe = [&](double x) {
    const double v = lg(x);
    if (std::isnan(v)) throw NaNError("log_integrate: integrand is NaN");
    if (v > shift) shift = v;
  };
  constexpr int kProbes = 33;
  for (int i = 1; i <= kProbes; ++i)
    probe(lo + w * (static_cast<double>(i) / (kProbes + 1)));
  probe(lo + w * 1e-9);
  probe(hi - w * 1e-9);
  if (shift == -kInf) return -kInf;

  const auto integrand = [&lg, shift](double x) {
    const double v = lg(x);
    return v == -kInf ? 0.0 : std::exp(v - shift);
  };
  const QuadResult r = integrate_adaptive(integrand, lo, hi, s);
  if (!(r.value > 0.0)) return -kInf;
  return shift + std::log(r.value);
}

}  // namespace refprior
