#include "refprior/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "refprior/errors.hpp"
#include "refprior/special_functions.hpp"

namespace refprior {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_theta(const Model& model, double theta) {
  if (std::isnan(theta) || !model.theta_domain().contains(theta))
    throw DomainError(std::string("theta outside the domain of ") +
                      std::string(model.name()));
}

void check_unit(double u) {
  if (!(u > 0.0 && u < 1.0))
    throw DomainError("inverse_cdf: requires u in the open interval (0,1)");
}

// log(e^A - 1) for A > 0 without overflow or cancellation.
double log_expm1(double A) { return A + std::log(-std::expm1(-A)); }

double logsumexp(const std::vector<double>& terms) {
  double m = -kInf;
  for (double t : terms) m = std::max(m, t);
  if (m == -kInf) return -kInf;
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - m);
  return m + std::log(acc);
}

}  // namespace

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw EmptySampleError("Sample: no observations");
  for (double v : values_)
    if (!std::isfinite(v))
      throw DomainError("Sample: observations must be finite");
  sorted_ = values_;
  std::sort(sorted_.begin(), sorted_.end());
  sum_ = std::accumulate(values_.begin(), values_.end(), 0.0);
}

std::string_view Model::name() const { return model_name(id_); }

std::string_view model_name(ModelId id) {
  switch (id) {
    case ModelId::ExpRate: return "exp";
    case ModelId::Unif0Theta: return "unif0theta";
    case ModelId::UnifThetaThetaSq: return "unifthetasq";
    case ModelId::Triangular01: return "triangular";
  }
  throw InternalError("model_name: unknown id");
}

std::optional<ModelId> model_from_name(std::string_view name) {
  if (name == "exp") return ModelId::ExpRate;
  if (name == "unif0theta") return ModelId::Unif0Theta;
  if (name == "unifthetasq") return ModelId::UnifThetaThetaSq;
  if (name == "triangular") return ModelId::Triangular01;
  return std::nullopt;
}

ThetaDomain Model::theta_domain() const {
  switch (id_) {
    case ModelId::ExpRate: return {0.0, kInf};
    case ModelId::Unif0Theta: return {0.0, kInf};
    case ModelId::UnifThetaThetaSq: return {1.0, kInf};
    case ModelId::Triangular01: return {0.0, 1.0};
  }
  throw InternalError("theta_domain: unknown id");
}

double Model::default_theta0() const {
  switch (id_) {
    case ModelId::ExpRate: return 1.0;
    case ModelId::Unif0Theta: return 1.0;
    case ModelId::UnifThetaThetaSq: return 1.001;
    case ModelId::Triangular01: return 0.5;
  }
  throw InternalError("default_theta0: unknown id");
}

std::pair<double, double> Model::support(double theta) const {
  check_theta(*this, theta);
  switch (id_) {
    case ModelId::ExpRate: return {0.0, kInf};
    case ModelId::Unif0Theta: return {0.0, theta};
    case ModelId::UnifThetaThetaSq: return {theta, theta * theta};
    case ModelId::Triangular01: return {0.0, 1.0};
  }
  throw InternalError("support: unknown id");
}

double Model::log_density(double y, double theta) const {
  check_theta(*this, theta);
  switch (id_) {
    case ModelId::ExpRate:
      return y > 0.0 ? std::log(theta) - theta * y : -kInf;
    case ModelId::Unif0Theta:
      return (y > 0.0 && y < theta) ? -std::log(theta) : -kInf;
    case ModelId::UnifThetaThetaSq:
      return (y > theta && y < theta * theta)
                 ? -(std::log(theta) + std::log(theta - 1.0))
                 : -kInf;
    case ModelId::Triangular01:
      if (!(y > 0.0 && y < 1.0)) return -kInf;
      if (y <= theta) return std::log(2.0 * y / theta);
      return std::log(2.0 * (1.0 - y) / (1.0 - theta));
  }
  throw InternalError("log_density: unknown id");
}

double Model::cdf(double y, double theta) const {
  check_theta(*this, theta);
  switch (id_) {
    case ModelId::ExpRate:
      return y > 0.0 ? -std::expm1(-theta * y) : 0.0;
    case ModelId::Unif0Theta:
      if (y <= 0.0) return 0.0;
      if (y >= theta) return 1.0;
      return y / theta;
    case ModelId::UnifThetaThetaSq:
      if (y <= theta) return 0.0;
      if (y >= theta * theta) return 1.0;
      return (y - theta) / (theta * (theta - 1.0));
    case ModelId::Triangular01:
      if (y <= 0.0) return 0.0;
      if (y >= 1.0) return 1.0;
      if (y <= theta) return y * y / theta;
      return 1.0 - (1.0 - y) * (1.0 - y) / (1.0 - theta);
  }
  throw InternalError("cdf: unknown id");
}

double Model::inverse_cdf(double u, double theta) const {
  check_theta(*this, theta);
  check_unit(u);
  switch (id_) {
    case ModelId::ExpRate:
      return -std::log1p(-u) / theta;
    case ModelId::Unif0Theta:
      return u * theta;
    case ModelId::UnifThetaThetaSq:
      return theta + u * theta * (theta - 1.0);
    case ModelId::Triangular01:
      if (u <= theta) return std::sqrt(u * theta);
      return 1.0 - std::sqrt((1.0 - u) * (1.0 - theta));
  }
  throw InternalError("inverse_cdf: unknown id");
}

double Model::crn_transform(double y, double theta, double theta0) const {
  check_theta(*this, theta);
  check_theta(*this, theta0);
  const auto [lo, hi] = support(theta);
  if (!(y > lo && y < hi))
    throw DomainError("crn_transform: y outside the support at theta");
  if (theta == theta0) return y;  // identical stream, bitwise
  switch (id_) {
    case ModelId::ExpRate:
      return y * (theta / theta0);
    case ModelId::Unif0Theta:
      return y * (theta0 / theta);
    case ModelId::UnifThetaThetaSq:
      return theta0 +
             (y - theta) * (theta0 * (theta0 - 1.0)) / (theta * (theta - 1.0));
    case ModelId::Triangular01: {
      const double u = cdf(y, theta);
      if (y <= theta) {
        if (u <= theta0) return y * std::sqrt(theta0 / theta);
        return 1.0 - std::sqrt((1.0 - theta0) * (1.0 - y * y / theta));
      }
      const double om = (1.0 - y) * (1.0 - y) / (1.0 - theta);
      if (u <= theta0) return std::sqrt(theta0 * (1.0 - om));
      return 1.0 - (1.0 - y) * std::sqrt((1.0 - theta0) / (1.0 - theta));
    }
  }
  throw InternalError("crn_transform: unknown id");
}

double Model::log_joint(const Sample& x, double theta) const {
  check_theta(*this, theta);
  const std::size_t k = x.size();
  switch (id_) {
    case ModelId::ExpRate:
      if (!(x.min() > 0.0)) return -kInf;
      return static_cast<double>(k) * std::log(theta) - theta * x.sum();
    case ModelId::Unif0Theta:
      if (!(x.min() > 0.0)) return -kInf;
      return x.max() < theta ? -static_cast<double>(k) * std::log(theta)
                             : -kInf;
    case ModelId::UnifThetaThetaSq:
      if (x.min() > theta && x.max() < theta * theta)
        return -static_cast<double>(k) *
               (std::log(theta) + std::log(theta - 1.0));
      return -kInf;
    case ModelId::Triangular01: {
      if (!(x.min() > 0.0 && x.max() < 1.0)) return -kInf;
      const auto t = x.order_stats();
      // r observations at or below the mode take the rising branch.
      const std::size_t r =
          std::upper_bound(t.begin(), t.end(), theta) - t.begin();
      double acc = static_cast<double>(k) * std::numbers::ln2;
      for (std::size_t i = 0; i < r; ++i) acc += std::log(t[i]);
      for (std::size_t i = r; i < k; ++i) acc += std::log1p(-t[i]);
      acc -= static_cast<double>(r) * std::log(theta);
      acc -= static_cast<double>(k - r) * std::log1p(-theta);
      return acc;
    }
  }
  throw InternalError("log_joint: unknown id");
}

namespace {

double log_marginal_exp(const Sample& x) {
  if (!(x.min() > 0.0))
    throw DegenerateSampleError(
        "log_marginal_c: sample outside the support of every theta");
  const double k = static_cast<double>(x.size());
  return std::lgamma(k + 1.0) - (k + 1.0) * std::log(x.sum());
}

double log_marginal_unif0(const Sample& x) {
  if (x.size() < 2)
    throw DomainError("log_marginal_c: closed form requires k >= 2");
  if (!(x.min() > 0.0))
    throw DegenerateSampleError(
        "log_marginal_c: sample outside the support of every theta");
  const double k = static_cast<double>(x.size());
  return (1.0 - k) * std::log(x.max()) - std::log(k - 1.0);
}

double log_marginal_unifsq(const Sample& x, const QuadratureSettings& quad) {
  if (!(x.min() > 1.0))
    throw DegenerateSampleError(
        "log_marginal_c: sample outside the support of every theta");
  const double lo = std::sqrt(x.max());
  const double hi = x.min();
  if (!(lo < hi))
    throw DegenerateSampleError(
        "log_marginal_c: empty joint support interval");
  const double k = static_cast<double>(x.size());
  return log_integrate(
      [k](double theta) {
        return -k * (std::log(theta) + std::log(theta - 1.0));
      },
      lo, hi, quad);
}

double log_marginal_triangular(const Sample& x,
                               const QuadratureSettings& quad) {
  const std::size_t k = x.size();
  if (k < 2)
    throw DomainError("log_marginal_c: boundary segments require k >= 2");
  if (!(x.min() > 0.0 && x.max() < 1.0))
    throw DegenerateSampleError(
        "log_marginal_c: sample outside the support of every theta");
  const auto t = x.order_stats();
  const double kd = static_cast<double>(k);

  // pre[q] = sum_{i<q} log t_(i); suf[q] = sum_{i>=q} log(1 - t_(i)).
  std::vector<double> pre(k + 1, 0.0), suf(k + 1, 0.0);
  for (std::size_t i = 0; i < k; ++i) pre[i + 1] = pre[i] + std::log(t[i]);
  for (std::size_t i = k; i-- > 0;) suf[i] = suf[i + 1] + std::log1p(-t[i]);

  std::vector<double> terms;
  terms.reserve(k + 1);

  // Segment below t_(1): integral of (1-theta)^{-k} in closed form.
  terms.push_back(suf[0] + log_expm1((1.0 - kd) * std::log1p(-t[0])) -
                  std::log(kd - 1.0));

  // Interior segments: the integrand theta^{-q} (1-theta)^{-(k-q)} has a
  // convex log, so its maximum sits at a segment endpoint; shifting by that
  // keeps the exponentiated integrand in range for any k.
  for (std::size_t q = 1; q < k; ++q) {
    const double a = t[q - 1];
    const double b = t[q];
    if (!(a < b)) continue;  // duplicate order statistics: zero-width segment
    const double qd = static_cast<double>(q);
    const auto logf = [qd, kd](double theta) {
      return -qd * std::log(theta) - (kd - qd) * std::log1p(-theta);
    };
    const double shift = std::max(logf(a), logf(b));
    const QuadResult seg = integrate_adaptive(
        [&logf, shift](double theta) { return std::exp(logf(theta) - shift); },
        a, b, quad);
    if (seg.value > 0.0)
      terms.push_back(pre[q] + suf[q] + shift + std::log(seg.value));
  }

  // Segment above t_(k): integral of theta^{-k} in closed form.
  terms.push_back(pre[k] + log_expm1((1.0 - kd) * std::log(t[k - 1])) -
                  std::log(kd - 1.0));

  return kd * std::numbers::ln2 + logsumexp(terms);
}

}  // namespace

double Model::log_marginal_c(const Sample& x,
                             const QuadratureSettings& quad) const {
  switch (id_) {
    case ModelId::ExpRate: return log_marginal_exp(x);
    case ModelId::Unif0Theta: return log_marginal_unif0(x);
    case ModelId::UnifThetaThetaSq: return log_marginal_unifsq(x, quad);
    case ModelId::Triangular01: return log_marginal_triangular(x, quad);
  }
  throw InternalError("log_marginal_c: unknown id");
}

double Model::r_statistic(const Sample& x, double theta,
                          const QuadratureSettings& quad) const {
  const double lj = log_joint(x, theta);
  if (lj == -kInf) return -kInf;
  return lj - log_marginal_c(x, quad);
}

std::optional<KnownPrior> Model::known_prior() const {
  return KnownPrior{id_, id_ == ModelId::Triangular01};
}

double KnownPrior::operator()(double theta) const {
  check_theta(Model(model), theta);
  switch (model) {
    case ModelId::ExpRate:
    case ModelId::Unif0Theta:
      return 1.0 / theta;
    case ModelId::UnifThetaThetaSq:
      return (2.0 * theta - 1.0) / (theta * (theta - 1.0)) *
             std::exp(digamma(2.0 * theta / (2.0 * theta - 1.0)) - 1.0);
    case ModelId::Triangular01:
      return 1.0 / std::sqrt(theta * (1.0 - theta));
  }
  throw InternalError("KnownPrior: unknown id");
}

}  // namespace refprior
