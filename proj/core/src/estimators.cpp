#include "refprior/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "refprior/errors.hpp"
#include "refprior/special_functions.hpp"

namespace refprior {

namespace {

double finite_r(const Model& model, const Sample& x, double theta,
                const QuadratureSettings& quad) {
  const double r = model.r_statistic(x, theta, quad);
  if (std::isnan(r)) throw NaNError("estimator: r statistic is NaN");
  if (!std::isfinite(r))
    throw InternalError(
        "estimator: r statistic diverged; a replicate violates the support "
        "constraints of its own theta");
  return r;
}

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

}  // namespace

std::vector<double> r_rows(const Model& model, double theta,
                           std::span<const Sample> samples,
                           const QuadratureSettings& quad) {
  if (samples.empty()) throw EmptySampleError("estimator: no replicates");
  const std::size_t k = samples.front().size();
  std::vector<double> r(samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j) {
    if (samples[j].size() != k)
      throw ShapeMismatchError("estimator: replicates must share one k");
    r[j] = finite_r(model, samples[j], theta, quad);
  }
  return r;
}

FkEstimate fk_from_rows(double theta, std::span<const double> r,
                        std::size_t k) {
  const std::size_t m = r.size();
  if (m < 2) throw DomainError("fk_hat: requires m >= 2 replicates");
  const double mu = mean_of(r);
  double ss = 0.0;
  for (double rj : r) ss += (rj - mu) * (rj - mu);
  const double sd = std::sqrt(ss / static_cast<double>(m - 1));
  return {theta, std::exp(mu), mu, sd, m, k};
}

RatioEstimate ratio_from_rows(double theta, double theta0,
                              std::span<const double> r_num,
                              std::span<const double> r_den, std::size_t k,
                              bool crn) {
  if (r_num.size() != r_den.size())
    throw ShapeMismatchError(
        "f_hat: numerator and denominator row counts must match");
  const std::size_t m = r_num.size();
  if (m < 2) throw DomainError("f_hat: requires m >= 2 replicates");
  const double mu1 = mean_of(r_num);
  const double mu2 = mean_of(r_den);
  double s11 = 0.0, s22 = 0.0, s12 = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double d1 = r_num[j] - mu1;
    const double d2 = r_den[j] - mu2;
    s11 += d1 * d1;
    s22 += d2 * d2;
    s12 += d1 * d2;
  }
  const double denom = static_cast<double>(m - 1);
  return {theta,       theta0,      std::exp(mu1 - mu2), mu1, mu2,
          s11 / denom, s22 / denom, s12 / denom,         m,   k,
          crn};
}

Sample crn_sample(const Model& model, const Sample& x, double theta,
                  double theta0) {
  std::vector<double> values(x.values().begin(), x.values().end());
  for (double& v : values) v = model.crn_transform(v, theta, theta0);
  return Sample(std::move(values));
}

FkEstimate fk_hat(const Model& model, double theta,
                  std::span<const Sample> samples,
                  const QuadratureSettings& quad) {
  const std::vector<double> r = r_rows(model, theta, samples, quad);
  return fk_from_rows(theta, r, samples.front().size());
}

FkEstimate fk_hat(const Model& model, double theta, const UniformMatrix& u,
                  const QuadratureSettings& quad) {
  const std::vector<Sample> samples = sample_matrix(model, u, theta);
  return fk_hat(model, theta, samples, quad);
}

FkEstimate fk_hat(const Model& model, double theta, const StreamKey& key,
                  std::size_t m, std::size_t k,
                  const QuadratureSettings& quad) {
  if (m < 2) throw DomainError("fk_hat: requires m >= 2 replicates");
  std::vector<double> r(m);
  for (std::size_t j = 0; j < m; ++j)
    r[j] = finite_r(model, sample_row(model, key, j, k, theta), theta, quad);
  return fk_from_rows(theta, r, k);
}

RatioEstimate f_hat(const Model& model, double theta, double theta0,
                    std::span<const Sample> num, std::span<const Sample> den,
                    const QuadratureSettings& quad, bool crn) {
  const std::vector<double> rn = r_rows(model, theta, num, quad);
  const std::vector<double> rd = r_rows(model, theta0, den, quad);
  if (num.front().size() != den.front().size())
    throw ShapeMismatchError("f_hat: numerator and denominator k must match");
  return ratio_from_rows(theta, theta0, rn, rd, num.front().size(), crn);
}

RatioEstimate f_hat(const Model& model, double theta, double theta0,
                    const UniformMatrix& u_num, const UniformMatrix& u_den,
                    const QuadratureSettings& quad) {
  if (u_num.rows() != u_den.rows() || u_num.cols() != u_den.cols())
    throw ShapeMismatchError("f_hat: uniform matrices must share a shape");
  if (u_num.key() == u_den.key())
    return fnac_hat(model, theta, theta0, u_num, quad);
  const std::vector<Sample> num = sample_matrix(model, u_num, theta);
  const std::vector<Sample> den = sample_matrix(model, u_den, theta0);
  return f_hat(model, theta, theta0, num, den, quad, false);
}

RatioEstimate f_hat(const Model& model, double theta, double theta0,
                    const StreamKey& key_num, const StreamKey& key_den,
                    std::size_t m, std::size_t k,
                    const QuadratureSettings& quad) {
  if (key_num == key_den)
    return fnac_hat(model, theta, theta0, key_num, m, k, quad);
  if (m < 2) throw DomainError("f_hat: requires m >= 2 replicates");
  std::vector<double> rn(m), rd(m);
  for (std::size_t j = 0; j < m; ++j) {
    rn[j] =
        finite_r(model, sample_row(model, key_num, j, k, theta), theta, quad);
    rd[j] = finite_r(model, sample_row(model, key_den, j, k, theta0), theta0,
                     quad);
  }
  return ratio_from_rows(theta, theta0, rn, rd, k, false);
}

RatioEstimate fnac_hat(const Model& model, double theta, double theta0,
                       const UniformMatrix& u, const QuadratureSettings& quad) {
  const std::vector<Sample> num = sample_matrix(model, u, theta);
  std::vector<Sample> den;
  den.reserve(num.size());
  for (const Sample& x : num)
    den.push_back(crn_sample(model, x, theta, theta0));
  return f_hat(model, theta, theta0, num, den, quad, true);
}

RatioEstimate fnac_hat(const Model& model, double theta, double theta0,
                       const StreamKey& key, std::size_t m, std::size_t k,
                       const QuadratureSettings& quad) {
  if (m < 2) throw DomainError("fnac_hat: requires m >= 2 replicates");
  std::vector<double> rn(m), rd(m);
  for (std::size_t j = 0; j < m; ++j) {
    const Sample x = sample_row(model, key, j, k, theta);
    rn[j] = finite_r(model, x, theta, quad);
    rd[j] =
        finite_r(model, crn_sample(model, x, theta, theta0), theta0, quad);
  }
  return ratio_from_rows(theta, theta0, rn, rd, k, true);
}

double fnac_exp_closed_form(double theta, double theta0) {
  if (!(theta > 0.0) || !(theta0 > 0.0))
    throw DomainError("fnac_exp_closed_form: requires positive rates");
  return theta0 / theta;
}

Interval half_width_fk(const FkEstimate& est, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("half_width_fk: requires alpha in (0,1)");
  const double z = normal_quantile(1.0 - alpha / 2.0);
  const double hw = z * std::exp(est.mu1_hat) * est.sigma1_hat /
                    std::sqrt(static_cast<double>(est.m));
  return {est.value, hw, est.value - hw, est.value + hw, alpha};
}

Interval half_width_f(const RatioEstimate& est, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("half_width_f: requires alpha in (0,1)");
  double comb = est.sigma1_sq + est.sigma2_sq - 2.0 * est.sigma12;
  if (comb < -1e-12)
    throw InternalError(
        "half_width_f: combined variance is negative beyond rounding "
        "tolerance");
  if (comb < 0.0) comb = 0.0;
  const double z = normal_quantile(1.0 - alpha / 2.0);
  const double hw = z * std::exp(est.mu1_hat - est.mu2_hat) * std::sqrt(comb) /
                    std::sqrt(static_cast<double>(est.m));
  return {est.value, hw, est.value - hw, est.value + hw, alpha};
}

EarpFit fit_constant_earp(std::span<const double> ratios) {
  const std::size_t R = ratios.size();
  if (R == 0) throw DomainError("fit_constant_earp: no ratios");
  for (double rho : ratios)
    if (!(rho > 0.0) || !std::isfinite(rho))
      throw DomainError("fit_constant_earp: ratios must be positive finite");

  std::vector<double> sorted(ratios.begin(), ratios.end());
  std::sort(sorted.begin(), sorted.end());
  // prefix[s] = sum of the s smallest ratios.
  std::vector<double> prefix(R + 1, 0.0);
  for (std::size_t i = 0; i < R; ++i) prefix[i + 1] = prefix[i] + sorted[i];
  const double total = prefix[R];
  const double Rd = static_cast<double>(R);

  EarpFit best;
  bool have = false;
  for (std::size_t s = 0; s <= R; ++s) {
    double a, e;
    if (s == 0) {
      a = sorted.front();
      e = total / (a * Rd) - 1.0;
    } else if (s == R) {
      a = sorted.back();
      e = 1.0 - total / (a * Rd);
    } else {
      a = sorted[s];  // the (s+1)-th order statistic
      e = 2.0 * static_cast<double>(s) / Rd - 1.0 +
          (total - 2.0 * prefix[s]) / (a * Rd);
    }
    if (!have || e < best.earp_min) {
      best.a_hat = a;
      best.s_hat = s;
      best.earp_min = e;
      have = true;
    }
  }
  best.ratios_sorted = std::move(sorted);
  return best;
}

EarpFit fit_constant_earp(
    std::span<const std::pair<double, double>> theta_estimates,
    const std::function<double(double)>& reference) {
  std::vector<double> ratios;
  ratios.reserve(theta_estimates.size());
  for (const auto& [theta, est] : theta_estimates) {
    const double f = reference(theta);
    if (!(f > 0.0) || !std::isfinite(f))
      throw DomainError("fit_constant_earp: reference must be positive");
    ratios.push_back(est / f);
  }
  return fit_constant_earp(ratios);
}

}  // namespace refprior
