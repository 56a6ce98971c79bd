#ifndef REFPRIOR_ESTIMATORS_HPP
#define REFPRIOR_ESTIMATORS_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "refprior/model.hpp"
#include "refprior/sampling.hpp"

namespace refprior {

// Unnormalized fixed-k estimate f_k(theta) = exp(mean_j r_j(theta)).
struct FkEstimate {
  double theta = 0.0;
  double value = 0.0;     // exp(mu1_hat)
  double mu1_hat = 0.0;   // mean of r_j(theta)
  double sigma1_hat = 0.0;  // sd of r_j(theta), divisor m-1
  std::size_t m = 0;
  std::size_t k = 0;
};

// Ratio estimate f(theta) = exp(mu1_hat - mu2_hat) against the anchor
// theta0, with the paired second moments needed for its delta-method
// interval. crn records whether numerator and denominator shared the same
// uniform stream.
struct RatioEstimate {
  double theta = 0.0;
  double theta0 = 0.0;
  double value = 0.0;
  double mu1_hat = 0.0;
  double mu2_hat = 0.0;
  double sigma1_sq = 0.0;
  double sigma2_sq = 0.0;
  double sigma12 = 0.0;  // sample covariance of paired r_j rows
  std::size_t m = 0;
  std::size_t k = 0;
  bool crn = false;
};

struct Interval {
  double center = 0.0;
  double half_width = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double alpha = 0.0;
};

// Result of fitting the proportionality constant that minimizes the mean
// absolute relative error of estimates against a reference shape.
// a_hat equals ratios_sorted[s_hat] for 1 <= s_hat <= R-1 (0-indexed),
// ratios_sorted.front() for s_hat == 0 and ratios_sorted.back() for
// s_hat == R.
struct EarpFit {
  double a_hat = 0.0;
  std::size_t s_hat = 0;
  double earp_min = 0.0;
  std::vector<double> ratios_sorted;
};

// Log-ratio rows r_j(theta) for pre-drawn replicates: the building block all
// estimators reduce. An r_j of -infinity means a sample violates its own
// support constraints and raises InternalError; NaN raises NaNError.
std::vector<double> r_rows(const Model& model, double theta,
                           std::span<const Sample> samples,
                           const QuadratureSettings& quad = {});

// Reductions from precomputed rows, bitwise identical to the fk_hat / f_hat
// overloads that draw the same rows. Require m >= 2.
FkEstimate fk_from_rows(double theta, std::span<const double> r,
                        std::size_t k);
RatioEstimate ratio_from_rows(double theta, double theta0,
                              std::span<const double> r_num,
                              std::span<const double> r_den, std::size_t k,
                              bool crn);

// Entrywise crn_transform of one replicate from theta to theta0.
Sample crn_sample(const Model& model, const Sample& x, double theta,
                  double theta0);

// f_k estimate from m pre-drawn replicates of size k (all drawn at theta).
// Requires m >= 2.
FkEstimate fk_hat(const Model& model, double theta,
                  std::span<const Sample> samples,
                  const QuadratureSettings& quad = {});

// Same, drawing the replicates from a uniform matrix.
FkEstimate fk_hat(const Model& model, double theta, const UniformMatrix& u,
                  const QuadratureSettings& quad = {});

// Streaming form: rows of the m x k matrix at key are generated one at a
// time (identical values to the matrix overload, O(k) memory).
FkEstimate fk_hat(const Model& model, double theta, const StreamKey& key,
                  std::size_t m, std::size_t k,
                  const QuadratureSettings& quad = {});

// Ratio estimate from pre-drawn numerator samples (at theta) and
// denominator samples (at theta0). Rows must be paired: same m and k.
RatioEstimate f_hat(const Model& model, double theta, double theta0,
                    std::span<const Sample> num, std::span<const Sample> den,
                    const QuadratureSettings& quad = {}, bool crn = false);

// Ratio estimate drawing both sides from uniform matrices. Passing the same
// key for both sides selects the common-random-number path: the denominator
// replicates are then materialized by crn_transform of the numerator draws
// (identical to fnac_hat). Independent streams must use distinct keys.
RatioEstimate f_hat(const Model& model, double theta, double theta0,
                    const UniformMatrix& u_num, const UniformMatrix& u_den,
                    const QuadratureSettings& quad = {});

// Streaming independent-stream form.
RatioEstimate f_hat(const Model& model, double theta, double theta0,
                    const StreamKey& key_num, const StreamKey& key_den,
                    std::size_t m, std::size_t k,
                    const QuadratureSettings& quad = {});

// Common-random-number estimator: numerator drawn at theta from u, the
// denominator is the entrywise crn_transform of those same draws.
RatioEstimate fnac_hat(const Model& model, double theta, double theta0,
                       const UniformMatrix& u,
                       const QuadratureSettings& quad = {});

// Streaming form of fnac_hat.
RatioEstimate fnac_hat(const Model& model, double theta, double theta0,
                       const StreamKey& key, std::size_t m, std::size_t k,
                       const QuadratureSettings& quad = {});

// For ExpRate the common-random-number ratio collapses analytically to
// theta0/theta, independent of the draws.
double fnac_exp_closed_form(double theta, double theta0);

// Delta-method half-width for f_k: z_{1-alpha/2} m^{-1/2} exp(mu1) sigma1.
Interval half_width_fk(const FkEstimate& est, double alpha);

// Delta-method half-width for the ratio estimators:
// z_{1-alpha/2} m^{-1/2} exp(mu1-mu2) sqrt(sigma1_sq + sigma2_sq - 2 sigma12).
// A combined variance in [-1e-12, 0) is rounding and clamps to 0; anything
// more negative raises InternalError.
Interval half_width_f(const RatioEstimate& est, double alpha);

// Chooses the constant a minimizing mean_l |a f_l - est_l| / (a f_l) over
// the sorted ratios est_l / f_l. The minimizer is one of the order
// statistics; all R+1 split candidates are evaluated through the piecewise
// closed form and ties resolve to the smallest split index.
EarpFit fit_constant_earp(std::span<const double> ratios);

// Same, with ratios formed as est_l / reference(theta_l).
EarpFit fit_constant_earp(
    std::span<const std::pair<double, double>> theta_estimates,
    const std::function<double(double)>& reference);

}  // namespace refprior

#endif
