#ifndef REFPRIOR_MODEL_HPP
#define REFPRIOR_MODEL_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "refprior/quadrature.hpp"

namespace refprior {

// The four parametric families handled by the estimators.
//   ExpRate           p(y|theta) = theta exp(-theta y),         y > 0, theta > 0
//   Unif0Theta        p(y|theta) = 1/theta,                     0 < y < theta
//   UnifThetaThetaSq  p(y|theta) = 1/(theta(theta-1)),          theta < y < theta^2, theta > 1
//   Triangular01      p(y|theta) = 2y/theta on (0, theta],
//                                  2(1-y)/(1-theta) on (theta, 1), 0 < theta < 1
enum class ModelId { ExpRate, Unif0Theta, UnifThetaThetaSq, Triangular01 };

// Open interval of admissible theta; hi may be +infinity.
struct ThetaDomain {
  double lo;
  double hi;
  bool contains(double theta) const { return theta > lo && theta < hi; }
};

// One observed replicate x_j = (y_1, ..., y_k). Order statistics and the sum
// are cached at construction. Values must be finite.
class Sample {
 public:
  explicit Sample(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  // Ascending order statistics t_(1) <= ... <= t_(k).
  std::span<const double> order_stats() const { return sorted_; }
  double min() const { return sorted_.front(); }
  double max() const { return sorted_.back(); }
  double sum() const { return sum_; }

 private:
  std::vector<double> values_;
  std::vector<double> sorted_;
  double sum_ = 0.0;
};

// Reference density known in closed form, up to a constant factor. For
// Triangular01 the closed form is a conjecture and is flagged as such.
struct KnownPrior {
  ModelId model;
  bool conjecture = false;
  // Unnormalized density at theta; throws DomainError outside the domain.
  double operator()(double theta) const;
};

class Model {
 public:
  explicit Model(ModelId id) : id_(id) {}

  ModelId id() const { return id_; }
  std::string_view name() const;
  ThetaDomain theta_domain() const;
  // Conventional anchor point used when a configuration does not set one.
  double default_theta0() const;
  // Open support interval of p(.|theta).
  std::pair<double, double> support(double theta) const;

  // log p(y|theta); -infinity outside the support (a sentinel, not an error).
  double log_density(double y, double theta) const;
  double cdf(double y, double theta) const;
  // Inverse CDF for u in the open interval (0,1).
  double inverse_cdf(double u, double theta) const;

  // Maps a draw y ~ p(.|theta) to the draw at theta0 produced by the same
  // underlying uniform, in closed form per model. Equal parameters return y
  // unchanged so common-random-number streams are bitwise identical there.
  double crn_transform(double y, double theta, double theta0) const;

  // log p(x|theta) from sufficient statistics; -infinity when theta is
  // incompatible with the sample's support constraints.
  double log_joint(const Sample& x, double theta) const;

  // log c_j = log integral of p(x|theta) d theta over the whole domain.
  // Closed form for ExpRate and Unif0Theta; adaptive quadrature for
  // UnifThetaThetaSq; an order-statistic segment sum (closed boundary
  // segments, quadrature inside) for Triangular01, accumulated in log scale.
  // Requires k >= 2 for Unif0Theta and Triangular01, whose boundary closed
  // forms divide by k-1.
  double log_marginal_c(const Sample& x,
                        const QuadratureSettings& quad = {}) const;

  // r_j(theta) = log p(x|theta) - log c_j; -infinity propagates from the
  // joint when theta violates the sample's support constraints.
  double r_statistic(const Sample& x, double theta,
                     const QuadratureSettings& quad = {}) const;

  std::optional<KnownPrior> known_prior() const;

 private:
  ModelId id_;
};

std::string_view model_name(ModelId id);
std::optional<ModelId> model_from_name(std::string_view name);

}  // namespace refprior

#endif
