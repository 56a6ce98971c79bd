#ifndef REFPRIOR_METRICS_HPP
#define REFPRIOR_METRICS_HPP

#include <vector>

namespace refprior {

// One scored grid point: an estimate with its interval half-width and the
// scaled reference value a_hat * f(theta) it is judged against.
struct GridEntry {
  double theta = 0.0;
  double estimate = 0.0;
  double half_width = 0.0;
  double scaled_ref = 0.0;
};

struct GridEvaluation {
  std::vector<GridEntry> entries;
};

// Mean absolute relative error: mean_l |scaled_ref - estimate| / scaled_ref.
double earp(const GridEvaluation& grid);

// Mean relative half-width: mean_l half_width / scaled_ref.
double amrp(const GridEvaluation& grid);

// Fraction of entries whose open interval (estimate - half_width,
// estimate + half_width) strictly contains scaled_ref.
double coverage(const GridEvaluation& grid);

}  // namespace refprior

#endif
