// Worked-example data shared by the unit and acceptance suites.
//
// The replicate blocks, their marginal constants, the fit inputs, and the
// interval/metric fixtures are the library's published worked example for
// Uniform(0, theta); the same numbers ship as fixtures/unif0theta_*.txt.

#ifndef REFPRIOR_TESTS_GOLDEN_HPP
#define REFPRIOR_TESTS_GOLDEN_HPP

#include <array>
#include <vector>

#include "refprior/model.hpp"

namespace golden {

// Five replicates of size 5 drawn at theta = 5.
inline const std::vector<refprior::Sample>& unif_scale_replicates() {
  static const std::vector<refprior::Sample> samples = {
      refprior::Sample({2.643036, 2.525562, 0.960058, 4.832099, 4.272201}),
      refprior::Sample({2.174483, 2.483448, 1.491607, 4.914156, 0.174570}),
      refprior::Sample({1.941754, 1.177051, 1.256304, 4.244871, 2.803651}),
      refprior::Sample({0.451879, 2.500297, 4.722214, 4.968808, 2.783378}),
      refprior::Sample({3.850290, 1.067490, 3.773885, 1.241600, 1.111622}),
  };
  return samples;
}

// Five replicates of size 5 drawn at the anchor theta0 = 1.
inline const std::vector<refprior::Sample>& unif_anchor_replicates() {
  static const std::vector<refprior::Sample> samples = {
      refprior::Sample({0.302285, 0.423168, 0.138452, 0.616580, 0.575441}),
      refprior::Sample({0.307996, 0.862337, 0.886713, 0.442853, 0.799809}),
      refprior::Sample({0.011259, 0.539374, 0.939005, 0.709738, 0.193020}),
      refprior::Sample({0.947076, 0.498836, 0.251442, 0.152291, 0.045622}),
      refprior::Sample({0.364147, 0.260889, 0.536815, 0.514442, 0.604568}),
  };
  return samples;
}

// Published marginal constants and log ratios at theta = 5 for the scale
// replicates (six decimal places).
inline constexpr std::array<double, 5> kScaleMarginals = {
    0.000459, 0.000429, 0.000770, 0.000410, 0.001138};
inline constexpr std::array<double, 5> kScaleLogRatios = {
    -0.359772, -0.292415, -0.878049, -0.248175, -1.268302};

// Published estimates from the worked example (four decimal places).
inline constexpr double kFk5 = 0.5437;   // fk at theta = 5
inline constexpr double kFk1 = 1.5020;   // fk at the anchor
inline constexpr double kF5 = 0.3619;    // ratio estimate at theta = 5

// Constant-fit inputs: fk and ratio estimates at {2,5,8,11,14,17} divided by
// the 1/theta reference, with the published fits.
inline constexpr std::array<double, 6> kFitRatiosFk = {
    19.883, 20.233, 15.260, 15.366, 20.365, 18.622};
inline constexpr std::array<double, 6> kFitRatiosF = {
    1.126, 0.991, 0.784, 0.683, 1.153, 0.943};
inline constexpr double kAHat = 19.883;
inline constexpr std::size_t kAHatSplit = 3;
inline constexpr double kAHatEarp = 0.094;  // published to three decimals
inline constexpr double kBHat = 0.991;
inline constexpr std::size_t kBHatSplit = 3;
inline constexpr double kBHatEarp = 0.145;

// Metric fixtures over the same theta grid: published point estimates, the
// interval data for the coverage example, and relative half-widths.
inline constexpr std::array<double, 6> kMetricThetas = {2, 5, 8, 11, 14, 17};
inline constexpr std::array<double, 6> kMetricFkEstimates = {
    9.941, 4.047, 1.907, 1.397, 1.455, 1.095};
inline constexpr std::array<double, 6> kMetricFEstimates = {
    0.563, 0.198, 0.098, 0.062, 0.082, 0.055};

// Scaled-down intervals (estimates already divided by the fitted constant)
// whose open intervals miss 1/theta at theta = 2 and theta = 11.
inline constexpr std::array<double, 6> kCoverageEstimates = {
    0.103, 0.229, 0.115, 0.036, 0.043, 0.040};
inline constexpr std::array<double, 6> kCoverageHalfWidths = {
    0.133, 0.049, 0.042, 0.047, 0.030, 0.032};
inline constexpr double kCoverage = 4.0 / 6.0;

// Published relative half-widths (half_width / scaled reference) per theta.
inline constexpr std::array<double, 6> kRelWidthsFk = {
    0.187, 0.197, 0.184, 0.244, 0.216, 0.282};
inline constexpr std::array<double, 6> kRelWidthsF = {
    0.249, 0.252, 0.272, 0.248, 0.305, 0.359};
inline constexpr double kAmrpFk = 0.218;
inline constexpr double kAmrpF = 0.281;

}  // namespace golden

#endif
