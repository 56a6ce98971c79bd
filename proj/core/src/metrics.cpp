#include "refprior/metrics.hpp"

#include <cmath>

#include "refprior/errors.hpp"

namespace refprior {

namespace {

void check_grid(const GridEvaluation& grid) {
  if (grid.entries.empty()) throw DomainError("metrics: empty grid");
  for (const GridEntry& e : grid.entries) {
    if (!std::isfinite(e.estimate) || !std::isfinite(e.half_width) ||
        !std::isfinite(e.scaled_ref))
      throw DomainError("metrics: grid entries must be finite");
    if (!(e.scaled_ref > 0.0))
      throw DomainError("metrics: scaled reference must be positive");
  }
}

}  // namespace

double earp(const GridEvaluation& grid) {
  check_grid(grid);
  double acc = 0.0;
  for (const GridEntry& e : grid.entries)
    acc += std::abs(e.scaled_ref - e.estimate) / e.scaled_ref;
  return acc / static_cast<double>(grid.entries.size());
}

double amrp(const GridEvaluation& grid) {
  check_grid(grid);
  double acc = 0.0;
  for (const GridEntry& e : grid.entries) acc += e.half_width / e.scaled_ref;
  return acc / static_cast<double>(grid.entries.size());
}

double coverage(const GridEvaluation& grid) {
  check_grid(grid);
  std::size_t inside = 0;
  for (const GridEntry& e : grid.entries)
    if (e.estimate - e.half_width < e.scaled_ref &&
        e.scaled_ref < e.estimate + e.half_width)
      ++inside;
  return static_cast<double>(inside) /
         static_cast<double>(grid.entries.size());
}

}  // namespace refprior
