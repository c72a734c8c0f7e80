#ifndef CROWDRANK_LINEAR_MODEL_HPP
#define CROWDRANK_LINEAR_MODEL_HPP

#include <cstdint>
#include <optional>

#include "crowdrank/dataset.hpp"
#include "crowdrank/types.hpp"

namespace crowdrank {

struct LinearFitConfig {
  /// Penalty on the worker bias terms; unset selects the value by 5-fold
  /// cross-validation over a logarithmic grid.
  std::optional<double> l1_penalty;
  int max_passes = 200;
  double tol = 1e-8;
  std::uint64_t seed = 0;
};

struct LinearFitReport {
  int passes = 0;
  bool converged = false;
  double objective = 0.0;     // squared error + penalty term
  double penalty_used = 0.0;
  double final_delta = 0.0;   // max coordinate change in the last pass
  int components = 1;
};

/// Position-bias baseline. Each comparison in left/right presentation gives
/// an observation Y (+1 left won, -1 right won) modeled as
///     Y = s_left - s_right + gamma_worker + noise
/// and the fit minimizes
///     sum (Y - (s_i - s_j + gamma_k))^2 + l1_penalty * sum_k |gamma_k|
/// under the per-component gauge sum(s) = 0, by cyclic coordinate descent
/// with soft-thresholding on the gamma updates.
ModelParams linear_fit(const Dataset& dataset,
                       const LinearFitConfig& config = {},
                       LinearFitReport* report = nullptr);

/// sign(z) * max(|z| - t, 0); the shrinkage step of the gamma update.
inline double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

}  // namespace crowdrank

#endif  // CROWDRANK_LINEAR_MODEL_HPP
