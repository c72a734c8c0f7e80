#ifndef CROWDRANK_HITS_HPP
#define CROWDRANK_HITS_HPP

#include "crowdrank/dataset.hpp"
#include "crowdrank/types.hpp"

namespace crowdrank {

struct HitsReport {
  int rounds = 0;
  bool converged = false;
  int components = 1;       // connected components of the co-occurrence graph
  double final_delta = 0.0;  // max |score change| in the last round
};

/// Alternating estimation of item scores and worker abilities.
///
/// Each round first solves, in the least-squares sense, the stacked score
/// relations over all co-occurring item pairs (j, j')
///     s_j - s_j' = sum_{comparisons j beats j'} r_k
///                - sum_{comparisons j' beats j} r_k
/// (each comparison occurrence counted) with the gauge sum(s) = 0, then
/// updates every ability to the fraction of that worker's comparisons that
/// agree with the current scores (score ties count as incorrect). Abilities
/// start at 1. Stops when max |score change| < tol or after max_rounds.
///
/// A disconnected co-occurrence graph makes scores identifiable only per
/// component; the fit then applies the zero-mean gauge per component and
/// signals the condition through HitsReport::components.
ModelParams hits_fit(const Dataset& dataset, int max_rounds = 100,
                     double tol = 1e-6, HitsReport* report = nullptr);

}  // namespace crowdrank

#endif  // CROWDRANK_HITS_HPP
