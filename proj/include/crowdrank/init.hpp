#ifndef CROWDRANK_INIT_HPP
#define CROWDRANK_INIT_HPP

#include "crowdrank/dataset.hpp"
#include "crowdrank/types.hpp"

namespace crowdrank {

/// FactorBT starting point:
///   - every item score and the virtual score start at 0;
///   - gamma_k = logistic(-1) for workers whose answers all fall on the same
///     presentation side, logistic(+1) otherwise;
///   - r_kl = log(a_kl) with the smoothed choice statistic
///       a_kl = (#{k's comparisons with winner-oriented feature l = +1} + 1)
///            / (#{k's comparisons with feature l = +-1} + 2).
/// Workers with no feature-l-active tasks get a_kl = 1/2. Deterministic.
ModelParams init_factorbt(const Dataset& dataset);

/// Neutral defaults: BT scores 0; CrowdBT scores 0 and eta_k from
/// config.crowdbt_eta_init; PairwiseHITS abilities 1; Linear all zeros.
ModelParams init_default(ModelKind kind, const Dataset& dataset,
                         const FitConfig& config = {});

}  // namespace crowdrank

#endif  // CROWDRANK_INIT_HPP
