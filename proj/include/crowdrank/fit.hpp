#ifndef CROWDRANK_FIT_HPP
#define CROWDRANK_FIT_HPP

#include "crowdrank/dataset.hpp"
#include "crowdrank/optimizer.hpp"
#include "crowdrank/types.hpp"

namespace crowdrank {

struct FitResult {
  ModelParams params;
  OptimizerReport report;
};

/// Fits any model kind. BT/CrowdBT/FactorBT go through the conjugate
/// gradient maximizer; PairwiseHITS and Linear use their own iterations and
/// synthesize an OptimizerReport (iterations = rounds/passes, gradient norm
/// = last max parameter change).
FitResult fit_model(const Dataset& dataset, ModelKind kind,
                    const FitConfig& config = {});

/// CG path only (BT, CrowdBT, FactorBT). `initial` overrides the standard
/// initialization; combined with config.fit_worker_params=false it fits
/// scores with the worker parameters frozen at the given values.
FitResult fit_likelihood_model(const Dataset& dataset, ModelKind kind,
                               const FitConfig& config,
                               const ModelParams* initial = nullptr);

}  // namespace crowdrank

#endif  // CROWDRANK_FIT_HPP
