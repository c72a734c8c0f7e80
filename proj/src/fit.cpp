#include "crowdrank/fit.hpp"

#include <cmath>
#include <limits>

#include "crowdrank/errors.hpp"
#include "crowdrank/hits.hpp"
#include "crowdrank/init.hpp"
#include "crowdrank/linear_model.hpp"
#include "crowdrank/models.hpp"

namespace crowdrank {

FitResult fit_likelihood_model(const Dataset& dataset, ModelKind kind,
                               const FitConfig& config,
                               const ModelParams* initial) {
  const ModelParams start =
      initial ? *initial : init_default(kind, dataset, config);
  const bool include_virtual = config.regularization_lambda > 0.0;
  const bool include_workers = config.fit_worker_params;

  const ObjectiveFn fn = [&](const Eigen::VectorXd& theta,
                             Eigen::VectorXd* grad) {
    const ModelParams p =
        unpack(theta, start, kind, include_virtual, include_workers);
    try {
      const double value = log_likelihood(dataset, p, kind, config);
      if (grad) {
        const ModelParams g = gradient(dataset, p, kind, config);
        *grad = pack_gradient(g, p, kind, include_virtual, include_workers);
      }
      return value;
    } catch (const NonFiniteLikelihood&) {
      // A wild line-search trial underflowed; report -inf so the step is
      // rejected. Accepted points always have finite objectives.
      if (grad) *grad = Eigen::VectorXd::Zero(theta.size());
      return -std::numeric_limits<double>::infinity();
    }
  };

  const PreconditionerFn precondition = [&](const Eigen::VectorXd& theta) {
    const ModelParams p =
        unpack(theta, start, kind, include_virtual, include_workers);
    ModelParams diag = fisher_diagonal(dataset, p, kind, config);
    // pack_gradient applies one eta chain factor; adding it here once more
    // yields the curvature in the unconstrained u = logit(eta) coordinates.
    for (std::size_t w = 0; w < diag.worker_eta.size(); ++w)
      diag.worker_eta[w] *= p.worker_eta[w] * (1.0 - p.worker_eta[w]);
    return pack_gradient(diag, p, kind, include_virtual, include_workers);
  };

  auto [theta, report] =
      maximize(fn, pack(start, kind, include_virtual, include_workers),
               config, precondition);
  return {unpack(theta, start, kind, include_virtual, include_workers),
          report};
}

FitResult fit_model(const Dataset& dataset, ModelKind kind,
                    const FitConfig& config) {
  switch (kind) {
    case ModelKind::BT:
    case ModelKind::CrowdBT:
    case ModelKind::FactorBT:
      return fit_likelihood_model(dataset, kind, config);
    case ModelKind::PairwiseHITS: {
      HitsReport hrep;
      ModelParams params = hits_fit(dataset, 100, 1e-6, &hrep);
      OptimizerReport rep;
      rep.iterations_used = hrep.rounds;
      rep.converged = hrep.converged;
      rep.final_gradient_norm = hrep.final_delta;
      rep.final_objective = std::numeric_limits<double>::quiet_NaN();
      return {std::move(params), rep};
    }
    case ModelKind::Linear: {
      LinearFitConfig lcfg;
      lcfg.l1_penalty = config.l1_penalty;
      lcfg.seed = config.seed;
      LinearFitReport lrep;
      ModelParams params = linear_fit(dataset, lcfg, &lrep);
      OptimizerReport rep;
      rep.iterations_used = lrep.passes;
      rep.converged = lrep.converged;
      rep.final_gradient_norm = lrep.final_delta;
      rep.final_objective = lrep.objective;
      return {std::move(params), rep};
    }
  }
  throw Error("InvalidModel", "unhandled model kind");
}

}  // namespace crowdrank
