#ifndef CROWDRANK_OPTIMIZER_HPP
#define CROWDRANK_OPTIMIZER_HPP

#include <Eigen/Core>
#include <functional>
#include <utility>
#include <vector>

#include "crowdrank/types.hpp"

namespace crowdrank {

struct OptimizerReport {
  int iterations_used = 0;
  double final_objective = 0.0;
  double final_gradient_norm = 0.0;  // infinity norm
  bool converged = false;
  /// Objective value at the start point and after each accepted iteration.
  std::vector<double> objective_trace;
};

/// Evaluates the objective at `x`; when `grad` is non-null it must be filled
/// with the gradient. Line-search probes pass nullptr.
using ObjectiveFn =
    std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

/// Optional diagonal curvature estimate at `x` (entries >= 0); used to
/// precondition the conjugate directions once plain iterations stop paying.
using PreconditionerFn =
    std::function<Eigen::VectorXd(const Eigen::VectorXd& x)>;

/// Maximizes `fn` by nonlinear conjugate gradient ascent (Polak-Ribiere with
/// restart whenever the PR coefficient turns negative) with a backtracking
/// line search enforcing the sufficient-increase (Armijo) condition, slope
/// factor 1e-4 and contraction factor 0.5. Stops when the gradient infinity
/// norm drops to config.gradient_tolerance or after config.max_iterations.
///
/// Likelihood surfaces with runaway worker parameters develop nearly flat
/// coordinates that stall plain conjugate gradient; when `preconditioner`
/// is given, iterations beyond the 150th use it as a diagonal metric
/// (refreshed every 50 iterations, direction restarted on refresh).
///
/// Throws LineSearchFailure if no step within 50 backtracks satisfies the
/// sufficient-increase condition.
std::pair<Eigen::VectorXd, OptimizerReport> maximize(
    const ObjectiveFn& fn, Eigen::VectorXd x0, const FitConfig& config,
    const PreconditionerFn& preconditioner = nullptr);

/// Flat parameter layout used by the likelihood fits:
///   [s_1..s_N, s_0 (only when lambda > 0), then per-worker blocks]
/// with per-worker blocks of
///   CrowdBT:  u_k where eta_k = logistic(u_k)
///   FactorBT: gamma_k, r_k1..r_kM
/// BT has no worker block. `include_worker_params=false` drops the worker
/// blocks (used for fits with frozen worker parameters).
int packed_size(ModelKind kind, int n_items, int n_workers, int feature_dim,
                bool include_virtual, bool include_worker_params = true);

Eigen::VectorXd pack(const ModelParams& params, ModelKind kind,
                     bool include_virtual, bool include_worker_params = true);

/// Inverse of pack; fields not present in the flat vector are copied from
/// `prototype`.
ModelParams unpack(const Eigen::VectorXd& theta, const ModelParams& prototype,
                   ModelKind kind, bool include_virtual,
                   bool include_worker_params = true);

/// Maps a ModelParams-shaped gradient into the flat layout, applying the
/// chain rule for the eta reparameterization at the point `at`.
Eigen::VectorXd pack_gradient(const ModelParams& grad, const ModelParams& at,
                              ModelKind kind, bool include_virtual,
                              bool include_worker_params = true);

}  // namespace crowdrank

#endif  // CROWDRANK_OPTIMIZER_HPP
