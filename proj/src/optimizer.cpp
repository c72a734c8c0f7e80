#include "crowdrank/optimizer.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "crowdrank/errors.hpp"
#include "crowdrank/models.hpp"

namespace crowdrank {

namespace {

constexpr double kArmijoSlope = 1e-4;
constexpr double kContraction = 0.5;
constexpr int kMaxBacktracks = 50;

double logit(double p) {
  const double eps = 1e-12;
  if (p < eps) p = eps;
  if (p > 1.0 - eps) p = 1.0 - eps;
  return std::log(p) - std::log1p(-p);
}

struct LineSearchResult {
  double alpha;
  double value;
};

// Backtracking search for the sufficient-increase condition
//   phi(a) >= phi(0) + kArmijoSlope * a * dphi0,
// halving the step on rejection. An accepted step is then refined by
// repeated maximization of the parabola through (0, phi0) with slope dphi0
// and the best point so far; on quadratic objectives the first refinement
// lands on the exact line maximizer, which keeps conjugacy intact.
LineSearchResult line_search(const ObjectiveFn& fn, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& d, double phi0,
                             double dphi0, double alpha0, int iteration) {
  Eigen::VectorXd trial(x.size());
  const auto phi = [&](double a) {
    trial = x + a * d;
    return fn(trial, nullptr);
  };
  const auto sufficient = [&](double a, double value) {
    return std::isfinite(value) && value >= phi0 + kArmijoSlope * a * dphi0;
  };

  double alpha = alpha0;
  for (int bt = 0; bt <= kMaxBacktracks; ++bt) {
    const double value = phi(alpha);
    if (sufficient(alpha, value)) {
      double best_a = alpha;
      double best_v = value;
      for (int refine = 0; refine < 8; ++refine) {
        const double denom = phi0 + dphi0 * best_a - best_v;
        if (denom <= 0.0) break;  // fitted parabola has no interior maximum
        double aq = dphi0 * best_a * best_a / (2.0 * denom);
        if (!std::isfinite(aq) || aq <= 0.0) break;
        aq = std::min(aq, 1e3 * best_a);  // grow at most 1e3x per refinement
        if (std::abs(aq - best_a) <= 1e-10 * best_a) break;
        const double vq = phi(aq);
        if (!sufficient(aq, vq) || vq <= best_v) break;
        best_a = aq;
        best_v = vq;
      }
      return {best_a, best_v};
    }
    alpha *= kContraction;
  }
  throw LineSearchFailure(
      "no improving step within " + std::to_string(kMaxBacktracks) +
      " backtracks at iteration " + std::to_string(iteration) +
      " (bad gradient or non-smooth point)");
}

}  // namespace

namespace {

constexpr int kPreconditionAfter = 150;  // plain PR iterations first
constexpr int kPreconditionRefresh = 50;

// Floored inverse-diagonal metric; falls back to the identity when the
// estimate is unusable.
Eigen::VectorXd sanitize_metric(Eigen::VectorXd diag) {
  if (diag.size() == 0 || !diag.allFinite()) return Eigen::VectorXd();
  const double top = diag.maxCoeff();
  if (!(top > 0.0)) return Eigen::VectorXd();
  const double floor = 1e-5 * top;
  for (Eigen::Index i = 0; i < diag.size(); ++i)
    diag[i] = std::max(diag[i], floor);
  return diag;
}

}  // namespace

std::pair<Eigen::VectorXd, OptimizerReport> maximize(
    const ObjectiveFn& fn, Eigen::VectorXd x, const FitConfig& config,
    const PreconditionerFn& preconditioner) {
  OptimizerReport report;
  const Eigen::Index n = x.size();
  if (n == 0) {
    report.final_objective = fn(x, nullptr);
    report.converged = true;
    report.objective_trace.push_back(report.final_objective);
    return {std::move(x), report};
  }

  Eigen::VectorXd g(n);
  double fx = fn(x, &g);
  if (!std::isfinite(fx) || !g.allFinite())
    throw Error("NonFiniteObjective",
                "objective or gradient not finite at the initial point");
  report.objective_trace.push_back(fx);

  double gnorm = g.lpNorm<Eigen::Infinity>();
  Eigen::VectorXd metric;  // empty = identity
  Eigen::VectorXd y = g;   // metric-scaled gradient
  Eigen::VectorXd d = y;
  Eigen::VectorXd g_new(n);
  Eigen::VectorXd y_new(n);
  double prev_alpha = -1.0;
  double prev_dphi0 = 0.0;
  int iter = 0;

  while (gnorm > config.gradient_tolerance && iter < config.max_iterations) {
    if (preconditioner && iter >= kPreconditionAfter &&
        (iter - kPreconditionAfter) % kPreconditionRefresh == 0) {
      metric = sanitize_metric(preconditioner(x));
      y = metric.size() ? g.cwiseQuotient(metric).eval() : g;
      d = y;  // restart on refresh
      prev_alpha = -1.0;
    }
    double dphi0 = g.dot(d);
    if (dphi0 <= 0.0) {  // not an ascent direction: restart
      d = y;
      dphi0 = g.dot(y);
    }
    // First trial step: previous step scaled by the slope ratio, which keeps
    // the predicted first-order gain comparable across iterations. Scaled
    // directions approximate curvature-normalized steps, so start at 1.
    double alpha0;
    if (metric.size()) {
      alpha0 = 1.0;
    } else {
      alpha0 = prev_alpha > 0.0
                   ? prev_alpha * (prev_dphi0 / dphi0)
                   : 1.0 / (1.0 + d.lpNorm<Eigen::Infinity>());
      if (!std::isfinite(alpha0) || alpha0 <= 0.0) alpha0 = 1.0;
      alpha0 = std::min(std::max(alpha0, 1e-16), 1e8);
    }

    const LineSearchResult step =
        line_search(fn, x, d, fx, dphi0, alpha0, iter);
    x += step.alpha * d;
    fx = fn(x, &g_new);
    report.objective_trace.push_back(fx);

    y_new = metric.size() ? g_new.cwiseQuotient(metric).eval() : g_new;
    const double gy = g.dot(y);
    double beta = gy > 0.0 ? y_new.dot(g_new - g) / gy : 0.0;
    if (beta < 0.0) beta = 0.0;  // Polak-Ribiere restart
    d = y_new + beta * d;
    g.swap(g_new);
    y.swap(y_new);
    gnorm = g.lpNorm<Eigen::Infinity>();
    prev_alpha = step.alpha;
    prev_dphi0 = dphi0;
    ++iter;
  }

  report.iterations_used = iter;
  report.final_objective = fx;
  report.final_gradient_norm = gnorm;
  report.converged = gnorm <= config.gradient_tolerance;
  return {std::move(x), report};
}

namespace {

int worker_block_size(ModelKind kind, int feature_dim) {
  switch (kind) {
    case ModelKind::BT: return 0;
    case ModelKind::CrowdBT: return 1;
    case ModelKind::FactorBT: return 1 + feature_dim;
    default:
      throw Error("InvalidModel",
                  "packing is defined for bt, crowdbt and factorbt only");
  }
}

}  // namespace

int packed_size(ModelKind kind, int n_items, int n_workers, int feature_dim,
                bool include_virtual, bool include_worker_params) {
  int size = n_items + (include_virtual ? 1 : 0);
  if (include_worker_params)
    size += n_workers * worker_block_size(kind, feature_dim);
  return size;
}

Eigen::VectorXd pack(const ModelParams& params, ModelKind kind,
                     bool include_virtual, bool include_worker_params) {
  const int n = params.num_items();
  const int k = params.num_workers();
  const int m = params.worker_reaction.empty()
                    ? 0
                    : static_cast<int>(params.worker_reaction.front().size());
  Eigen::VectorXd v(
      packed_size(kind, n, k, m, include_virtual, include_worker_params));
  Eigen::Index at = 0;
  for (int i = 0; i < n; ++i) v[at++] = params.scores[i];
  if (include_virtual) v[at++] = params.virtual_score;
  if (include_worker_params) {
    for (int w = 0; w < k; ++w) {
      if (kind == ModelKind::CrowdBT) {
        v[at++] = logit(params.worker_eta[w]);
      } else if (kind == ModelKind::FactorBT) {
        v[at++] = params.worker_gamma[w];
        for (int l = 0; l < m; ++l) v[at++] = params.worker_reaction[w][l];
      }
    }
  }
  return v;
}

ModelParams unpack(const Eigen::VectorXd& theta, const ModelParams& prototype,
                   ModelKind kind, bool include_virtual,
                   bool include_worker_params) {
  ModelParams p = prototype;
  const int n = p.num_items();
  const int k = p.num_workers();
  const int m = p.worker_reaction.empty()
                    ? 0
                    : static_cast<int>(p.worker_reaction.front().size());
  if (theta.size() !=
      packed_size(kind, n, k, m, include_virtual, include_worker_params))
    throw DimensionMismatch("flat vector length " +
                            std::to_string(theta.size()) +
                            " does not match the packed layout");
  Eigen::Index at = 0;
  for (int i = 0; i < n; ++i) p.scores[i] = theta[at++];
  if (include_virtual) p.virtual_score = theta[at++];
  if (include_worker_params) {
    for (int w = 0; w < k; ++w) {
      if (kind == ModelKind::CrowdBT) {
        p.worker_eta[w] = logistic(theta[at++]);
      } else if (kind == ModelKind::FactorBT) {
        p.worker_gamma[w] = theta[at++];
        for (int l = 0; l < m; ++l) p.worker_reaction[w][l] = theta[at++];
      }
    }
  }
  return p;
}

Eigen::VectorXd pack_gradient(const ModelParams& grad, const ModelParams& at,
                              ModelKind kind, bool include_virtual,
                              bool include_worker_params) {
  const int n = at.num_items();
  const int k = at.num_workers();
  const int m = at.worker_reaction.empty()
                    ? 0
                    : static_cast<int>(at.worker_reaction.front().size());
  Eigen::VectorXd v(
      packed_size(kind, n, k, m, include_virtual, include_worker_params));
  Eigen::Index pos = 0;
  for (int i = 0; i < n; ++i) v[pos++] = grad.scores[i];
  if (include_virtual) v[pos++] = grad.virtual_score;
  if (include_worker_params) {
    for (int w = 0; w < k; ++w) {
      if (kind == ModelKind::CrowdBT) {
        const double eta = at.worker_eta[w];
        v[pos++] = grad.worker_eta[w] * eta * (1.0 - eta);
      } else if (kind == ModelKind::FactorBT) {
        v[pos++] = grad.worker_gamma[w];
        for (int l = 0; l < m; ++l) v[pos++] = grad.worker_reaction[w][l];
      }
    }
  }
  return v;
}

}  // namespace crowdrank
