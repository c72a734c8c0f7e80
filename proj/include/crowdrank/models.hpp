#ifndef CROWDRANK_MODELS_HPP
#define CROWDRANK_MODELS_HPP

#include <cmath>
#include <span>

#include "crowdrank/dataset.hpp"
#include "crowdrank/types.hpp"

namespace crowdrank {

/// Per-comparison probabilities are floored at this value inside the log so
/// a wild line-search trial cannot produce -inf. Applied identically across
/// all models.
inline constexpr double kProbFloor = 1e-12;

/// Numerically stable 1/(1+exp(-x)); never overflows for finite x and is
/// monotone nondecreasing.
inline double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// Probability that the item with score `s_i` beats the item with `s_j`.
inline double bt_win_prob(double s_i, double s_j) {
  return logistic(s_i - s_j);
}

/// Worker-aware probability: with qualification eta the worker follows the
/// score model, otherwise gives the flipped answer. Throws DomainError if
/// eta is outside [0,1].
double crowdbt_win_prob(double s_i, double s_j, double eta);

/// Mixture of the score model (weight logistic(gamma)) and a reaction to the
/// task features (weight 1-logistic(gamma)). `features` must be oriented to
/// the (i, j) order. Throws DimensionMismatch if the vectors differ in size.
double factorbt_win_prob(double s_i, double s_j, double gamma,
                         std::span<const double> reaction,
                         std::span<const double> features);

/// Sum of log win probabilities of the observed comparisons, plus the
/// virtual-node regularization term
///     lambda * sum_i [log f(s0 - s_i) + log f(s_i - s0)]
/// for CrowdBT and FactorBT. BT receives no regularization term.
///
/// Throws NonFiniteLikelihood if a probability underflows to exactly zero.
double log_likelihood(const Dataset& dataset, const ModelParams& params,
                      ModelKind kind, const FitConfig& config);

/// Analytic gradient of log_likelihood with respect to every free parameter,
/// returned in ModelParams shape (scores, virtual_score and, per kind, eta /
/// gamma / reaction slots). CrowdBT partials are with respect to eta itself.
ModelParams gradient(const Dataset& dataset, const ModelParams& params,
                     ModelKind kind, const FitConfig& config);

/// Nonnegative per-parameter curvature estimate of -log_likelihood (squared
/// probability sensitivities plus the regularization curvature), used as a
/// diagonal preconditioner for the tail of the conjugate gradient fit.
ModelParams fisher_diagonal(const Dataset& dataset, const ModelParams& params,
                            ModelKind kind, const FitConfig& config);

/// Central finite differences of log_likelihood over the same free
/// parameters; the independent audit oracle for `gradient`.
ModelParams numeric_gradient(const Dataset& dataset, const ModelParams& params,
                             ModelKind kind, const FitConfig& config,
                             double step = 1e-5);

/// Largest relative disagreement between the analytic and finite-difference
/// gradients, with per-entry scale max(1, |analytic|, |numeric|).
double max_gradient_error(const Dataset& dataset, const ModelParams& params,
                          ModelKind kind, const FitConfig& config,
                          double step = 1e-5);

}  // namespace crowdrank

#endif  // CROWDRANK_MODELS_HPP
