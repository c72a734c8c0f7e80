#include "crowdrank/models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "crowdrank/errors.hpp"

namespace crowdrank {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void check_kind_supported(ModelKind kind) {
  if (kind != ModelKind::BT && kind != ModelKind::CrowdBT &&
      kind != ModelKind::FactorBT)
    throw Error("InvalidModel", "likelihood is defined for bt, crowdbt and "
                                "factorbt only, got " + to_string(kind));
}

void check_config(const FitConfig& config) {
  if (config.regularization_lambda < 0.0)
    throw DomainError("regularization_lambda must be nonnegative");
  if (!(config.gradient_tolerance > 0.0))
    throw DomainError("gradient_tolerance must be positive");
}

void check_params_shape(const Dataset& ds, const ModelParams& p,
                        ModelKind kind) {
  const auto n = static_cast<std::size_t>(ds.num_items());
  const auto k = static_cast<std::size_t>(ds.num_workers());
  if (p.scores.size() != n)
    throw DimensionMismatch("expected " + std::to_string(n) + " scores, got " +
                            std::to_string(p.scores.size()));
  if (kind == ModelKind::CrowdBT) {
    if (p.worker_eta.size() != k)
      throw DimensionMismatch("crowdbt needs one eta per worker");
    for (double eta : p.worker_eta)
      if (!(eta >= 0.0 && eta <= 1.0))
        throw DomainError("eta outside [0,1]: " + std::to_string(eta));
  }
  if (kind == ModelKind::FactorBT) {
    if (p.worker_gamma.size() != k || p.worker_reaction.size() != k)
      throw DimensionMismatch("factorbt needs gamma and reaction per worker");
    for (const auto& r : p.worker_reaction)
      if (static_cast<int>(r.size()) != ds.feature_dim)
        throw DimensionMismatch("reaction vector length " +
                                std::to_string(r.size()) +
                                " does not match feature dimension " +
                                std::to_string(ds.feature_dim));
  }
}

double comparison_prob(const Comparison& c, const ModelParams& p,
                       ModelKind kind) {
  const double sw = p.scores[c.winner];
  const double sl = p.scores[c.loser];
  switch (kind) {
    case ModelKind::BT:
      return logistic(sw - sl);
    case ModelKind::CrowdBT: {
      const double eta = p.worker_eta[c.worker];
      return eta * logistic(sw - sl) + (1.0 - eta) * logistic(sl - sw);
    }
    case ModelKind::FactorBT: {
      const double g = logistic(p.worker_gamma[c.worker]);
      const double z = dot(c.features, p.worker_reaction[c.worker]);
      return g * logistic(sw - sl) + (1.0 - g) * logistic(z);
    }
    default:
      throw Error("InvalidModel", "unsupported kind");
  }
}

[[noreturn]] void throw_underflow(const Comparison& c) {
  throw NonFiniteLikelihood(
      "comparison probability underflowed to 0 (winner index " +
      std::to_string(c.winner) + ", loser index " + std::to_string(c.loser) +
      "); parameters are pathological");
}

}  // namespace

double crowdbt_win_prob(double s_i, double s_j, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw DomainError("eta outside [0,1]: " + std::to_string(eta));
  return eta * logistic(s_i - s_j) + (1.0 - eta) * logistic(s_j - s_i);
}

double factorbt_win_prob(double s_i, double s_j, double gamma,
                         std::span<const double> reaction,
                         std::span<const double> features) {
  if (reaction.size() != features.size())
    throw DimensionMismatch("reaction length " +
                            std::to_string(reaction.size()) +
                            " vs feature length " +
                            std::to_string(features.size()));
  const double g = logistic(gamma);
  return g * logistic(s_i - s_j) + (1.0 - g) * logistic(dot(features, reaction));
}

double log_likelihood(const Dataset& dataset, const ModelParams& params,
                      ModelKind kind, const FitConfig& config) {
  check_kind_supported(kind);
  check_config(config);
  check_params_shape(dataset, params, kind);

  double ll = 0.0;
  for (const Comparison& c : dataset.comparisons) {
    const double p = comparison_prob(c, params, kind);
    if (p == 0.0) throw_underflow(c);
    ll += std::log(p < kProbFloor ? kProbFloor : p);
  }

  // Virtual-node regularization: fictive win and loss of every item against
  // the virtual item, judged by a perfect worker. BT gets no such term.
  const double lambda = config.regularization_lambda;
  if (kind != ModelKind::BT && lambda > 0.0) {
    const double s0 = params.virtual_score;
    for (double s : params.scores) {
      const double win = logistic(s - s0);
      const double loss = logistic(s0 - s);
      ll += lambda * (std::log(win < kProbFloor ? kProbFloor : win) +
                      std::log(loss < kProbFloor ? kProbFloor : loss));
    }
  }
  return ll;
}

ModelParams gradient(const Dataset& dataset, const ModelParams& params,
                     ModelKind kind, const FitConfig& config) {
  check_kind_supported(kind);
  check_config(config);
  check_params_shape(dataset, params, kind);

  ModelParams g;
  g.kind = kind;
  g.item_ids = params.item_ids;
  g.worker_ids = params.worker_ids;
  g.scores.assign(params.scores.size(), 0.0);
  g.virtual_score = 0.0;
  const auto k = static_cast<std::size_t>(dataset.num_workers());
  if (kind == ModelKind::CrowdBT) g.worker_eta.assign(k, 0.0);
  if (kind == ModelKind::FactorBT) {
    g.worker_gamma.assign(k, 0.0);
    g.worker_reaction.assign(
        k, std::vector<double>(static_cast<std::size_t>(dataset.feature_dim),
                               0.0));
  }

  for (const Comparison& c : dataset.comparisons) {
    const double sw = params.scores[c.winner];
    const double sl = params.scores[c.loser];
    const double fd = logistic(sw - sl);
    const double fdm = logistic(sl - sw);
    switch (kind) {
      case ModelKind::BT: {
        if (fd == 0.0) throw_underflow(c);
        if (fd < kProbFloor) break;  // flat region of the floored objective
        g.scores[c.winner] += fdm;
        g.scores[c.loser] -= fdm;
        break;
      }
      case ModelKind::CrowdBT: {
        const double eta = params.worker_eta[c.worker];
        const double p = eta * fd + (1.0 - eta) * fdm;
        if (p == 0.0) throw_underflow(c);
        if (p < kProbFloor) break;
        g.worker_eta[c.worker] += (fd - fdm) / p;
        const double ds = (2.0 * eta - 1.0) * fd * fdm / p;
        g.scores[c.winner] += ds;
        g.scores[c.loser] -= ds;
        break;
      }
      case ModelKind::FactorBT: {
        const double gamma = params.worker_gamma[c.worker];
        const double gw = logistic(gamma);
        const double gwm = logistic(-gamma);
        const double z = dot(c.features, params.worker_reaction[c.worker]);
        const double fz = logistic(z);
        const double fzm = logistic(-z);
        const double p = gw * fd + (1.0 - gw) * fz;
        if (p == 0.0) throw_underflow(c);
        if (p < kProbFloor) break;
        const double inv = 1.0 / p;
        g.worker_gamma[c.worker] += (fd - fz) * gw * gwm * inv;
        auto& gr = g.worker_reaction[c.worker];
        const double rfac = (1.0 - gw) * fz * fzm * inv;
        for (std::size_t l = 0; l < c.features.size(); ++l)
          gr[l] += rfac * c.features[l];
        const double ds = gw * fd * fdm * inv;
        g.scores[c.winner] += ds;
        g.scores[c.loser] -= ds;
        break;
      }
      default:
        break;
    }
  }

  const double lambda = config.regularization_lambda;
  if (kind != ModelKind::BT && lambda > 0.0) {
    const double s0 = params.virtual_score;
    for (std::size_t i = 0; i < params.scores.size(); ++i) {
      const double win = logistic(params.scores[i] - s0);
      const double loss = logistic(s0 - params.scores[i]);
      // d/ds_i of lambda*(log win + log loss); each log is flat below the
      // probability floor.
      double ds = 0.0;
      if (win >= kProbFloor) ds += lambda * loss;
      if (loss >= kProbFloor) ds -= lambda * win;
      g.scores[i] += ds;
      g.virtual_score -= ds;
    }
  }
  return g;
}

ModelParams fisher_diagonal(const Dataset& dataset, const ModelParams& params,
                            ModelKind kind, const FitConfig& config) {
  check_kind_supported(kind);
  check_config(config);
  check_params_shape(dataset, params, kind);

  ModelParams diag;
  diag.kind = kind;
  diag.item_ids = params.item_ids;
  diag.worker_ids = params.worker_ids;
  diag.scores.assign(params.scores.size(), 0.0);
  diag.virtual_score = 0.0;
  const auto k = static_cast<std::size_t>(dataset.num_workers());
  if (kind == ModelKind::CrowdBT) diag.worker_eta.assign(k, 0.0);
  if (kind == ModelKind::FactorBT) {
    diag.worker_gamma.assign(k, 0.0);
    diag.worker_reaction.assign(
        k, std::vector<double>(static_cast<std::size_t>(dataset.feature_dim),
                               0.0));
  }

  for (const Comparison& c : dataset.comparisons) {
    const double fd = logistic(params.scores[c.winner] -
                               params.scores[c.loser]);
    const double fdm = 1.0 - fd;
    const double p = std::max(comparison_prob(c, params, kind), kProbFloor);
    const double inv2 = 1.0 / (p * p);
    switch (kind) {
      case ModelKind::BT: {
        const double dps = fd * fdm;
        diag.scores[c.winner] += dps * dps * inv2;
        diag.scores[c.loser] += dps * dps * inv2;
        break;
      }
      case ModelKind::CrowdBT: {
        const double eta = params.worker_eta[c.worker];
        const double dps = (2.0 * eta - 1.0) * fd * fdm;
        diag.scores[c.winner] += dps * dps * inv2;
        diag.scores[c.loser] += dps * dps * inv2;
        const double dpe = fd - (1.0 - fd);
        diag.worker_eta[c.worker] += dpe * dpe * inv2;
        break;
      }
      case ModelKind::FactorBT: {
        const double gw = logistic(params.worker_gamma[c.worker]);
        const double z = dot(c.features, params.worker_reaction[c.worker]);
        const double fz = logistic(z);
        const double dps = gw * fd * fdm;
        diag.scores[c.winner] += dps * dps * inv2;
        diag.scores[c.loser] += dps * dps * inv2;
        const double dpg = (fd - fz) * gw * (1.0 - gw);
        diag.worker_gamma[c.worker] += dpg * dpg * inv2;
        const double dpr = (1.0 - gw) * fz * (1.0 - fz);
        auto& dr = diag.worker_reaction[c.worker];
        for (std::size_t l = 0; l < c.features.size(); ++l) {
          const double v = dpr * c.features[l];
          dr[l] += v * v * inv2;
        }
        break;
      }
      default:
        break;
    }
  }

  const double lambda = config.regularization_lambda;
  if (kind != ModelKind::BT && lambda > 0.0) {
    for (std::size_t i = 0; i < params.scores.size(); ++i) {
      const double fw =
          logistic(params.scores[i] - params.virtual_score);
      const double curvature = lambda * 2.0 * fw * (1.0 - fw);
      diag.scores[i] += curvature;
      diag.virtual_score += curvature;
    }
  }
  return diag;
}

ModelParams numeric_gradient(const Dataset& dataset, const ModelParams& params,
                             ModelKind kind, const FitConfig& config,
                             double step) {
  ModelParams g = params;  // same shape, values overwritten below
  ModelParams probe = params;
  const auto diff = [&](double* slot) {
    const double saved = *slot;
    *slot = saved + step;
    const double up = log_likelihood(dataset, probe, kind, config);
    *slot = saved - step;
    const double down = log_likelihood(dataset, probe, kind, config);
    *slot = saved;
    return (up - down) / (2.0 * step);
  };

  for (std::size_t i = 0; i < probe.scores.size(); ++i)
    g.scores[i] = diff(&probe.scores[i]);
  g.virtual_score = diff(&probe.virtual_score);
  if (kind == ModelKind::CrowdBT)
    for (std::size_t w = 0; w < probe.worker_eta.size(); ++w)
      g.worker_eta[w] = diff(&probe.worker_eta[w]);
  if (kind == ModelKind::FactorBT) {
    for (std::size_t w = 0; w < probe.worker_gamma.size(); ++w)
      g.worker_gamma[w] = diff(&probe.worker_gamma[w]);
    for (std::size_t w = 0; w < probe.worker_reaction.size(); ++w)
      for (std::size_t l = 0; l < probe.worker_reaction[w].size(); ++l)
        g.worker_reaction[w][l] = diff(&probe.worker_reaction[w][l]);
  }
  return g;
}

double max_gradient_error(const Dataset& dataset, const ModelParams& params,
                          ModelKind kind, const FitConfig& config,
                          double step) {
  const ModelParams analytic = gradient(dataset, params, kind, config);
  const ModelParams numeric =
      numeric_gradient(dataset, params, kind, config, step);
  double worst = 0.0;
  const auto update = [&](double a, double n) {
    const double scale = std::max({1.0, std::abs(a), std::abs(n)});
    worst = std::max(worst, std::abs(a - n) / scale);
  };
  for (std::size_t i = 0; i < analytic.scores.size(); ++i)
    update(analytic.scores[i], numeric.scores[i]);
  update(analytic.virtual_score, numeric.virtual_score);
  for (std::size_t w = 0; w < analytic.worker_eta.size(); ++w)
    update(analytic.worker_eta[w], numeric.worker_eta[w]);
  for (std::size_t w = 0; w < analytic.worker_gamma.size(); ++w)
    update(analytic.worker_gamma[w], numeric.worker_gamma[w]);
  for (std::size_t w = 0; w < analytic.worker_reaction.size(); ++w)
    for (std::size_t l = 0; l < analytic.worker_reaction[w].size(); ++l)
      update(analytic.worker_reaction[w][l], numeric.worker_reaction[w][l]);
  return worst;
}

}  // namespace crowdrank
