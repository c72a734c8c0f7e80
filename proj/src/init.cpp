#include "crowdrank/init.hpp"

#include <cmath>

#include "crowdrank/errors.hpp"
#include "crowdrank/models.hpp"

namespace crowdrank {

namespace {

ModelParams base_params(const Dataset& ds, ModelKind kind) {
  ModelParams p;
  p.kind = kind;
  p.item_ids = ds.items.ids();
  p.worker_ids = ds.workers.ids();
  p.scores.assign(static_cast<std::size_t>(ds.num_items()), 0.0);
  p.virtual_score = 0.0;
  return p;
}

}  // namespace

ModelParams init_factorbt(const Dataset& dataset) {
  ModelParams p = base_params(dataset, ModelKind::FactorBT);
  const auto k = static_cast<std::size_t>(dataset.num_workers());
  const auto m = static_cast<std::size_t>(dataset.feature_dim);

  // Constant-answer detection is side-based: a worker is constant iff all of
  // its recorded answers fall on the same presentation side.
  std::vector<int> seen_left(k, 0), seen_right(k, 0);
  // Smoothed per-feature choice statistics, winner-oriented.
  std::vector<std::vector<int>> chose_positive(k, std::vector<int>(m, 0));
  std::vector<std::vector<int>> feature_active(k, std::vector<int>(m, 0));

  for (const Comparison& c : dataset.comparisons) {
    const auto w = static_cast<std::size_t>(c.worker);
    (c.winner_left ? seen_left : seen_right)[w] += 1;
    for (std::size_t l = 0; l < m; ++l) {
      const double x = c.features[l];
      if (x == 1.0) {
        chose_positive[w][l] += 1;
        feature_active[w][l] += 1;
      } else if (x == -1.0) {
        feature_active[w][l] += 1;
      }
    }
  }

  p.worker_gamma.resize(k);
  p.worker_reaction.assign(k, std::vector<double>(m, 0.0));
  for (std::size_t w = 0; w < k; ++w) {
    const bool constant = seen_left[w] == 0 || seen_right[w] == 0;
    p.worker_gamma[w] = constant ? logistic(-1.0) : logistic(1.0);
    for (std::size_t l = 0; l < m; ++l) {
      const double a = (chose_positive[w][l] + 1.0) /
                       (feature_active[w][l] + 2.0);
      p.worker_reaction[w][l] = std::log(a);
    }
  }
  return p;
}

ModelParams init_default(ModelKind kind, const Dataset& dataset,
                         const FitConfig& config) {
  switch (kind) {
    case ModelKind::BT:
      return base_params(dataset, kind);
    case ModelKind::CrowdBT: {
      ModelParams p = base_params(dataset, kind);
      p.worker_eta.assign(static_cast<std::size_t>(dataset.num_workers()),
                          config.crowdbt_eta_init);
      return p;
    }
    case ModelKind::FactorBT:
      return init_factorbt(dataset);
    case ModelKind::PairwiseHITS: {
      ModelParams p = base_params(dataset, kind);
      p.worker_ability.assign(static_cast<std::size_t>(dataset.num_workers()),
                              1.0);
      return p;
    }
    case ModelKind::Linear: {
      ModelParams p = base_params(dataset, kind);
      p.worker_gamma.assign(static_cast<std::size_t>(dataset.num_workers()),
                            0.0);
      return p;
    }
  }
  throw Error("InvalidModel", "unhandled model kind");
}

}  // namespace crowdrank
