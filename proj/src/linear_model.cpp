#include "crowdrank/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "crowdrank/errors.hpp"

namespace crowdrank {

namespace {

struct Observation {
  int left;
  int right;
  int worker;
  double y;  // +1 left won, -1 right won
};

std::vector<Observation> observations_of(const Dataset& ds) {
  std::vector<Observation> obs;
  obs.reserve(ds.comparisons.size());
  for (const Comparison& c : ds.comparisons) {
    Observation o;
    o.worker = c.worker;
    if (c.winner_left) {
      o.left = c.winner;
      o.right = c.loser;
      o.y = 1.0;
    } else {
      o.left = c.loser;
      o.right = c.winner;
      o.y = -1.0;
    }
    obs.push_back(o);
  }
  return obs;
}

struct CoordinateFit {
  std::vector<double> scores;
  std::vector<double> gamma;
  double objective = 0.0;
  int passes = 0;
  bool converged = false;
  double final_delta = 0.0;
  int components = 1;
};

CoordinateFit coordinate_descent(const std::vector<Observation>& obs, int n,
                                 int k, double penalty, int max_passes,
                                 double tol) {
  // Incidence lists: (observation index, sign of the item's coefficient).
  std::vector<std::vector<std::pair<int, double>>> by_item(n);
  std::vector<std::vector<int>> by_worker(k);
  for (int c = 0; c < static_cast<int>(obs.size()); ++c) {
    by_item[obs[c].left].emplace_back(c, 1.0);
    by_item[obs[c].right].emplace_back(c, -1.0);
    by_worker[obs[c].worker].push_back(c);
  }

  // Connected components of the item co-occurrence graph; the gauge is
  // applied per component.
  std::vector<int> component(n, -1);
  {
    std::vector<std::vector<int>> adj(n);
    for (const Observation& o : obs) {
      adj[o.left].push_back(o.right);
      adj[o.right].push_back(o.left);
    }
    int next = 0;
    std::vector<int> stack;
    for (int i = 0; i < n; ++i) {
      if (component[i] >= 0) continue;
      component[i] = next;
      stack.push_back(i);
      while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : adj[v])
          if (component[w] < 0) {
            component[w] = next;
            stack.push_back(w);
          }
      }
      ++next;
    }
    if (next == 0) next = 1;
    for (int i = 0; i < n; ++i)
      if (component[i] < 0) component[i] = next - 1;
  }
  const int n_components =
      n == 0 ? 1 : 1 + *std::max_element(component.begin(), component.end());

  CoordinateFit fit;
  fit.components = n_components;
  fit.scores.assign(n, 0.0);
  fit.gamma.assign(k, 0.0);
  std::vector<double> residual(obs.size());
  for (std::size_t c = 0; c < obs.size(); ++c) residual[c] = obs[c].y;

  for (int pass = 0; pass < max_passes; ++pass) {
    double delta = 0.0;
    for (int i = 0; i < n; ++i) {
      if (by_item[i].empty()) continue;
      double num = 0.0;
      for (const auto& [c, sign] : by_item[i]) num += sign * residual[c];
      const double step = num / static_cast<double>(by_item[i].size());
      fit.scores[i] += step;
      for (const auto& [c, sign] : by_item[i]) residual[c] -= sign * step;
      delta = std::max(delta, std::abs(step));
    }
    for (int w = 0; w < k; ++w) {
      if (by_worker[w].empty()) continue;
      double z = 0.0;
      for (int c : by_worker[w]) z += residual[c] + fit.gamma[w];
      const double updated = soft_threshold(z, penalty / 2.0) /
                             static_cast<double>(by_worker[w].size());
      const double step = updated - fit.gamma[w];
      fit.gamma[w] = updated;
      for (int c : by_worker[w]) residual[c] -= step;
      delta = std::max(delta, std::abs(step));
    }
    // Re-center each component; scores only enter through within-component
    // differences, so the residuals are unchanged.
    std::vector<double> mean(n_components, 0.0);
    std::vector<int> count(n_components, 0);
    for (int i = 0; i < n; ++i) {
      mean[component[i]] += fit.scores[i];
      count[component[i]] += 1;
    }
    for (int c = 0; c < n_components; ++c)
      if (count[c] > 0) mean[c] /= count[c];
    for (int i = 0; i < n; ++i) fit.scores[i] -= mean[component[i]];

    fit.passes = pass + 1;
    fit.final_delta = delta;
    if (delta < tol) {
      fit.converged = true;
      break;
    }
  }

  fit.objective = 0.0;
  for (double r : residual) fit.objective += r * r;
  for (double g : fit.gamma) fit.objective += penalty * std::abs(g);
  return fit;
}

double cross_validated_penalty(const std::vector<Observation>& obs, int n,
                               int k, const LinearFitConfig& config) {
  const std::vector<double> grid = {1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0};
  const int folds = std::min<int>(5, static_cast<int>(obs.size()));
  if (folds < 2) return 1.0;

  std::vector<int> order(obs.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(config.seed);
  std::shuffle(order.begin(), order.end(), rng);

  double best_penalty = grid.front();
  double best_error = std::numeric_limits<double>::infinity();
  for (double penalty : grid) {
    double error = 0.0;
    for (int fold = 0; fold < folds; ++fold) {
      std::vector<Observation> train;
      std::vector<Observation> held;
      train.reserve(obs.size());
      for (std::size_t pos = 0; pos < order.size(); ++pos) {
        if (static_cast<int>(pos % folds) == fold)
          held.push_back(obs[order[pos]]);
        else
          train.push_back(obs[order[pos]]);
      }
      const CoordinateFit fit = coordinate_descent(
          train, n, k, penalty, config.max_passes, config.tol);
      for (const Observation& o : held) {
        const double pred =
            fit.scores[o.left] - fit.scores[o.right] + fit.gamma[o.worker];
        error += (o.y - pred) * (o.y - pred);
      }
    }
    if (error < best_error) {
      best_error = error;
      best_penalty = penalty;
    }
  }
  return best_penalty;
}

}  // namespace

ModelParams linear_fit(const Dataset& dataset, const LinearFitConfig& config,
                       LinearFitReport* report) {
  if (config.l1_penalty && *config.l1_penalty < 0.0)
    throw DomainError("l1_penalty must be nonnegative");
  const std::vector<Observation> obs = observations_of(dataset);
  const int n = dataset.num_items();
  const int k = dataset.num_workers();

  const double penalty =
      config.l1_penalty ? *config.l1_penalty
                        : cross_validated_penalty(obs, n, k, config);
  const CoordinateFit fit =
      coordinate_descent(obs, n, k, penalty, config.max_passes, config.tol);

  if (report) {
    report->passes = fit.passes;
    report->converged = fit.converged;
    report->objective = fit.objective;
    report->penalty_used = penalty;
    report->final_delta = fit.final_delta;
    report->components = fit.components;
  }

  ModelParams params;
  params.kind = ModelKind::Linear;
  params.item_ids = dataset.items.ids();
  params.worker_ids = dataset.workers.ids();
  params.scores = fit.scores;
  params.worker_gamma = fit.gamma;
  return params;
}

}  // namespace crowdrank
