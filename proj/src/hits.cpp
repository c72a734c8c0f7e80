#include "crowdrank/hits.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <vector>

#include "crowdrank/errors.hpp"

namespace crowdrank {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

ModelParams hits_fit(const Dataset& dataset, int max_rounds, double tol,
                     HitsReport* report) {
  const int n = dataset.num_items();
  const int k = dataset.num_workers();

  // One least-squares row per unordered co-occurring item pair.
  std::map<std::pair<int, int>, int> row_of;
  for (const Comparison& c : dataset.comparisons) {
    const auto key = std::minmax(c.winner, c.loser);
    row_of.emplace(key, 0);
  }
  int next_row = 0;
  for (auto& [key, row] : row_of) row = next_row++;
  const int rows = next_row;

  UnionFind components(n);
  for (const auto& [key, row] : row_of) components.unite(key.first, key.second);
  std::vector<int> component(n);
  std::map<int, int> component_index;
  for (int i = 0; i < n; ++i) {
    const int root = components.find(i);
    auto [it, fresh] =
        component_index.emplace(root, static_cast<int>(component_index.size()));
    component[i] = it->second;
    (void)fresh;
  }
  const int n_components = static_cast<int>(component_index.size());

  // Normal equations of the stacked score relations with a zero-mean gauge
  // row per component; the matrix does not change across rounds.
  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [key, row] : row_of) {
    normal(key.first, key.first) += 1.0;
    normal(key.second, key.second) += 1.0;
    normal(key.first, key.second) -= 1.0;
    normal(key.second, key.first) -= 1.0;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (component[i] == component[j]) normal(i, j) += 1.0;
  const Eigen::LDLT<Eigen::MatrixXd> solver(normal);
  if (solver.info() != Eigen::Success)
    throw SingularSystem("normal equations could not be factorized");

  std::vector<double> abilities(static_cast<std::size_t>(k), 1.0);
  Eigen::VectorXd scores = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd rhs(rows);
  Eigen::VectorXd target(n);

  int round = 0;
  bool converged = false;
  double delta = 0.0;
  while (round < max_rounds) {
    ++round;
    rhs.setZero();
    for (const Comparison& c : dataset.comparisons) {
      const auto key = std::minmax(c.winner, c.loser);
      const double sign = c.winner == key.first ? 1.0 : -1.0;
      rhs[row_of.at(key)] += sign * abilities[c.worker];
    }
    target.setZero();
    for (const auto& [key, row] : row_of) {
      target[key.first] += rhs[row];
      target[key.second] -= rhs[row];
    }
    Eigen::VectorXd next = solver.solve(target);
    // Pin the per-component zero-mean gauge exactly.
    std::vector<double> mean(n_components, 0.0);
    std::vector<int> count(n_components, 0);
    for (int i = 0; i < n; ++i) {
      mean[component[i]] += next[i];
      count[component[i]] += 1;
    }
    for (int c = 0; c < n_components; ++c) mean[c] /= count[c];
    for (int i = 0; i < n; ++i) next[i] -= mean[component[i]];

    delta = (next - scores).lpNorm<Eigen::Infinity>();
    scores = next;

    // Ability = fraction of the worker's comparisons agreeing with the
    // current scores; ties count as incorrect.
    std::vector<int> correct(static_cast<std::size_t>(k), 0);
    std::vector<int> total(static_cast<std::size_t>(k), 0);
    for (const Comparison& c : dataset.comparisons) {
      total[c.worker] += 1;
      if (scores[c.winner] > scores[c.loser]) correct[c.worker] += 1;
    }
    for (int w = 0; w < k; ++w)
      if (total[w] > 0)
        abilities[w] = static_cast<double>(correct[w]) / total[w];

    if (delta < tol) {
      converged = true;
      break;
    }
  }

  if (report) {
    report->rounds = round;
    report->converged = converged;
    report->components = n_components;
    report->final_delta = delta;
  }

  ModelParams params;
  params.kind = ModelKind::PairwiseHITS;
  params.item_ids = dataset.items.ids();
  params.worker_ids = dataset.workers.ids();
  params.scores.assign(scores.data(), scores.data() + n);
  params.worker_ability = std::move(abilities);
  return params;
}

}  // namespace crowdrank
