#include "crowdrank/types.hpp"

#include <algorithm>
#include <numeric>

#include "crowdrank/errors.hpp"

namespace crowdrank {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::BT: return "bt";
    case ModelKind::CrowdBT: return "crowdbt";
    case ModelKind::FactorBT: return "factorbt";
    case ModelKind::PairwiseHITS: return "hits";
    case ModelKind::Linear: return "linear";
  }
  throw Error("InvalidModel", "unhandled model kind");
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "bt") return ModelKind::BT;
  if (name == "crowdbt") return ModelKind::CrowdBT;
  if (name == "factorbt") return ModelKind::FactorBT;
  if (name == "hits") return ModelKind::PairwiseHITS;
  if (name == "linear") return ModelKind::Linear;
  throw Error("InvalidModel", "unknown model kind '" + name + "'");
}

std::unordered_map<std::string, double> ModelParams::score_map() const {
  std::unordered_map<std::string, double> out;
  out.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i)
    out.emplace(item_ids.at(i), scores[i]);
  return out;
}

int Ranking::rank_of(const std::string& id) const {
  auto it = std::find(items_by_rank.begin(), items_by_rank.end(), id);
  if (it == items_by_rank.end())
    throw UnknownItem("item '" + id + "' is not ranked");
  return static_cast<int>(it - items_by_rank.begin()) + 1;
}

Ranking ranking_from_scores(const ModelParams& params) {
  if (params.item_ids.size() != params.scores.size())
    throw DimensionMismatch("scores and item ids differ in length");
  std::vector<int> order(params.scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (params.scores[a] != params.scores[b])
      return params.scores[a] > params.scores[b];
    return params.item_ids[a] < params.item_ids[b];
  });
  Ranking ranking;
  ranking.items_by_rank.reserve(order.size());
  for (int idx : order) ranking.items_by_rank.push_back(params.item_ids[idx]);
  return ranking;
}

}  // namespace crowdrank
