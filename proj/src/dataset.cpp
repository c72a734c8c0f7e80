#include "crowdrank/dataset.hpp"

#include <utility>

#include "crowdrank/errors.hpp"

namespace crowdrank {

int IdRegistry::add(const std::string& id) {
  auto it = index_.find(id);
  if (it != index_.end()) return it->second;
  const int idx = static_cast<int>(ids_.size());
  ids_.push_back(id);
  index_.emplace(id, idx);
  return idx;
}

std::optional<int> IdRegistry::find(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::string& IdRegistry::id_of(int index) const {
  return ids_.at(static_cast<std::size_t>(index));
}

std::map<std::string, double> Dataset::gold_by_id() const {
  std::map<std::string, double> out;
  for (const auto& [idx, value] : gold) out.emplace(items.id_of(idx), value);
  return out;
}

namespace {

// All feature components are antisymmetric under an orientation swap
// ({-1,0,+1} relative-presence encoding); avoid producing -0.0.
std::vector<double> flipped(const std::vector<double>& features) {
  std::vector<double> out(features.size());
  for (std::size_t i = 0; i < features.size(); ++i)
    out[i] = features[i] == 0.0 ? 0.0 : -features[i];
  return out;
}

}  // namespace

Dataset build_dataset(const std::vector<RawComparison>& rows,
                      const std::map<std::string, double>& gold) {
  Dataset ds;
  bool dim_set = false;
  for (const RawComparison& row : rows) {
    if (row.worker.empty() || row.left_item.empty() || row.right_item.empty())
      throw Error("InvalidId", "worker and item ids must be nonempty");
    if (row.left_item == row.right_item)
      throw SelfComparison("item '" + row.left_item +
                           "' compared with itself");
    if (!dim_set) {
      ds.feature_dim = static_cast<int>(row.features.size());
      dim_set = true;
    } else if (static_cast<int>(row.features.size()) != ds.feature_dim) {
      throw DimensionMismatch(
          "feature vector of length " + std::to_string(row.features.size()) +
          " does not match declared dimension " +
          std::to_string(ds.feature_dim));
    }
    Comparison c;
    c.worker = ds.workers.add(row.worker);
    const int left = ds.items.add(row.left_item);
    const int right = ds.items.add(row.right_item);
    if (row.left_won) {
      c.winner = left;
      c.loser = right;
      c.winner_left = true;
      c.features = row.features;
    } else {
      c.winner = right;
      c.loser = left;
      c.winner_left = false;
      c.features = flipped(row.features);
    }
    ds.comparisons.push_back(std::move(c));
  }
  attach_gold(ds, gold);
  return ds;
}

void attach_gold(Dataset& dataset, const std::map<std::string, double>& gold) {
  dataset.gold.clear();
  for (const auto& [id, value] : gold) {
    const auto idx = dataset.items.find(id);
    if (!idx) throw UnknownItem("gold entry for unregistered item '" + id + "'");
    dataset.gold.emplace(*idx, value);
  }
}

std::vector<RawComparison> export_rows(const Dataset& dataset) {
  std::vector<RawComparison> rows;
  rows.reserve(dataset.comparisons.size());
  for (const Comparison& c : dataset.comparisons) {
    RawComparison row;
    row.worker = dataset.workers.id_of(c.worker);
    if (c.winner_left) {
      row.left_item = dataset.items.id_of(c.winner);
      row.right_item = dataset.items.id_of(c.loser);
      row.left_won = true;
      row.features = c.features;
    } else {
      row.left_item = dataset.items.id_of(c.loser);
      row.right_item = dataset.items.id_of(c.winner);
      row.left_won = false;
      row.features = flipped(c.features);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace crowdrank
