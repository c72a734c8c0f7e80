#ifndef CROWDRANK_DATASET_HPP
#define CROWDRANK_DATASET_HPP

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace crowdrank {

/// Bijective mapping between opaque string identifiers and dense indices
/// 0..size()-1, in order of first registration.
class IdRegistry {
 public:
  int add(const std::string& id);
  std::optional<int> find(const std::string& id) const;
  const std::string& id_of(int index) const;
  int size() const { return static_cast<int>(ids_.size()); }
  bool contains(const std::string& id) const { return index_.count(id) > 0; }
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, int> index_;
};

/// One comparison as presented to a worker: two items side by side, a
/// feature vector describing the task in left-vs-right orientation, and
/// the recorded choice.
struct RawComparison {
  std::string worker;
  std::string left_item;
  std::string right_item;
  bool left_won = true;
  std::vector<double> features;  // left-vs-right orientation
};

/// Internal storage form: winner first. Feature components are oriented to
/// the winner/loser order (all components flip sign under a swap of the
/// two items, matching the {-1,0,+1} relative-presence encoding).
struct Comparison {
  int worker = 0;
  int winner = 0;
  int loser = 0;
  bool winner_left = true;  // presentation side of the winning item
  std::vector<double> features;
};

struct Dataset {
  IdRegistry items;
  IdRegistry workers;
  std::vector<Comparison> comparisons;
  int feature_dim = 0;
  std::map<int, double> gold;  // item index -> ground-truth quality

  int num_items() const { return items.size(); }
  int num_workers() const { return workers.size(); }
  int num_comparisons() const { return static_cast<int>(comparisons.size()); }

  /// Gold map keyed by item id instead of dense index.
  std::map<std::string, double> gold_by_id() const;
};

/// Validates rows, normalizes them to winner-first orientation and assigns
/// dense indices in order of first appearance.
///
/// Throws DimensionMismatch if feature vectors differ in length,
/// SelfComparison if an item is compared with itself, UnknownItem if a gold
/// entry names an unregistered item.
Dataset build_dataset(const std::vector<RawComparison>& rows,
                      const std::map<std::string, double>& gold = {});

/// Inverse of the ingest normalization: reconstructs the rows in their
/// original left/right presentation.
std::vector<RawComparison> export_rows(const Dataset& dataset);

/// Attaches (replaces) gold labels on an already built dataset.
void attach_gold(Dataset& dataset, const std::map<std::string, double>& gold);

}  // namespace crowdrank

#endif  // CROWDRANK_DATASET_HPP
