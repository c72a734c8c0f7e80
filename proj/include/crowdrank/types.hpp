#ifndef CROWDRANK_TYPES_HPP
#define CROWDRANK_TYPES_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace crowdrank {

enum class ModelKind { BT, CrowdBT, FactorBT, PairwiseHITS, Linear };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

/// Fitted (or true) parameters of a score-based model. Scores are indexed
/// densely; `item_ids`/`worker_ids` carry the index->id mapping so a
/// ModelParams is self-contained for serialization and evaluation.
///
/// Which optional groups are populated depends on the kind:
///   BT            scores
///   CrowdBT       scores + worker_eta
///   FactorBT      scores + worker_gamma + worker_reaction
///   PairwiseHITS  scores + worker_ability
///   Linear        scores + worker_gamma
struct ModelParams {
  ModelKind kind = ModelKind::BT;
  std::vector<std::string> item_ids;
  std::vector<std::string> worker_ids;
  std::vector<double> scores;
  double virtual_score = 0.0;
  std::vector<double> worker_eta;
  std::vector<double> worker_gamma;
  std::vector<std::vector<double>> worker_reaction;
  std::vector<double> worker_ability;

  int num_items() const { return static_cast<int>(scores.size()); }
  int num_workers() const { return static_cast<int>(worker_ids.size()); }

  /// Score lookup table keyed by item id.
  std::unordered_map<std::string, double> score_map() const;
};

/// Shared fitting options for the likelihood-based models.
struct FitConfig {
  double regularization_lambda = 1.0;
  int max_iterations = 1000;
  double gradient_tolerance = 1e-5;
  std::uint64_t seed = 0;

  /// When false only item scores (and the virtual score) are optimized and
  /// the worker parameters stay at their initial values.
  bool fit_worker_params = true;

  double crowdbt_eta_init = 0.9;

  /// L1 penalty for the linear model; unset selects it by cross-validation.
  std::optional<double> l1_penalty;
};

/// Items ordered best first; rank of the item at position p is p+1.
struct Ranking {
  std::vector<std::string> items_by_rank;

  int num_items() const { return static_cast<int>(items_by_rank.size()); }
  /// 1-based rank; throws UnknownItem for ids outside the ranking.
  int rank_of(const std::string& id) const;
};

/// Sorts items by descending score; equal scores are ordered by item id
/// ascending so the result is deterministic.
Ranking ranking_from_scores(const ModelParams& params);

}  // namespace crowdrank

#endif  // CROWDRANK_TYPES_HPP
