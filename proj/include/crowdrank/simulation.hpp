#ifndef CROWDRANK_SIMULATION_HPP
#define CROWDRANK_SIMULATION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crowdrank/dataset.hpp"
#include "crowdrank/types.hpp"

namespace crowdrank {

/// Synthetic-study generator configuration. Gold qualities are the integers
/// 0..n_items-1 assigned without replacement; every task (pair) carries
/// n_features components drawn uniformly from {-1,0,+1}; worker gamma and
/// reaction components are standard normal; each pair is voted on by
/// votes_per_pair distinct workers through the factor-mixture probability.
struct SimConfig {
  int n_items = 100;
  int n_pairs = 400;  // unique unordered pairs
  int n_workers = 100;
  int votes_per_pair = 10;
  int n_features = 2;
  /// Prepends a presentation-side feature (+1 for the left item) so the
  /// generated data carries position bias signal like the hand-labeled sets.
  bool include_side_feature = false;
  /// Overrides every worker's gamma with a fixed value (testing hook).
  std::optional<double> fixed_gamma;
  std::uint64_t seed = 0;
};

struct SimOutput {
  Dataset dataset;      // includes gold = true qualities
  ModelParams truth;    // FactorBT-shaped generating parameters
};

SimOutput generate(const SimConfig& config);

/// Two-system comparison generator mirroring the structure of the
/// industrial SERP studies: per query one page from each system, the first
/// system better by `better_offset`, presentation side randomized, feature 1
/// the side indicator and feature 2 a marker of the better system's page.
struct SerpConfig {
  int n_queries = 133;
  int n_workers = 194;
  int votes_per_task = 20;
  double better_offset = 1.0;
  std::uint64_t seed = 0;
};

struct SerpOutput {
  Dataset dataset;
  ModelParams truth;
  /// (better-system page, other page) per query, for system_win_prob.
  std::vector<std::pair<std::string, std::string>> system_pairs;
};

SerpOutput generate_serp(const SerpConfig& config);

/// Deterministic answer policy of an injected spammer.
struct SpammerPolicy {
  enum class Kind { SideBias, AttributeBias };
  Kind kind = Kind::SideBias;
  bool left = true;   // SideBias: the side always chosen
  int feature = 0;    // AttributeBias: 0-based feature index
  double weight = 1.0;
};

struct SpammerSpec {
  std::vector<SpammerPolicy> kinds = {SpammerPolicy{}};
  std::vector<double> fractions = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  int trials = 10;
  /// Tasks each spammer answers; 0 means the mean number of tasks per
  /// original worker, rounded to the nearest integer.
  int tasks_per_spammer = 0;
};

/// Returns a copy of the dataset extended with floor(fraction * K) new
/// workers. Each one answers tasks drawn uniformly with replacement from the
/// dataset's distinct presented tasks, deterministically per its policy
/// (attribute-bias falls back to the left side when the named feature does
/// not distinguish the pair). Throws UnknownFeature for an out-of-range
/// feature index.
Dataset inject_spammers(const Dataset& dataset, const SpammerSpec& spec,
                        double fraction, std::uint64_t seed);

enum class SweepMetric { Accuracy, SystemWinProb };

std::string to_string(SweepMetric metric);

struct SweepCell {
  ModelKind model;
  double fraction = 0.0;
  int trial = 0;
  double value = 0.0;
  bool ok = true;
  std::string error;
};

struct SweepSummaryRow {
  ModelKind model;
  double fraction = 0.0;
  double mean = 0.0;
  int n = 0;
};

struct SweepResult {
  SweepMetric metric = SweepMetric::Accuracy;
  std::vector<SweepCell> cells;
  std::vector<SweepSummaryRow> summary() const;
  /// Mean metric for one model at one fraction (NaN if no successful cell).
  double mean_at(ModelKind model, double fraction) const;
};

/// Runs the full fraction x trial x model grid: injects spammers with a
/// cell-specific seed derived from hash(config.seed, fraction index, trial),
/// fits every model on the same injected dataset and records the metric.
/// Fit errors are recorded per cell, not fatal. `jobs` > 1 runs independent
/// cells in parallel; results are identical regardless of job count.
SweepResult robustness_sweep(
    const Dataset& dataset, const SpammerSpec& spec,
    const std::vector<ModelKind>& models, SweepMetric metric,
    const FitConfig& config,
    const std::vector<std::pair<std::string, std::string>>* system_pairs =
        nullptr,
    int jobs = 1);

/// Writes the tidy grid `model,metric,fraction,trial,value` to `path` and
/// per-fraction means to `<stem>_summary.csv` next to it.
void write_sweep_csv(const SweepResult& result, const std::string& path);

/// SplitMix64-based combination of a base seed with cell coordinates.
std::uint64_t seed_mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

}  // namespace crowdrank

#endif  // CROWDRANK_SIMULATION_HPP
