#include "crowdrank/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <thread>
#include <tuple>

#include "crowdrank/csv.hpp"
#include "crowdrank/errors.hpp"
#include "crowdrank/fit.hpp"
#include "crowdrank/metrics.hpp"
#include "crowdrank/models.hpp"

namespace crowdrank {

namespace {

std::string padded_id(const std::string& prefix, int index, int max_index) {
  int width = 1;
  for (int v = max_index; v >= 10; v /= 10) ++width;
  std::string digits = std::to_string(index);
  return prefix + std::string(width - digits.size(), '0') + digits;
}

// Distinct indices 0..limit-1 via partial Fisher-Yates.
std::vector<int> sample_distinct(std::vector<int>& pool, int count,
                                 std::mt19937_64& rng) {
  std::vector<int> chosen(count);
  for (int v = 0; v < count; ++v) {
    std::uniform_int_distribution<int> pick(v, static_cast<int>(pool.size()) - 1);
    std::swap(pool[v], pool[pick(rng)]);
    chosen[v] = pool[v];
  }
  return chosen;
}

std::vector<double> flipped(const std::vector<double>& features) {
  std::vector<double> out(features.size());
  for (std::size_t i = 0; i < features.size(); ++i)
    out[i] = features[i] == 0.0 ? 0.0 : -features[i];
  return out;
}

void push_vote(Dataset& ds, int worker, int left, int right, bool left_won,
               const std::vector<double>& task_features) {
  Comparison c;
  c.worker = worker;
  if (left_won) {
    c.winner = left;
    c.loser = right;
    c.winner_left = true;
    c.features = task_features;
  } else {
    c.winner = right;
    c.loser = left;
    c.winner_left = false;
    c.features = flipped(task_features);
  }
  ds.comparisons.push_back(std::move(c));
}

}  // namespace

std::uint64_t seed_mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  auto splitmix = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  };
  return splitmix(splitmix(splitmix(seed) ^ a) ^ b);
}

SimOutput generate(const SimConfig& config) {
  const long long max_pairs =
      static_cast<long long>(config.n_items) * (config.n_items - 1) / 2;
  if (config.n_pairs > max_pairs)
    throw DomainError("n_pairs exceeds the number of distinct item pairs");
  if (config.votes_per_pair > config.n_workers)
    throw DomainError("votes_per_pair exceeds the number of workers");
  if (config.n_items < 2 || config.n_workers < 1)
    throw DomainError("need at least two items and one worker");

  std::mt19937_64 rng(config.seed);
  const int n = config.n_items;
  const int k = config.n_workers;
  const int m = config.n_features + (config.include_side_feature ? 1 : 0);

  Dataset ds;
  ds.feature_dim = m;
  for (int i = 0; i < n; ++i) ds.items.add(padded_id("item_", i, n - 1));
  for (int w = 0; w < k; ++w) ds.workers.add(padded_id("worker_", w, k - 1));

  // Ground-truth qualities: the integers 0..n-1 assigned without replacement.
  std::vector<double> gold(n);
  {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int i = 0; i < n; ++i) {
      gold[i] = static_cast<double>(perm[i]);
      ds.gold.emplace(i, gold[i]);
    }
  }

  // Unique unordered pairs, preserving the presented (left, right) order in
  // which each pair was drawn.
  std::vector<std::pair<int, int>> pairs;
  {
    std::set<std::pair<int, int>> seen;
    std::uniform_int_distribution<int> pick(0, n - 1);
    while (static_cast<int>(pairs.size()) < config.n_pairs) {
      const int a = pick(rng);
      const int b = pick(rng);
      if (a == b) continue;
      if (!seen.insert(std::minmax(a, b)).second) continue;
      pairs.emplace_back(a, b);
    }
  }

  // Per-task feature vectors, shared by every vote on the task.
  std::vector<std::vector<double>> task_features(pairs.size());
  {
    std::uniform_int_distribution<int> tri(-1, 1);
    for (auto& x : task_features) {
      x.reserve(m);
      if (config.include_side_feature) x.push_back(1.0);
      for (int l = 0; l < config.n_features; ++l)
        x.push_back(static_cast<double>(tri(rng)));
    }
  }

  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> gamma(k);
  std::vector<std::vector<double>> reaction(k, std::vector<double>(m));
  for (int w = 0; w < k; ++w) {
    gamma[w] = config.fixed_gamma ? *config.fixed_gamma : normal(rng);
    for (int l = 0; l < m; ++l) reaction[w][l] = normal(rng);
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<int> worker_pool(k);
  std::iota(worker_pool.begin(), worker_pool.end(), 0);
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    const auto [left, right] = pairs[t];
    const std::vector<int> voters =
        sample_distinct(worker_pool, config.votes_per_pair, rng);
    for (int w : voters) {
      const double g = logistic(gamma[w]);
      double z = 0.0;
      for (int l = 0; l < m; ++l) z += task_features[t][l] * reaction[w][l];
      const double p_left =
          g * logistic(gold[left] - gold[right]) + (1.0 - g) * logistic(z);
      push_vote(ds, w, left, right, unit(rng) < p_left, task_features[t]);
    }
  }

  SimOutput out;
  out.truth.kind = ModelKind::FactorBT;
  out.truth.item_ids = ds.items.ids();
  out.truth.worker_ids = ds.workers.ids();
  out.truth.scores = gold;
  out.truth.virtual_score = 0.0;
  out.truth.worker_gamma = std::move(gamma);
  out.truth.worker_reaction = std::move(reaction);
  out.dataset = std::move(ds);
  return out;
}

SerpOutput generate_serp(const SerpConfig& config) {
  if (config.n_queries < 1 || config.n_workers < 1)
    throw DomainError("need at least one query and one worker");
  if (config.votes_per_task > config.n_workers)
    throw DomainError("votes_per_task exceeds the number of workers");

  std::mt19937_64 rng(config.seed);
  const int q = config.n_queries;
  const int k = config.n_workers;

  Dataset ds;
  ds.feature_dim = 2;  // f_1 side indicator, f_2 better-system marker
  std::vector<double> truth_scores;
  std::vector<std::pair<std::string, std::string>> system_pairs;
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<int> better_page(q), other_page(q);
  for (int i = 0; i < q; ++i) {
    const std::string a = padded_id("serpA_q", i, q - 1);
    const std::string b = padded_id("serpB_q", i, q - 1);
    better_page[i] = ds.items.add(a);
    other_page[i] = ds.items.add(b);
    const double base = normal(rng);
    truth_scores.push_back(base + config.better_offset);
    truth_scores.push_back(base);
    system_pairs.emplace_back(a, b);
  }
  for (int i = 0; i < 2 * q; ++i) ds.gold.emplace(i, truth_scores[i]);
  for (int w = 0; w < k; ++w) ds.workers.add(padded_id("worker_", w, k - 1));

  std::vector<double> gamma(k);
  std::vector<std::vector<double>> reaction(k, std::vector<double>(2));
  for (int w = 0; w < k; ++w) {
    gamma[w] = normal(rng);
    reaction[w][0] = normal(rng);
    reaction[w][1] = normal(rng);
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<int> worker_pool(k);
  std::iota(worker_pool.begin(), worker_pool.end(), 0);
  for (int i = 0; i < q; ++i) {
    const bool better_left = unit(rng) < 0.5;
    const int left = better_left ? better_page[i] : other_page[i];
    const int right = better_left ? other_page[i] : better_page[i];
    const std::vector<double> x = {1.0, better_left ? 1.0 : -1.0};
    const double s_left = truth_scores[left];
    const double s_right = truth_scores[right];
    const std::vector<int> voters =
        sample_distinct(worker_pool, config.votes_per_task, rng);
    for (int w : voters) {
      const double g = logistic(gamma[w]);
      const double z = x[0] * reaction[w][0] + x[1] * reaction[w][1];
      const double p_left =
          g * logistic(s_left - s_right) + (1.0 - g) * logistic(z);
      push_vote(ds, w, left, right, unit(rng) < p_left, x);
    }
  }

  SerpOutput out;
  out.truth.kind = ModelKind::FactorBT;
  out.truth.item_ids = ds.items.ids();
  out.truth.worker_ids = ds.workers.ids();
  out.truth.scores = std::move(truth_scores);
  out.truth.worker_gamma = std::move(gamma);
  out.truth.worker_reaction = std::move(reaction);
  out.system_pairs = std::move(system_pairs);
  out.dataset = std::move(ds);
  return out;
}

namespace {

struct Task {
  int left;
  int right;
  std::vector<double> features;  // left-vs-right orientation

  auto tie() const { return std::tie(left, right, features); }
  bool operator<(const Task& o) const { return tie() < o.tie(); }
  bool operator==(const Task& o) const { return tie() == o.tie(); }
};

std::vector<Task> distinct_tasks(const Dataset& ds) {
  std::vector<Task> tasks;
  tasks.reserve(ds.comparisons.size());
  for (const Comparison& c : ds.comparisons) {
    Task t;
    if (c.winner_left) {
      t.left = c.winner;
      t.right = c.loser;
      t.features = c.features;
    } else {
      t.left = c.loser;
      t.right = c.winner;
      t.features = flipped(c.features);
    }
    tasks.push_back(std::move(t));
  }
  std::sort(tasks.begin(), tasks.end());
  tasks.erase(std::unique(tasks.begin(), tasks.end()), tasks.end());
  return tasks;
}

}  // namespace

Dataset inject_spammers(const Dataset& dataset, const SpammerSpec& spec,
                        double fraction, std::uint64_t seed) {
  if (fraction < 0.0)
    throw DomainError("spammer fraction must be nonnegative");
  for (const SpammerPolicy& policy : spec.kinds)
    if (policy.kind == SpammerPolicy::Kind::AttributeBias &&
        (policy.feature < 0 || policy.feature >= dataset.feature_dim))
      throw UnknownFeature("attribute-bias feature index " +
                           std::to_string(policy.feature) +
                           " outside 0.." +
                           std::to_string(dataset.feature_dim - 1));

  Dataset out = dataset;
  const int k = dataset.num_workers();
  const int n_spammers = static_cast<int>(std::floor(fraction * k));
  if (n_spammers == 0 || dataset.comparisons.empty()) return out;

  const int tasks_per =
      spec.tasks_per_spammer > 0
          ? spec.tasks_per_spammer
          : static_cast<int>(std::llround(
                static_cast<double>(dataset.num_comparisons()) / k));
  const std::vector<Task> tasks = distinct_tasks(dataset);

  // Spammer counts per policy by largest remainder.
  std::vector<int> counts(spec.kinds.size(), 0);
  {
    double total_weight = 0.0;
    for (const SpammerPolicy& p : spec.kinds) total_weight += p.weight;
    if (total_weight <= 0.0)
      throw DomainError("spammer policy weights must sum to a positive value");
    int assigned = 0;
    std::vector<std::pair<double, std::size_t>> remainders;
    for (std::size_t i = 0; i < spec.kinds.size(); ++i) {
      const double exact = n_spammers * spec.kinds[i].weight / total_weight;
      counts[i] = static_cast<int>(std::floor(exact));
      assigned += counts[i];
      remainders.emplace_back(-(exact - counts[i]), i);
    }
    std::sort(remainders.begin(), remainders.end());
    for (int r = 0; r < n_spammers - assigned; ++r)
      counts[remainders[static_cast<std::size_t>(r) % remainders.size()]
                 .second] += 1;
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, tasks.size() - 1);
  int spammer_index = 0;
  for (std::size_t policy_idx = 0; policy_idx < spec.kinds.size();
       ++policy_idx) {
    const SpammerPolicy& policy = spec.kinds[policy_idx];
    for (int s = 0; s < counts[policy_idx]; ++s, ++spammer_index) {
      std::string id = padded_id("spammer_", spammer_index,
                                 std::max(n_spammers - 1, 1));
      while (out.workers.contains(id)) id += "_";
      const int worker = out.workers.add(id);
      for (int t = 0; t < tasks_per; ++t) {
        const Task& task = tasks[pick(rng)];
        bool choose_left = true;
        if (policy.kind == SpammerPolicy::Kind::SideBias) {
          choose_left = policy.left;
        } else {
          const double v = task.features[static_cast<std::size_t>(
              policy.feature)];
          // The feature marks the item carrying the attribute; when it does
          // not distinguish the pair the spammer falls back to the left side.
          choose_left = v >= 0.0;
        }
        push_vote(out, worker, task.left, task.right, choose_left,
                  task.features);
      }
    }
  }
  return out;
}

std::string to_string(SweepMetric metric) {
  switch (metric) {
    case SweepMetric::Accuracy: return "accuracy";
    case SweepMetric::SystemWinProb: return "system_win_prob";
  }
  throw Error("InvalidMetric", "unhandled sweep metric");
}

std::vector<SweepSummaryRow> SweepResult::summary() const {
  std::vector<SweepSummaryRow> rows;
  for (const SweepCell& cell : cells) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const auto& r) {
      return r.model == cell.model && r.fraction == cell.fraction;
    });
    if (it == rows.end()) {
      rows.push_back({cell.model, cell.fraction, 0.0, 0});
      it = rows.end() - 1;
    }
    if (cell.ok) {
      it->mean += cell.value;
      it->n += 1;
    }
  }
  for (SweepSummaryRow& row : rows)
    row.mean = row.n > 0 ? row.mean / row.n
                         : std::numeric_limits<double>::quiet_NaN();
  return rows;
}

double SweepResult::mean_at(ModelKind model, double fraction) const {
  for (const SweepSummaryRow& row : summary())
    if (row.model == model && row.fraction == fraction) return row.mean;
  return std::numeric_limits<double>::quiet_NaN();
}

SweepResult robustness_sweep(
    const Dataset& dataset, const SpammerSpec& spec,
    const std::vector<ModelKind>& models, SweepMetric metric,
    const FitConfig& config,
    const std::vector<std::pair<std::string, std::string>>* system_pairs,
    int jobs) {
  if (metric == SweepMetric::Accuracy && dataset.gold.empty())
    throw Error("MissingGold", "accuracy sweep needs gold labels");
  if (metric == SweepMetric::SystemWinProb &&
      (system_pairs == nullptr || system_pairs->empty()))
    throw Error("MissingPairs", "system_win_prob sweep needs system pairs");

  const std::map<std::string, double> gold = dataset.gold_by_id();

  SweepResult result;
  result.metric = metric;
  result.cells.resize(spec.fractions.size() * spec.trials * models.size());

  // Work unit = one (fraction, trial) cell: inject once, fit every model.
  const int n_points = static_cast<int>(spec.fractions.size()) * spec.trials;
  const auto run_point = [&](int point) {
    const int fraction_idx = point / spec.trials;
    const int trial = point % spec.trials;
    const double fraction = spec.fractions[fraction_idx];
    const std::uint64_t cell_seed = seed_mix(
        config.seed, static_cast<std::uint64_t>(fraction_idx),
        static_cast<std::uint64_t>(trial));
    Dataset injected;
    std::string inject_error;
    try {
      injected = inject_spammers(dataset, spec, fraction, cell_seed);
    } catch (const std::exception& e) {
      inject_error = e.what();
    }
    for (std::size_t mi = 0; mi < models.size(); ++mi) {
      SweepCell& cell =
          result.cells[static_cast<std::size_t>(point) * models.size() + mi];
      cell.model = models[mi];
      cell.fraction = fraction;
      cell.trial = trial;
      if (!inject_error.empty()) {
        cell.ok = false;
        cell.error = inject_error;
        cell.value = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      try {
        const FitResult fit = fit_model(injected, models[mi], config);
        cell.value = metric == SweepMetric::Accuracy
                         ? accuracy(fit.params, gold)
                         : system_win_prob(fit.params, *system_pairs);
        cell.ok = true;
      } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = e.what();
        cell.value = std::numeric_limits<double>::quiet_NaN();
      }
    }
  };

  if (jobs <= 1) {
    for (int point = 0; point < n_points; ++point) run_point(point);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int n_threads = std::min(jobs, n_points);
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) {
      pool.emplace_back([&] {
        for (int point = next.fetch_add(1); point < n_points;
             point = next.fetch_add(1))
          run_point(point);
      });
    }
    for (std::thread& t : pool) t.join();
  }
  return result;
}

void write_sweep_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("IoError", "cannot write '" + path + "'");
  const std::string metric = to_string(result.metric);
  out << "model,metric,fraction,trial,value\n";
  for (const SweepCell& cell : result.cells) {
    out << to_string(cell.model) << ',' << metric << ','
        << format_double(cell.fraction) << ',' << cell.trial << ','
        << (cell.ok ? format_double(cell.value) : std::string("nan")) << '\n';
  }

  std::string summary_path = path;
  const std::size_t dot = summary_path.rfind('.');
  if (dot == std::string::npos)
    summary_path += "_summary";
  else
    summary_path.insert(dot, "_summary");
  std::ofstream sum(summary_path);
  if (!sum) throw Error("IoError", "cannot write '" + summary_path + "'");
  sum << "model,metric,fraction,mean\n";
  for (const SweepSummaryRow& row : result.summary()) {
    sum << to_string(row.model) << ',' << metric << ','
        << format_double(row.fraction) << ',' << format_double(row.mean)
        << '\n';
  }
}

}  // namespace crowdrank
