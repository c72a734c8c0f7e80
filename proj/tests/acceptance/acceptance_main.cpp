// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. The CLI binary path must be passed as argv[1] (used by
// the determinism criterion).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "crowdrank/csv.hpp"
#include "crowdrank/fit.hpp"
#include "crowdrank/init.hpp"
#include "crowdrank/metrics.hpp"
#include "crowdrank/models.hpp"
#include "crowdrank/simulation.hpp"
#include "crowdrank/types.hpp"

using namespace crowdrank;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSuiteSeed = 777;

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what,
            const std::string& detail) {
  std::printf("%s  criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL",
              criterion, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Simulated-study recovery

std::vector<double> ranks_of(const std::vector<double>& v) {
  std::vector<int> idx(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) idx[i] = static_cast<int>(i);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    out[idx[i]] = static_cast<double>(i);
  return out;
}

void criterion_1() {
  const int trials = 10;
  const double expected_acc = 0.51, expected_r1 = 0.50, expected_r2 = 0.47,
               expected_gamma = 0.81, expected_s = 0.92, window = 0.10;
  double acc = 0, r1 = 0, r2 = 0, gamma = 0, s = 0, gamma_rank = 0;
  for (int t = 0; t < trials; ++t) {
    SimConfig sim;
    sim.seed = seed_mix(kSuiteSeed, 1, t);
    const SimOutput out = generate(sim);
    FitConfig cfg;
    cfg.gradient_tolerance = 1e-4;
    cfg.max_iterations = 500;
    const FitResult fit = fit_model(out.dataset, ModelKind::FactorBT, cfg);
    acc += accuracy(fit.params, out.dataset.gold_by_id());
    std::vector<double> r1t, r1f, r2t, r2f;
    for (std::size_t w = 0; w < out.truth.worker_reaction.size(); ++w) {
      r1t.push_back(out.truth.worker_reaction[w][0]);
      r1f.push_back(fit.params.worker_reaction[w][0]);
      r2t.push_back(out.truth.worker_reaction[w][1]);
      r2f.push_back(fit.params.worker_reaction[w][1]);
    }
    r1 += pearson(r1t, r1f);
    r2 += pearson(r2t, r2f);
    gamma += pearson(out.truth.worker_gamma, fit.params.worker_gamma);
    gamma_rank += pearson(ranks_of(out.truth.worker_gamma),
                          ranks_of(fit.params.worker_gamma));
    s += pearson(out.truth.scores, fit.params.scores);
  }
  acc /= trials;
  r1 /= trials;
  r2 /= trials;
  gamma /= trials;
  gamma_rank /= trials;
  s /= trials;

  const auto inside = [&](double value, double expected) {
    return std::abs(value - expected) <= window;
  };
  const bool pass = inside(acc, expected_acc) && inside(r1, expected_r1) &&
                    inside(r2, expected_r2) &&
                    inside(gamma, expected_gamma) && inside(s, expected_s);
  std::ostringstream detail;
  detail << "acc " << fmt(acc) << " vs " << expected_acc
         << (inside(acc, expected_acc) ? "" : " OUT") << ", r1 " << fmt(r1)
         << " vs " << expected_r1 << (inside(r1, expected_r1) ? "" : " OUT")
         << ", r2 " << fmt(r2) << " vs " << expected_r2
         << (inside(r2, expected_r2) ? "" : " OUT") << ", gamma "
         << fmt(gamma) << " vs " << expected_gamma
         << (inside(gamma, expected_gamma) ? "" : " OUT") << ", s " << fmt(s)
         << " vs " << expected_s << (inside(s, expected_s) ? "" : " OUT")
         << ", tolerance +-" << window << "; diagnostic: gamma rank-corr "
         << fmt(gamma_rank) << ", concordance implied by s-pearson "
         << fmt(0.5 + std::asin(s) / 3.141592653589793);
  report(1, pass, "simulated-study parameter recovery", detail.str());
}

// ---------------------------------------------------------------------------
// 2. Gradient audit

Dataset random_small_dataset(std::mt19937_64& rng) {
  const auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  const int n = pick(2, 10);
  const int k = pick(1, 5);
  const int m = pick(1, 3);
  const int comparisons = pick(4, 30);
  std::vector<RawComparison> rows;
  for (int c = 0; c < comparisons; ++c) {
    RawComparison row;
    row.worker = "w" + std::to_string(pick(0, k - 1));
    int a = pick(0, n - 1);
    int b = pick(0, n - 2);
    if (b >= a) ++b;
    row.left_item = "i" + std::to_string(a);
    row.right_item = "i" + std::to_string(b);
    row.left_won = pick(0, 1) == 1;
    for (int l = 0; l < m; ++l)
      row.features.push_back(static_cast<double>(pick(-1, 1)));
    rows.push_back(std::move(row));
  }
  return build_dataset(rows);
}

void criterion_2() {
  std::mt19937_64 rng(seed_mix(kSuiteSeed, 2, 0));
  const auto real = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  double worst = 0.0;
  for (ModelKind kind :
       {ModelKind::BT, ModelKind::CrowdBT, ModelKind::FactorBT}) {
    for (int rep = 0; rep < 20; ++rep) {
      const Dataset ds = random_small_dataset(rng);
      ModelParams p = init_default(kind, ds);
      for (double& v : p.scores) v = real(-1.5, 1.5);
      p.virtual_score = real(-0.5, 0.5);
      for (double& v : p.worker_eta) v = real(0.1, 0.9);
      for (double& v : p.worker_gamma) v = real(-1.5, 1.5);
      for (auto& r : p.worker_reaction)
        for (double& v : r) v = real(-1.5, 1.5);
      FitConfig cfg;
      cfg.regularization_lambda = rep % 2 == 0 ? 1.0 : 0.0;
      worst = std::max(worst, max_gradient_error(ds, p, kind, cfg, 1e-5));
    }
  }
  std::ostringstream detail;
  detail << "max relative error " << worst << " over 60 instances, limit 1e-6";
  report(2, worst < 1e-6, "analytic gradients match central differences",
         detail.str());
}

// ---------------------------------------------------------------------------
// 3. Likelihood-oracle equivalence

void criterion_3() {
  std::vector<RawComparison> rows = {
      {"w1", "a", "b", true, {}},  {"w1", "a", "b", true, {}},
      {"w1", "b", "a", true, {}},  {"w2", "b", "c", true, {}},
      {"w2", "b", "c", true, {}},  {"w2", "c", "b", true, {}},
      {"w1", "a", "c", true, {}},  {"w2", "c", "a", true, {}},
  };
  const Dataset ds = build_dataset(rows);
  FitConfig cfg;
  cfg.regularization_lambda = 0.0;
  cfg.gradient_tolerance = 1e-9;
  cfg.max_iterations = 500;
  const FitResult fit = fit_model(ds, ModelKind::BT, cfg);

  ModelParams probe = init_default(ModelKind::BT, ds);
  const int ia = *ds.items.find("a");
  const int ib = *ds.items.find("b");
  const int ic = *ds.items.find("c");
  double best = -1e300;
  for (double db = -3.0; db <= 3.0 + 1e-9; db += 0.01) {
    for (double dc = -3.0; dc <= 3.0 + 1e-9; dc += 0.01) {
      probe.scores[ia] = 0.0;
      probe.scores[ib] = db;
      probe.scores[ic] = dc;
      best = std::max(best, log_likelihood(ds, probe, ModelKind::BT, cfg));
    }
  }
  const double gap = std::abs(fit.report.final_objective - best);
  std::ostringstream detail;
  detail << "cg optimum " << fit.report.final_objective << ", grid optimum "
         << best << ", |gap| " << gap << " < 1e-3";
  report(3, gap < 1e-3 && fit.report.final_objective >= best - 1e-9,
         "conjugate gradient optimum matches the dense grid search",
         detail.str());
}

// ---------------------------------------------------------------------------
// 4. Limit-case equivalences

Dataset unanimous_order(const std::vector<std::string>& order,
                        std::mt19937_64& rng) {
  std::vector<RawComparison> rows;
  const auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (j > i + 1 && pick(0, 1) == 0) continue;  // adjacent pairs stay
      const int votes = pick(2, 4);
      for (int v = 0; v < votes; ++v) {
        RawComparison row;
        row.worker = "w" + std::to_string(pick(0, 3));
        const bool swap = pick(0, 1) == 1;
        row.left_item = swap ? order[j] : order[i];
        row.right_item = swap ? order[i] : order[j];
        row.left_won = !swap;
        row.features = {1.0};
        rows.push_back(std::move(row));
      }
    }
  }
  return build_dataset(rows);
}

void criterion_4() {
  std::mt19937_64 rng(seed_mix(kSuiteSeed, 4, 0));
  bool pass = true;
  std::string failure;
  for (int rep = 0; rep < 6 && pass; ++rep) {
    const int n = 4 + rep % 4;
    std::vector<std::string> order;
    for (int i = 0; i < n; ++i) order.push_back("it" + std::to_string(i));
    std::shuffle(order.begin(), order.end(), rng);
    const Dataset ds = unanimous_order(order, rng);

    FitConfig cfg;
    cfg.max_iterations = 400;
    cfg.gradient_tolerance = 1e-7;
    const FitResult bt = fit_model(ds, ModelKind::BT, cfg);
    const Ranking bt_rank = ranking_from_scores(bt.params);

    FitConfig frozen = cfg;
    frozen.fit_worker_params = false;

    ModelParams finit = init_factorbt(ds);
    for (double& g : finit.worker_gamma) g = 50.0;
    for (auto& r : finit.worker_reaction)
      for (double& v : r) v = 0.0;
    const FitResult factor =
        fit_likelihood_model(ds, ModelKind::FactorBT, frozen, &finit);

    ModelParams cinit = init_default(ModelKind::CrowdBT, ds, cfg);
    for (double& eta : cinit.worker_eta) eta = 1.0;
    const FitResult crowd =
        fit_likelihood_model(ds, ModelKind::CrowdBT, frozen, &cinit);

    if (ranking_from_scores(factor.params).items_by_rank !=
        bt_rank.items_by_rank) {
      pass = false;
      failure = "factorbt(gamma=+50) ranking differs on instance " +
                std::to_string(rep);
    } else if (ranking_from_scores(crowd.params).items_by_rank !=
               bt_rank.items_by_rank) {
      pass = false;
      failure = "crowdbt(eta=1) ranking differs on instance " +
                std::to_string(rep);
    } else if (bt_rank.items_by_rank != order) {
      pass = false;
      failure = "bt ranking misses the unanimous order on instance " +
                std::to_string(rep);
    }
  }
  report(4, pass, "frozen-worker limits reproduce the bt ranking exactly",
         pass ? "6 random unanimous instances, exact ranking match"
              : failure);
}

// ---------------------------------------------------------------------------
// 5. Spammer-robustness accuracy property

void criterion_5() {
  SimConfig sim;
  sim.include_side_feature = true;
  sim.seed = seed_mix(kSuiteSeed, 5, 0);
  const SimOutput out = generate(sim);
  SpammerSpec spec;  // side-bias left, fractions 0..1 step 0.2
  spec.trials = 10;
  FitConfig cfg;
  cfg.gradient_tolerance = 1e-4;
  cfg.max_iterations = 500;
  cfg.seed = seed_mix(kSuiteSeed, 5, 1);
  const SweepResult sweep = robustness_sweep(
      out.dataset, spec, {ModelKind::BT, ModelKind::FactorBT},
      SweepMetric::Accuracy, cfg, nullptr, 4);
  int failed_cells = 0;
  for (const SweepCell& cell : sweep.cells) failed_cells += cell.ok ? 0 : 1;
  const double factor_drop = sweep.mean_at(ModelKind::FactorBT, 0.0) -
                             sweep.mean_at(ModelKind::FactorBT, 1.0);
  const double bt_drop =
      sweep.mean_at(ModelKind::BT, 0.0) - sweep.mean_at(ModelKind::BT, 1.0);
  const bool pass =
      failed_cells == 0 && factor_drop < 0.05 && bt_drop > factor_drop;
  std::ostringstream detail;
  detail << "factorbt drop " << fmt(factor_drop) << " < 0.05, bt drop "
         << fmt(bt_drop) << " exceeds it, failed cells " << failed_cells;
  report(5, pass, "side-bias spammers degrade bt but not factorbt",
         detail.str());
}

// ---------------------------------------------------------------------------
// 6. Two-system win probability under side-bias spammers

void criterion_6() {
  SerpConfig scfg;
  scfg.seed = seed_mix(kSuiteSeed, 6, 0);
  const SerpOutput serp = generate_serp(scfg);
  SpammerSpec spec;
  spec.trials = 10;
  FitConfig cfg;
  cfg.gradient_tolerance = 1e-4;
  cfg.max_iterations = 500;
  cfg.seed = seed_mix(kSuiteSeed, 6, 1);
  const SweepResult sweep =
      robustness_sweep(serp.dataset, spec, {ModelKind::FactorBT},
                       SweepMetric::SystemWinProb, cfg, &serp.system_pairs, 4);
  int failed_cells = 0;
  for (const SweepCell& cell : sweep.cells) failed_cells += cell.ok ? 0 : 1;
  bool above = failed_cells == 0;
  std::ostringstream means;
  for (double f : spec.fractions) {
    const double m = sweep.mean_at(ModelKind::FactorBT, f);
    means << ' ' << fmt(m);
    above = above && m > 0.5;
  }
  report(6, above,
         "factorbt keeps the better system above 0.5 at every fraction",
         "means per fraction:" + means.str());
}

// ---------------------------------------------------------------------------
// 7. Metric unit identities

void criterion_7() {
  bool pass = true;
  std::string failure;

  ModelParams p;
  p.item_ids = {"a", "b", "c", "d"};
  p.scores = {4.0, 3.0, 2.0, 1.0};
  const std::map<std::string, double> gold = {
      {"a", 4.0}, {"b", 3.0}, {"c", 2.0}, {"d", 1.0}};
  if (accuracy(p, gold) != 1.0) {
    pass = false;
    failure = "accuracy of gold-equal scores is not 1.0";
  }

  const std::vector<std::pair<std::string, std::string>> fwd = {{"a", "b"},
                                                                {"c", "d"}};
  const std::vector<std::pair<std::string, std::string>> bwd = {{"b", "a"},
                                                                {"d", "c"}};
  if (std::abs(system_win_prob(p, fwd) + system_win_prob(p, bwd) - 1.0) >
      1e-12) {
    pass = false;
    failure = "system_win_prob complementarity off by more than 1e-12";
  }

  const std::vector<double> x = {1.0, 2.0, 5.0, 7.0};
  std::vector<double> up(x.size()), down(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    up[i] = 3.0 * x[i] - 2.0;
    down[i] = -0.5 * x[i] + 11.0;
  }
  if (std::abs(pearson(x, up) - 1.0) > 1e-12 ||
      std::abs(pearson(x, down) + 1.0) > 1e-12) {
    pass = false;
    failure = "pearson of affine pairs not +-1";
  }

  report(7, pass, "metric unit identities",
         pass ? "accuracy 1.0, complementarity 1e-12, pearson +-1" : failure);
}

// ---------------------------------------------------------------------------
// 8. CLI determinism

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

void criterion_8(const std::string& cli) {
  const fs::path dir =
      fs::temp_directory_path() / "crowdrank_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto path = [&](const std::string& name) {
    return (dir / name).string();
  };

  {
    std::ofstream cfg(path("sim.json"));
    cfg << "{\"kind\":\"factorbt\",\"n_items\":25,\"n_pairs\":60,"
           "\"n_workers\":20,\"votes_per_pair\":5,\"seed\":99}";
  }
  {
    std::ofstream spec(path("spec.json"));
    spec << "{\"kinds\":[{\"kind\":\"side\",\"side\":\"left\"}],"
            "\"fractions\":[0,0.5,1.0],\"trials\":2}";
  }

  const auto run = [&](const std::string& args) {
    const std::string cmd = cli + " " + args + " >> " +
                            path("log.txt") + " 2>&1";
    return std::system(cmd.c_str()) == 0;
  };

  bool pass = true;
  std::string failure;
  for (int round = 0; round < 2 && pass; ++round) {
    const std::string tag = std::to_string(round);
    if (!run("simulate --config " + path("sim.json") + " --out " +
             path("data" + tag + ".csv") + " --truth " +
             path("truth" + tag + ".json") + " --gold " +
             path("gold" + tag + ".csv")) ||
        !run("fit --model factorbt --data " + path("data" + tag + ".csv") +
             " --seed 5 --tol 1e-4 --max-iter 300 --out " +
             path("params" + tag + ".json")) ||
        !run("sweep --data " + path("data" + tag + ".csv") + " --gold " +
             path("gold" + tag + ".csv") + " --spammers " +
             path("spec.json") +
             " --models bt,factorbt --metric accuracy --seed 5 --tol 1e-3 "
             "--max-iter 150 --jobs 2 --out " +
             path("sweep" + tag + ".csv"))) {
      pass = false;
      failure = "a CLI command exited nonzero (see " + path("log.txt") + ")";
    }
  }
  if (pass) {
    for (const std::string name :
         {"data", "truth", "gold", "params", "sweep"}) {
      const std::string ext = name == "truth" || name == "params"
                                  ? ".json"
                                  : ".csv";
      if (slurp(path(name + "0" + ext)) != slurp(path(name + "1" + ext))) {
        pass = false;
        failure = name + ext + " differs between identically seeded runs";
        break;
      }
    }
    if (pass &&
        slurp(path("sweep0_summary.csv")) != slurp(path("sweep1_summary.csv"))) {
      pass = false;
      failure = "sweep summary differs between identically seeded runs";
    }
  }
  report(8, pass, "seeded CLI runs produce byte-identical outputs",
         pass ? "simulate, fit and sweep (jobs=2) compared byte-for-byte"
              : failure);
  fs::remove_all(dir);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-crowdrank-cli>\n", argv[0]);
    return 64;
  }
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8(argv[1]);
  std::printf("%d of 8 criteria failed\n", g_failures);
  return g_failures;
}
