#include <cmath>
#include <random>

#include "crowdrank/errors.hpp"
#include "crowdrank/models.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace crowdrank;
using crowdrank::testing::random_params;
using crowdrank::testing::random_small_dataset;
using crowdrank::testing::uniform;

TEST_CASE("logistic: values and symmetry") {
  CHECK(logistic(0.0) == 0.5);
  CHECK(logistic(1.0) == doctest::Approx(0.7310585786).epsilon(1e-9));
  for (double x : {-3.0, -0.5, 0.2, 4.0, 25.0})
    CHECK(logistic(x) + logistic(-x) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("logistic: stable and monotone out to +-700") {
  double prev = 0.0;
  for (double x = -700.0; x <= 700.0; x += 3.5) {
    const double y = logistic(x);
    CHECK(std::isfinite(y));
    CHECK(y >= prev);
    prev = y;
  }
  CHECK(logistic(-700.0) > 0.0);
  CHECK(logistic(700.0) <= 1.0);
}

TEST_CASE("bt_win_prob basics") {
  CHECK(bt_win_prob(1.3, 1.3) == 0.5);
  CHECK(bt_win_prob(1.0, 0.0) == doctest::Approx(0.7310585786).epsilon(1e-9));
  CHECK(bt_win_prob(2.0, -1.0) + bt_win_prob(-1.0, 2.0) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("bt_win_prob strictly increases in the score gap") {
  double prev = 0.0;
  for (double gap = -6.0; gap <= 6.0; gap += 0.25) {
    const double p = bt_win_prob(gap, 0.0);
    CHECK(p > prev);
    prev = p;
  }
}

TEST_CASE("crowdbt_win_prob limits") {
  CHECK(crowdbt_win_prob(0.7, -0.2, 1.0) == bt_win_prob(0.7, -0.2));
  CHECK(crowdbt_win_prob(0.7, -0.2, 0.0) == bt_win_prob(-0.2, 0.7));
  CHECK(crowdbt_win_prob(3.0, -1.0, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(crowdbt_win_prob(0.0, 0.0, 1.2), DomainError);
  CHECK_THROWS_AS(crowdbt_win_prob(0.0, 0.0, -0.1), DomainError);
}

TEST_CASE("factorbt_win_prob: unbiased-worker limit") {
  const std::vector<double> r = {0.7, -2.0};
  const std::vector<double> x = {1.0, -1.0};
  CHECK(factorbt_win_prob(1.2, 0.3, 50.0, r, x) ==
        doctest::Approx(bt_win_prob(1.2, 0.3)).epsilon(1e-10));
  // once the mixing weight rounds to exactly 1 the feature term vanishes
  // and the two probabilities agree bit for bit
  REQUIRE(logistic(50.0) == 1.0);
  for (double gap : {-2.5, 0.0, 0.4, 3.0})
    CHECK(factorbt_win_prob(gap, 0.0, 50.0, r, x) == bt_win_prob(gap, 0.0));
}

TEST_CASE("factorbt_win_prob: symmetric cases") {
  const std::vector<double> r = {0.7, -2.0};
  const std::vector<double> zero = {0.0, 0.0};
  CHECK(factorbt_win_prob(1.0, 1.0, 0.0, r, zero) ==
        doctest::Approx(0.5).epsilon(1e-15));
  // gap +1 through the score term, inner product -1 through the feature term
  const std::vector<double> r1 = {1.0};
  const std::vector<double> x1 = {-1.0};
  CHECK(factorbt_win_prob(1.0, 0.0, 0.0, r1, x1) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(factorbt_win_prob(0.0, 0.0, 0.0, r1, zero),
                  DimensionMismatch);
}

TEST_CASE("probability complementarity under orientation flip") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    const double si = uniform(rng, -3, 3);
    const double sj = uniform(rng, -3, 3);
    const double eta = uniform(rng, 0, 1);
    const double gamma = uniform(rng, -3, 3);
    std::vector<double> r = {uniform(rng, -2, 2), uniform(rng, -2, 2)};
    std::vector<double> x = {
        static_cast<double>(crowdrank::testing::uniform_int(rng, -1, 1)),
        static_cast<double>(crowdrank::testing::uniform_int(rng, -1, 1))};
    std::vector<double> xf = {x[0] == 0 ? 0.0 : -x[0],
                              x[1] == 0 ? 0.0 : -x[1]};
    CHECK(bt_win_prob(si, sj) + bt_win_prob(sj, si) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(crowdbt_win_prob(si, sj, eta) + crowdbt_win_prob(sj, si, eta) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(factorbt_win_prob(si, sj, gamma, r, x) +
              factorbt_win_prob(sj, si, gamma, r, xf) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("log_likelihood: empty data") {
  const Dataset ds;
  FitConfig cfg;
  cfg.regularization_lambda = 0.0;
  ModelParams p;
  p.kind = ModelKind::BT;
  CHECK(log_likelihood(ds, p, ModelKind::BT, cfg) == 0.0);
}

TEST_CASE("log_likelihood: single comparison oracles") {
  const Dataset ds = build_dataset({{"w1", "a", "b", true, {-1.0}}});
  FitConfig cfg;
  cfg.regularization_lambda = 0.0;

  ModelParams bt = init_default(ModelKind::BT, ds);
  CHECK(log_likelihood(ds, bt, ModelKind::BT, cfg) ==
        doctest::Approx(std::log(0.5)).epsilon(1e-14));

  // factorbt with gap 0 via scores but z = <x,r> = -1*1 = ... gamma = 0,
  // s_a - s_b = 1, z = -1: the mixture lands exactly on 1/2.
  ModelParams fp = init_default(ModelKind::FactorBT, ds);
  fp.scores[*ds.items.find("a")] = 1.0;
  fp.scores[*ds.items.find("b")] = 0.0;
  fp.worker_gamma[0] = 0.0;
  fp.worker_reaction[0] = {1.0};
  CHECK(log_likelihood(ds, fp, ModelKind::FactorBT, cfg) ==
        doctest::Approx(std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("log_likelihood: translation invariance") {
  std::mt19937_64 rng(23);
  const Dataset ds = random_small_dataset(rng);
  FitConfig cfg;
  cfg.regularization_lambda = 1.0;
  for (ModelKind kind :
       {ModelKind::BT, ModelKind::CrowdBT, ModelKind::FactorBT}) {
    FitConfig used = cfg;
    if (kind == ModelKind::BT) used.regularization_lambda = 0.0;
    ModelParams p = random_params(ds, kind, rng);
    const double base = log_likelihood(ds, p, kind, used);
    ModelParams shifted = p;
    for (double& s : shifted.scores) s += 0.8375;
    shifted.virtual_score += 0.8375;
    CHECK(log_likelihood(ds, shifted, kind, used) ==
          doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("log_likelihood: underflow to zero is an error") {
  const Dataset ds = build_dataset({{"w1", "a", "b", true, {}}});
  FitConfig cfg;
  cfg.regularization_lambda = 0.0;
  ModelParams p = init_default(ModelKind::BT, ds);
  p.scores[*ds.items.find("a")] = -800.0;
  p.scores[*ds.items.find("b")] = 0.0;
  CHECK_THROWS_AS(log_likelihood(ds, p, ModelKind::BT, cfg),
                  NonFiniteLikelihood);
}

TEST_CASE("gradient: empty dataset is all zeros") {
  const Dataset ds;
  FitConfig cfg;
  cfg.regularization_lambda = 0.0;
  ModelParams p;
  p.kind = ModelKind::BT;
  const ModelParams g = gradient(ds, p, ModelKind::BT, cfg);
  CHECK(g.scores.empty());
  CHECK(g.virtual_score == 0.0);
}

TEST_CASE("gradient: BT single comparison at equal scores") {
  const Dataset ds = build_dataset({{"w1", "a", "b", true, {}}});
  FitConfig cfg;
  cfg.regularization_lambda = 0.0;
  const ModelParams p = init_default(ModelKind::BT, ds);
  const ModelParams g = gradient(ds, p, ModelKind::BT, cfg);
  CHECK(g.scores[*ds.items.find("a")] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(g.scores[*ds.items.find("b")] == doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("gradient matches central finite differences") {
  std::mt19937_64 rng(31);
  for (ModelKind kind :
       {ModelKind::BT, ModelKind::CrowdBT, ModelKind::FactorBT}) {
    for (int rep = 0; rep < 20; ++rep) {
      const Dataset ds = random_small_dataset(rng);
      const ModelParams p = random_params(ds, kind, rng);
      FitConfig cfg;
      cfg.regularization_lambda = rep % 2 == 0 ? 1.0 : 0.0;
      CHECK(max_gradient_error(ds, p, kind, cfg, 1e-5) < 1e-6);
    }
  }
}

TEST_CASE("log_likelihood: config invariants are enforced") {
  const Dataset ds = build_dataset({{"w1", "a", "b", true, {}}});
  const ModelParams p = init_default(ModelKind::BT, ds);
  FitConfig bad;
  bad.regularization_lambda = -0.5;
  CHECK_THROWS_AS(log_likelihood(ds, p, ModelKind::BT, bad), DomainError);
  bad.regularization_lambda = 1.0;
  bad.gradient_tolerance = 0.0;
  CHECK_THROWS_AS(gradient(ds, p, ModelKind::BT, bad), DomainError);
}
