#include <algorithm>
#include <random>

#include "crowdrank/hits.hpp"
#include "crowdrank/types.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace crowdrank;

TEST_CASE("hits: single comparison solves the one-equation system") {
  const Dataset ds = build_dataset({{"w1", "a", "b", true, {}}});
  HitsReport rep;
  const ModelParams p = hits_fit(ds, 100, 1e-6, &rep);
  CHECK(p.scores[*ds.items.find("a")] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(p.scores[*ds.items.find("b")] == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(p.worker_ability[0] == 1.0);
  CHECK(rep.converged);
  CHECK(rep.components == 1);
}

TEST_CASE("hits: unanimous full coverage recovers the order exactly") {
  const std::vector<std::string> order = {"a", "b", "c", "d"};
  const Dataset ds = crowdrank::testing::unanimous_chain(order, 3, 3);
  HitsReport rep;
  const ModelParams p = hits_fit(ds, 100, 1e-9, &rep);
  CHECK(ranking_from_scores(p).items_by_rank == order);
  CHECK(rep.converged);
  for (double r : p.worker_ability) CHECK(r == 1.0);
  // and the ranking is already in place after the first round
  const ModelParams first = hits_fit(ds, 1, 1e-9);
  CHECK(ranking_from_scores(first).items_by_rank == order);
}

TEST_CASE("hits: gauge holds after every round") {
  std::mt19937_64 rng(77);
  const Dataset ds = crowdrank::testing::random_small_dataset(rng);
  for (int rounds : {1, 2, 3, 7}) {
    const ModelParams p = hits_fit(ds, rounds, 1e-15);
    double sum = 0.0;
    for (double s : p.scores) sum += s;
    CHECK(std::abs(sum) < 1e-9);
  }
}

TEST_CASE("hits: abilities stay within [0,1]") {
  std::mt19937_64 rng(78);
  for (int rep = 0; rep < 20; ++rep) {
    const Dataset ds = crowdrank::testing::random_small_dataset(rng);
    const ModelParams p = hits_fit(ds);
    for (double r : p.worker_ability) {
      CHECK(r >= 0.0);
      CHECK(r <= 1.0);
    }
  }
}

TEST_CASE("hits: a random answerer scores a lower ability") {
  // Ten consistent workers vote the chain order on every pair of five
  // items; one extra worker answers by coin flip.
  const std::vector<std::string> order = {"a", "b", "c", "d", "e"};
  std::vector<RawComparison> rows;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j)
      for (int w = 0; w < 10; ++w)
        rows.push_back(
            {"w" + std::to_string(w), order[i], order[j], true, {}});
  std::mt19937_64 rng(123);
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j)
      rows.push_back({"random", order[i], order[j],
                      std::uniform_int_distribution<int>(0, 1)(rng) == 1, {}});
  const Dataset ds = build_dataset(rows);
  const ModelParams p = hits_fit(ds);
  const double r_random = p.worker_ability[*ds.workers.find("random")];
  for (int w = 0; w < 10; ++w)
    CHECK(r_random <
          p.worker_ability[*ds.workers.find("w" + std::to_string(w))]);
}

TEST_CASE("hits: disconnected graph is signaled, gauge per component") {
  std::vector<RawComparison> rows = {
      {"w1", "a", "b", true, {}},
      {"w1", "c", "d", true, {}},
      {"w2", "c", "d", false, {}},
      {"w2", "c", "d", true, {}},
  };
  const Dataset ds = build_dataset(rows);
  HitsReport rep;
  const ModelParams p = hits_fit(ds, 100, 1e-9, &rep);
  CHECK(rep.components == 2);
  const double sum_ab =
      p.scores[*ds.items.find("a")] + p.scores[*ds.items.find("b")];
  const double sum_cd =
      p.scores[*ds.items.find("c")] + p.scores[*ds.items.find("d")];
  CHECK(std::abs(sum_ab) < 1e-9);
  CHECK(std::abs(sum_cd) < 1e-9);
}
