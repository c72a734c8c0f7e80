#include "crowdrank/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "crowdrank/errors.hpp"
#include "crowdrank/models.hpp"

namespace crowdrank {

double accuracy(const ModelParams& params,
                const std::map<std::string, double>& gold,
                bool half_credit_ties) {
  const auto scores = params.score_map();
  std::vector<std::pair<double, double>> entries;  // (gold, score)
  entries.reserve(gold.size());
  for (const auto& [id, g] : gold) {
    const auto it = scores.find(id);
    if (it == scores.end())
      throw UnknownItem("no fitted score for gold item '" + id + "'");
    entries.emplace_back(g, it->second);
  }

  long long ordered = 0;
  double agreeing = 0.0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t j = 0; j < entries.size(); ++j) {
      if (!(entries[i].first > entries[j].first)) continue;
      ++ordered;
      if (entries[i].second > entries[j].second)
        agreeing += 1.0;
      else if (half_credit_ties && entries[i].second == entries[j].second)
        agreeing += 0.5;
    }
  }
  if (ordered == 0)
    throw NoOrderedPairs("gold labels contain no strictly ordered pair");
  return agreeing / static_cast<double>(ordered);
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw DimensionMismatch("pearson needs two equally sized samples of "
                            "length >= 2");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw ZeroVariance("pearson is undefined for a constant sample");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double system_win_prob(
    const ModelParams& params,
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  if (pairs.empty()) throw Error("EmptyInput", "no system pairs given");
  const auto scores = params.score_map();
  const auto score_of = [&](const std::string& id) {
    const auto it = scores.find(id);
    if (it == scores.end())
      throw UnknownItem("no fitted score for item '" + id + "'");
    return it->second;
  };
  double total = 0.0;
  for (const auto& [a, b] : pairs) total += logistic(score_of(a) - score_of(b));
  return total / static_cast<double>(pairs.size());
}

}  // namespace crowdrank
