#ifndef CROWDRANK_METRICS_HPP
#define CROWDRANK_METRICS_HPP

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "crowdrank/types.hpp"

namespace crowdrank {

/// Fraction of strictly gold-ordered item pairs whose fitted scores agree:
///     sum 1(g_i > g_j and s_i > s_j) / sum 1(g_i > g_j).
/// Score ties count as failures; with half_credit_ties they count 1/2.
/// Throws NoOrderedPairs when gold contains no strict order and UnknownItem
/// when a gold id has no fitted score.
double accuracy(const ModelParams& params,
                const std::map<std::string, double>& gold,
                bool half_credit_ties = false);

/// Sample Pearson correlation. Throws DimensionMismatch on length mismatch
/// (or length < 2) and ZeroVariance when either argument is constant.
double pearson(std::span<const double> x, std::span<const double> y);

/// Mean over the given (first-system page, second-system page) pairs of the
/// probability that the first beats the second under the fitted scores:
///     (1/Q) * sum_q logistic(s_Aq - s_Bq).
double system_win_prob(
    const ModelParams& params,
    const std::vector<std::pair<std::string, std::string>>& pairs);

}  // namespace crowdrank

#endif  // CROWDRANK_METRICS_HPP
