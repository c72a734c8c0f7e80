#ifndef CROWDRANK_CSV_HPP
#define CROWDRANK_CSV_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "crowdrank/dataset.hpp"

namespace crowdrank {

/// Shortest round-trip decimal representation ('.' decimal point).
std::string format_double(double value);

/// Canonical comparison schema:
///   worker_id,left_item,right_item,winner,f_1,...,f_M
/// with winner in {left,right} and features in left-vs-right orientation.
/// UTF-8, comma separated, '.' decimal point.
Dataset read_comparisons_csv(const std::string& path);
void write_comparisons_csv(const Dataset& dataset, const std::string& path);

/// Gold schema: item_id,gold_score
std::map<std::string, double> read_gold_csv(const std::string& path);
void write_gold_csv(const std::map<std::string, double>& gold,
                    const std::string& path);

/// System-pair schema: item_a,item_b (one row per query)
std::vector<std::pair<std::string, std::string>> read_pairs_csv(
    const std::string& path);
void write_pairs_csv(
    const std::vector<std::pair<std::string, std::string>>& pairs,
    const std::string& path);

struct ReadingConversion {
  Dataset dataset;
  std::map<std::string, double> gold;  // difficulty levels where provided
  int rows_total = 0;
  int rows_dropped = 0;  // "can't decide" answers
};

/// Converts the reading-difficulty comparison export
///   worker_id,passage_a,passage_b,answer,gold_a,gold_b
/// (answer: "A", "B" or a can't-decide variant; gold levels optional) into
/// the canonical schema. Passage A is the left item; undecided rows are
/// dropped; the emitted single feature f_1 is the side indicator (+1 left).
ReadingConversion convert_reading_difficulty(const std::string& path);

}  // namespace crowdrank

#endif  // CROWDRANK_CSV_HPP
