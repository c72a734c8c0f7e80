#include "crowdrank/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "crowdrank/errors.hpp"

namespace crowdrank {

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

// RFC-4180 style field splitting; quotes only matter at field boundaries.
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"' && field.empty()) {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += ch;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& field, const std::string& path,
                    int line_no) {
  const std::string t = trim(field);
  double value = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw ParseError(path + ":" + std::to_string(line_no) +
                     ": not a number: '" + field + "'");
  return value;
}

std::vector<std::vector<std::string>> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("IoError", "cannot read '" + path + "'");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(split_csv_line(line));
  }
  return rows;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

Dataset read_comparisons_csv(const std::string& path) {
  const auto rows = read_rows(path);
  if (rows.empty()) throw ParseError(path + ": empty file");
  const auto& header = rows.front();
  if (header.size() < 4 || header[0] != "worker_id" ||
      header[1] != "left_item" || header[2] != "right_item" ||
      header[3] != "winner")
    throw ParseError(path + ": expected header "
                     "worker_id,left_item,right_item,winner,f_1,...");
  const int m = static_cast<int>(header.size()) - 4;
  for (int l = 0; l < m; ++l)
    if (header[static_cast<std::size_t>(4 + l)] !=
        "f_" + std::to_string(l + 1))
      throw ParseError(path + ": feature columns must be named f_1..f_" +
                       std::to_string(m));

  std::vector<RawComparison> raw;
  raw.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const int line_no = static_cast<int>(r) + 1;
    if (row.size() != header.size())
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(row.size()));
    RawComparison rc;
    rc.worker = row[0];
    rc.left_item = row[1];
    rc.right_item = row[2];
    const std::string winner = lower(trim(row[3]));
    if (winner == "left")
      rc.left_won = true;
    else if (winner == "right")
      rc.left_won = false;
    else
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": winner must be 'left' or 'right', got '" + row[3] +
                       "'");
    rc.features.reserve(static_cast<std::size_t>(m));
    for (int l = 0; l < m; ++l)
      rc.features.push_back(
          parse_double(row[static_cast<std::size_t>(4 + l)], path, line_no));
    raw.push_back(std::move(rc));
  }
  return build_dataset(raw);
}

void write_comparisons_csv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("IoError", "cannot write '" + path + "'");
  out << "worker_id,left_item,right_item,winner";
  for (int l = 1; l <= dataset.feature_dim; ++l) out << ",f_" << l;
  out << '\n';
  for (const RawComparison& row : export_rows(dataset)) {
    out << csv_escape(row.worker) << ',' << csv_escape(row.left_item) << ','
        << csv_escape(row.right_item) << ','
        << (row.left_won ? "left" : "right");
    for (double f : row.features) out << ',' << format_double(f);
    out << '\n';
  }
}

std::map<std::string, double> read_gold_csv(const std::string& path) {
  const auto rows = read_rows(path);
  if (rows.empty()) throw ParseError(path + ": empty file");
  if (rows.front().size() != 2 || rows.front()[0] != "item_id" ||
      rows.front()[1] != "gold_score")
    throw ParseError(path + ": expected header item_id,gold_score");
  std::map<std::string, double> gold;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 2)
      throw ParseError(path + ":" + std::to_string(r + 1) +
                       ": expected 2 fields");
    gold[rows[r][0]] = parse_double(rows[r][1], path, static_cast<int>(r) + 1);
  }
  return gold;
}

void write_gold_csv(const std::map<std::string, double>& gold,
                    const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("IoError", "cannot write '" + path + "'");
  out << "item_id,gold_score\n";
  for (const auto& [id, value] : gold)
    out << csv_escape(id) << ',' << format_double(value) << '\n';
}

std::vector<std::pair<std::string, std::string>> read_pairs_csv(
    const std::string& path) {
  const auto rows = read_rows(path);
  if (rows.empty()) throw ParseError(path + ": empty file");
  if (rows.front().size() != 2 || rows.front()[0] != "item_a" ||
      rows.front()[1] != "item_b")
    throw ParseError(path + ": expected header item_a,item_b");
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 2)
      throw ParseError(path + ":" + std::to_string(r + 1) +
                       ": expected 2 fields");
    pairs.emplace_back(rows[r][0], rows[r][1]);
  }
  return pairs;
}

void write_pairs_csv(
    const std::vector<std::pair<std::string, std::string>>& pairs,
    const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("IoError", "cannot write '" + path + "'");
  out << "item_a,item_b\n";
  for (const auto& [a, b] : pairs)
    out << csv_escape(a) << ',' << csv_escape(b) << '\n';
}

ReadingConversion convert_reading_difficulty(const std::string& path) {
  const auto rows = read_rows(path);
  if (rows.empty()) throw ParseError(path + ": empty file");
  const auto& header = rows.front();
  if (header.size() < 4 || header[0] != "worker_id" ||
      header[1] != "passage_a" || header[2] != "passage_b" ||
      header[3] != "answer")
    throw ParseError(path + ": expected header "
                     "worker_id,passage_a,passage_b,answer[,gold_a,gold_b]");
  const bool has_gold = header.size() >= 6;

  ReadingConversion conv;
  std::vector<RawComparison> raw;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const int line_no = static_cast<int>(r) + 1;
    if (row.size() != header.size())
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": wrong field count");
    ++conv.rows_total;
    const std::string answer = lower(trim(row[3]));
    if (has_gold) {
      for (int side = 0; side < 2; ++side) {
        const std::string& level = row[static_cast<std::size_t>(4 + side)];
        if (!trim(level).empty())
          conv.gold[row[static_cast<std::size_t>(1 + side)]] =
              parse_double(level, path, line_no);
      }
    }
    bool left_won = false;
    if (answer == "a")
      left_won = true;
    else if (answer == "b")
      left_won = false;
    else {  // any can't-decide variant is dropped from fitting
      ++conv.rows_dropped;
      continue;
    }
    RawComparison rc;
    rc.worker = row[0];
    rc.left_item = row[1];   // passage A is presented on the left
    rc.right_item = row[2];
    rc.left_won = left_won;
    rc.features = {1.0};     // side indicator in left orientation
    raw.push_back(std::move(rc));
  }
  conv.dataset = build_dataset(raw);
  return conv;
}

}  // namespace crowdrank
