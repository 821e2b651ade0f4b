#pragma once

// Numerical-task generators and error analysis over model answer logs.
//
// Log format: JSON lines, one object per query:
//   {"query_id", "task": "addition"|"comparison", "prompt", "gold",
//    "prediction": raw model output, "parsed": integer or null, ...}
// Comparison records additionally carry "position" ("units" | "tens" |
// "hundreds"). When "parsed" is absent it is derived from "prediction" with
// parse_prediction().

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "digitwise/numeral.hpp"
#include "digitwise/rng.hpp"

namespace digitwise {

struct AdditionQuery {
  std::string query_id;
  std::vector<Natural> operands;
  std::string prompt;  // "a+b+...+z="
  Natural correct_sum = 0;
};

enum class DigitPosition { kUnits = 0, kTens = 1, kHundreds = 2 };

[[nodiscard]] const char* position_name(DigitPosition p);
[[nodiscard]] std::optional<DigitPosition> parse_position(std::string_view name);

struct ComparisonQuery {
  std::string query_id;
  Natural a = 0;  // a < b
  Natural b = 0;
  DigitPosition position = DigitPosition::kUnits;
  bool a_first = true;  // operand order in the prompt
  std::string prompt;

  [[nodiscard]] Natural gold() const { return b; }
};

// Uniform composition of `total` into `parts` non-negative integers
// (stars and bars: parts-1 bar positions drawn with Floyd's algorithm).
[[nodiscard]] std::vector<Natural> sample_composition(Natural total, std::size_t parts, SplitMix64& rng);

[[nodiscard]] std::vector<AdditionQuery> gen_addition_queries(std::size_t n_operands, std::size_t count,
                                                              std::uint64_t seed, Natural max_sum = 1000);

// Every unordered pair in [0, 999] differing in exactly one zero-padded digit,
// rendered in both operand orders (27000 queries, 4500 pairs per position).
[[nodiscard]] std::vector<ComparisonQuery> gen_comparison_pairs();

[[nodiscard]] std::string comparison_prompt(Natural first, Natural second);

[[nodiscard]] nlohmann::json to_json(const AdditionQuery& q);
[[nodiscard]] nlohmann::json to_json(const ComparisonQuery& q);

// First maximal run of decimal digits, or nullopt.
[[nodiscard]] std::optional<Natural> parse_prediction(std::string_view raw);

struct ErrorProfile {
  bool numeric = true;
  std::int64_t value_error = 0;    // predicted - correct
  std::vector<int> digit_edits;    // differing digit indices, 0 = units
  bool single_digit = false;
  int multiple_of = 0;             // largest k with 10^k | value_error (0 if none or no error)
};

// Digit comparison on zero-padded width-w strings. A missing prediction
// yields a non-numeric profile.
[[nodiscard]] ErrorProfile classify_error(Natural correct, std::optional<Natural> predicted, int width);

[[nodiscard]] int decimal_width(Natural x);

struct LogRecord {
  std::string query_id;
  std::string task;
  std::string prompt;
  Natural gold = 0;
  std::string prediction;
  std::optional<Natural> parsed;
  std::optional<DigitPosition> position;
};

// Throws FormatError on malformed JSON and MetadataError on schema violations;
// both messages carry the 1-based line number.
[[nodiscard]] std::vector<LogRecord> read_log(std::istream& in);
[[nodiscard]] std::vector<LogRecord> read_log_file(const std::string& path);

struct AdditionReport {
  std::size_t records = 0;
  std::size_t correct = 0;
  std::size_t errors = 0;          // numeric wrong answers
  std::size_t non_numeric = 0;
  std::size_t multiple_of_10 = 0;  // among numeric errors
  std::size_t multiple_of_100 = 0;
  std::size_t single_digit = 0;
  std::map<std::int64_t, std::size_t> histogram;  // value_error -> count
  std::map<int, std::size_t> edits_by_position;   // errors touching each digit index

  [[nodiscard]] double share_multiple_of_10() const;
  [[nodiscard]] double share_multiple_of_100() const;
  [[nodiscard]] double share_single_digit() const;
};

[[nodiscard]] AdditionReport aggregate_addition(const std::vector<LogRecord>& records);

struct PositionAccuracy {
  std::size_t correct = 0;
  std::size_t incorrect = 0;
  [[nodiscard]] double rate() const;
};

struct ComparisonReport {
  std::map<DigitPosition, PositionAccuracy> by_position;
  std::size_t non_numeric = 0;
};

[[nodiscard]] ComparisonReport aggregate_comparison(const std::vector<LogRecord>& records);

[[nodiscard]] nlohmann::json to_json(const AdditionReport& r);
[[nodiscard]] std::string to_text(const AdditionReport& r);
[[nodiscard]] std::string histogram_csv(const AdditionReport& r);
[[nodiscard]] nlohmann::json to_json(const ComparisonReport& r);
[[nodiscard]] std::string to_text(const ComparisonReport& r);

}  // namespace digitwise
