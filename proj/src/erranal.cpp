#include "digitwise/erranal.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

#include "digitwise/errors.hpp"

namespace digitwise {

using nlohmann::json;

const char* position_name(DigitPosition p) {
  switch (p) {
    case DigitPosition::kUnits:
      return "units";
    case DigitPosition::kTens:
      return "tens";
    case DigitPosition::kHundreds:
      return "hundreds";
  }
  return "units";
}

std::optional<DigitPosition> parse_position(std::string_view name) {
  if (name == "units") return DigitPosition::kUnits;
  if (name == "tens") return DigitPosition::kTens;
  if (name == "hundreds") return DigitPosition::kHundreds;
  return std::nullopt;
}

std::vector<Natural> sample_composition(Natural total, std::size_t parts, SplitMix64& rng) {
  if (parts == 0) {
    throw std::invalid_argument("composition needs at least one part");
  }
  const Natural slots = total + parts - 1;
  const Natural bars = parts - 1;
  std::set<Natural> chosen;
  for (Natural j = slots - bars; j < slots; ++j) {
    const Natural t = rng.bounded(j + 1);
    if (!chosen.insert(t).second) {
      chosen.insert(j);
    }
  }
  std::vector<Natural> out;
  out.reserve(parts);
  Natural prev = 0;  // one past the previous bar
  for (Natural bar : chosen) {
    out.push_back(bar - prev);
    prev = bar + 1;
  }
  out.push_back(slots - prev);
  return out;
}

std::vector<AdditionQuery> gen_addition_queries(std::size_t n_operands, std::size_t count,
                                                std::uint64_t seed, Natural max_sum) {
  if (n_operands < 2 || count < 1) {
    throw std::invalid_argument("addition queries need >= 2 operands and count >= 1");
  }
  SplitMix64 rng(seed);
  std::vector<AdditionQuery> out;
  out.reserve(count);
  for (std::size_t q = 0; q < count; ++q) {
    AdditionQuery query;
    query.correct_sum = rng.bounded(max_sum + 1);
    query.operands = sample_composition(query.correct_sum, n_operands, rng);
    std::ostringstream id;
    id << "add" << n_operands << '-' << std::setw(6) << std::setfill('0') << q;
    query.query_id = id.str();
    for (std::size_t k = 0; k < query.operands.size(); ++k) {
      query.prompt += (k ? "+" : "") + std::to_string(query.operands[k]);
    }
    query.prompt += "=";
    out.push_back(std::move(query));
  }
  return out;
}

std::string comparison_prompt(Natural first, Natural second) {
  return "between " + std::to_string(first) + " or " + std::to_string(second) +
         ", the larger number is:";
}

std::vector<ComparisonQuery> gen_comparison_pairs() {
  std::vector<ComparisonQuery> out;
  out.reserve(27000);
  static constexpr Natural kStep[] = {1, 10, 100};
  for (Natural a = 0; a < 1000; ++a) {
    for (int p = 0; p < 3; ++p) {
      const int current = digit_of(a, 10, p);
      for (int alt = current + 1; alt < 10; ++alt) {
        const Natural b = a + static_cast<Natural>(alt - current) * kStep[p];
        for (bool a_first : {true, false}) {
          ComparisonQuery q;
          q.a = a;
          q.b = b;
          q.position = static_cast<DigitPosition>(p);
          q.a_first = a_first;
          q.prompt = a_first ? comparison_prompt(a, b) : comparison_prompt(b, a);
          std::ostringstream id;
          id << "cmp-" << std::setw(3) << std::setfill('0') << a << '-' << std::setw(3) << b
             << (a_first ? "-ab" : "-ba");
          q.query_id = id.str();
          out.push_back(std::move(q));
        }
      }
    }
  }
  return out;
}

json to_json(const AdditionQuery& q) {
  return json{{"query_id", q.query_id}, {"task", "addition"}, {"prompt", q.prompt},
              {"gold", q.correct_sum},  {"operands", q.operands}};
}

json to_json(const ComparisonQuery& q) {
  return json{{"query_id", q.query_id},
              {"task", "comparison"},
              {"prompt", q.prompt},
              {"gold", q.gold()},
              {"a", q.a},
              {"b", q.b},
              {"position", position_name(q.position)},
              {"order", q.a_first ? "ab" : "ba"}};
}

std::optional<Natural> parse_prediction(std::string_view raw) {
  auto it = std::find_if(raw.begin(), raw.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  if (it == raw.end()) {
    return std::nullopt;
  }
  auto end = std::find_if(it, raw.end(), [](char c) { return !std::isdigit(static_cast<unsigned char>(c)); });
  const std::string digits(it, end);
  if (digits.size() > 19) {
    return std::nullopt;
  }
  try {
    return std::stoull(digits);
  } catch (const std::out_of_range&) {
    return std::nullopt;
  }
}

int decimal_width(Natural x) {
  int w = 1;
  while (x >= 10) {
    x /= 10;
    ++w;
  }
  return w;
}

ErrorProfile classify_error(Natural correct, std::optional<Natural> predicted, int width) {
  ErrorProfile profile;
  if (!predicted) {
    profile.numeric = false;
    return profile;
  }
  if (width < 1 || decimal_width(correct) > width || decimal_width(*predicted) > width) {
    throw std::invalid_argument("values must fit in " + std::to_string(width) + " decimal digits");
  }
  profile.value_error = static_cast<std::int64_t>(*predicted) - static_cast<std::int64_t>(correct);
  for (int i = 0; i < width; ++i) {
    if (digit_of(correct, 10, i) != digit_of(*predicted, 10, i)) {
      profile.digit_edits.push_back(i);
    }
  }
  profile.single_digit = profile.digit_edits.size() == 1;
  if (profile.value_error != 0) {
    std::int64_t e = profile.value_error;
    while (e % 10 == 0) {
      e /= 10;
      ++profile.multiple_of;
    }
  }
  return profile;
}

std::vector<LogRecord> read_log(std::istream& in) {
  std::vector<LogRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw FormatError("log line " + std::to_string(line_no) + ": " + e.what());
    }
    try {
      LogRecord r;
      r.query_id = j.at("query_id").get<std::string>();
      r.task = j.at("task").get<std::string>();
      r.prompt = j.value("prompt", "");
      r.gold = j.at("gold").get<Natural>();
      r.prediction = j.at("prediction").get<std::string>();
      if (j.contains("parsed")) {
        if (!j["parsed"].is_null()) {
          r.parsed = j["parsed"].get<Natural>();
        }
      } else {
        r.parsed = parse_prediction(r.prediction);
      }
      if (j.contains("position")) {
        r.position = parse_position(j["position"].get<std::string>());
        if (!r.position) {
          throw MetadataError("unknown position '" + j["position"].get<std::string>() + "'");
        }
      }
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw MetadataError("log line " + std::to_string(line_no) + ": " + e.what());
    } catch (const MetadataError& e) {
      throw MetadataError("log line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<LogRecord> read_log_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path);
  }
  return read_log(in);
}

namespace {

double share(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0 : static_cast<double>(part) / static_cast<double>(whole);
}

}  // namespace

double AdditionReport::share_multiple_of_10() const { return share(multiple_of_10, errors); }
double AdditionReport::share_multiple_of_100() const { return share(multiple_of_100, errors); }
double AdditionReport::share_single_digit() const { return share(single_digit, errors); }

AdditionReport aggregate_addition(const std::vector<LogRecord>& records) {
  if (records.empty()) {
    throw std::invalid_argument("no records to aggregate");
  }
  AdditionReport report;
  for (const auto& r : records) {
    ++report.records;
    if (!r.parsed) {
      ++report.non_numeric;
      continue;
    }
    const int width = std::max(decimal_width(r.gold), decimal_width(*r.parsed));
    const auto profile = classify_error(r.gold, r.parsed, width);
    if (profile.value_error == 0) {
      ++report.correct;
      continue;
    }
    ++report.errors;
    ++report.histogram[profile.value_error];
    report.multiple_of_10 += profile.multiple_of >= 1 ? 1 : 0;
    report.multiple_of_100 += profile.multiple_of >= 2 ? 1 : 0;
    report.single_digit += profile.single_digit ? 1 : 0;
    for (int i : profile.digit_edits) {
      ++report.edits_by_position[i];
    }
  }
  return report;
}

double PositionAccuracy::rate() const { return share(correct, correct + incorrect); }

ComparisonReport aggregate_comparison(const std::vector<LogRecord>& records) {
  if (records.empty()) {
    throw std::invalid_argument("no records to aggregate");
  }
  ComparisonReport report;
  for (const auto& r : records) {
    if (!r.position) {
      throw MetadataError("comparison record " + r.query_id + " has no position metadata");
    }
    auto& acc = report.by_position[*r.position];
    if (!r.parsed) {
      ++report.non_numeric;
    }
    if (r.parsed && *r.parsed == r.gold) {
      ++acc.correct;
    } else {
      ++acc.incorrect;
    }
  }
  return report;
}

json to_json(const AdditionReport& r) {
  json hist = json::array();
  for (const auto& [err, count] : r.histogram) {
    hist.push_back({{"error", err}, {"count", count}});
  }
  json edits = json::object();
  for (const auto& [pos, count] : r.edits_by_position) {
    edits[std::to_string(pos)] = count;
  }
  return json{{"records", r.records},
              {"correct", r.correct},
              {"errors", r.errors},
              {"non_numeric", r.non_numeric},
              {"multiple_of_10", r.multiple_of_10},
              {"multiple_of_100", r.multiple_of_100},
              {"single_digit", r.single_digit},
              {"share_multiple_of_10", r.share_multiple_of_10()},
              {"share_multiple_of_100", r.share_multiple_of_100()},
              {"share_single_digit", r.share_single_digit()},
              {"edits_by_position", edits},
              {"histogram", hist}};
}

std::string to_text(const AdditionReport& r) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3);
  os << std::left << std::setw(24) << "records" << r.records << '\n'
     << std::setw(24) << "correct" << r.correct << '\n'
     << std::setw(24) << "numeric errors" << r.errors << '\n'
     << std::setw(24) << "non-numeric" << r.non_numeric << '\n'
     << std::setw(24) << "multiple of 10" << r.multiple_of_10 << " (" << r.share_multiple_of_10() << ")\n"
     << std::setw(24) << "multiple of 100" << r.multiple_of_100 << " (" << r.share_multiple_of_100() << ")\n"
     << std::setw(24) << "single-digit" << r.single_digit << " (" << r.share_single_digit() << ")\n";
  return os.str();
}

std::string histogram_csv(const AdditionReport& r) {
  std::string out = "bucket,count\n";
  for (const auto& [err, count] : r.histogram) {
    out += std::to_string(err) + "," + std::to_string(count) + "\n";
  }
  return out;
}

json to_json(const ComparisonReport& r) {
  json positions = json::object();
  for (const auto& [pos, acc] : r.by_position) {
    positions[position_name(pos)] = {{"correct", acc.correct}, {"incorrect", acc.incorrect}, {"rate", acc.rate()}};
  }
  return json{{"positions", positions}, {"non_numeric", r.non_numeric}};
}

std::string to_text(const ComparisonReport& r) {
  std::ostringstream os;
  os << std::left << std::setw(10) << "digit" << std::right << std::setw(9) << "correct" << std::setw(11)
     << "incorrect" << std::setw(8) << "rate" << '\n';
  os << std::fixed << std::setprecision(3);
  for (const auto& [pos, acc] : r.by_position) {
    os << std::left << std::setw(10) << position_name(pos) << std::right << std::setw(9) << acc.correct
       << std::setw(11) << acc.incorrect << std::setw(8) << acc.rate() << '\n';
  }
  return os.str();
}

}  // namespace digitwise
