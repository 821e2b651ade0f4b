#include "digitwise/numeral.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace digitwise {

namespace {

void require_base(int base) {
  if (base < 2) {
    throw std::invalid_argument("base must be >= 2, got " + std::to_string(base));
  }
}

}  // namespace

int DigitVector::digit_at(int index) const {
  if (index < 0 || index >= width) {
    throw std::invalid_argument("digit index " + std::to_string(index) +
                                " outside width " + std::to_string(width));
  }
  return digits[static_cast<std::size_t>(width - 1 - index)];
}

std::optional<Natural> checked_pow(Natural base, int width) {
  Natural result = 1;
  for (int k = 0; k < width; ++k) {
    if (base != 0 && result > UINT64_MAX / base) {
      return std::nullopt;
    }
    result *= base;
  }
  return result;
}

DigitVector to_digits(Natural x, int base, int width) {
  require_base(base);
  if (width < 1) {
    throw std::invalid_argument("width must be >= 1");
  }
  const auto limit = checked_pow(static_cast<Natural>(base), width);
  if (limit && x >= *limit) {
    throw std::invalid_argument(std::to_string(x) + " does not fit in " +
                                std::to_string(width) + " base-" +
                                std::to_string(base) + " digits");
  }
  DigitVector dv{base, width, std::vector<int>(static_cast<std::size_t>(width), 0)};
  for (int k = width - 1; k >= 0 && x > 0; --k) {
    dv.digits[static_cast<std::size_t>(k)] = static_cast<int>(x % static_cast<Natural>(base));
    x /= static_cast<Natural>(base);
  }
  return dv;
}

Natural from_digits(const DigitVector& dv) {
  require_base(dv.base);
  if (dv.width < 1 || dv.digits.size() != static_cast<std::size_t>(dv.width)) {
    throw std::invalid_argument("digit vector length does not match width");
  }
  Natural value = 0;
  for (int d : dv.digits) {
    if (d < 0 || d >= dv.base) {
      throw std::invalid_argument("digit " + std::to_string(d) + " outside base " +
                                  std::to_string(dv.base));
    }
    value = value * static_cast<Natural>(dv.base) + static_cast<Natural>(d);
  }
  return value;
}

int digit_of(Natural x, int base, int index) {
  require_base(base);
  for (int k = 0; k < index && x > 0; ++k) {
    x /= static_cast<Natural>(base);
  }
  return static_cast<int>(x % static_cast<Natural>(base));
}

CirclePoint circle_map(int t, int base) {
  require_base(base);
  if (t < 0 || t >= base) {
    throw std::invalid_argument("digit " + std::to_string(t) + " outside [0, " +
                                std::to_string(base) + ")");
  }
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(t) / base;
  return {std::cos(angle), std::sin(angle)};
}

int decode_angle(double x, double y, int base) {
  require_base(base);
  if (x == 0.0 && y == 0.0) {
    throw std::domain_error("cannot decode the angle of a zero vector");
  }
  double theta = std::atan2(y, x);
  if (theta < 0.0) {
    theta += 2.0 * std::numbers::pi;
  }
  const double continuous = base * theta / (2.0 * std::numbers::pi);
  const auto rounded = static_cast<long long>(std::llround(continuous));
  return static_cast<int>(rounded % base);
}

int digit_width(int base, Natural min_label, Natural max_label) {
  require_base(base);
  if (min_label > max_label) {
    throw std::invalid_argument("empty label range");
  }
  int width = 1;
  while (true) {
    const auto cap = checked_pow(static_cast<Natural>(base), width);
    if (!cap || *cap > max_label || (*cap == max_label && min_label >= 1)) {
      return width;
    }
    ++width;
  }
}

std::optional<Natural> parse_number_words(std::string_view text) {
  std::string norm;
  for (char c : text) {
    norm.push_back(c == '-' ? ' ' : static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  const auto first = norm.find_first_not_of(' ');
  if (first == std::string::npos) {
    return std::nullopt;
  }
  if (std::all_of(norm.begin() + static_cast<long>(first), norm.end(),
                  [](char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == ' '; })) {
    const auto last = norm.find_last_not_of(' ');
    const auto digits = norm.substr(first, last - first + 1);
    if (digits.find(' ') != std::string::npos || digits.size() > 19) {
      return std::nullopt;
    }
    return std::stoull(digits);
  }

  static constexpr std::string_view kSmall[] = {
      "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine",
      "ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen", "sixteen",
      "seventeen", "eighteen", "nineteen"};
  static constexpr std::string_view kTens[] = {"", "", "twenty", "thirty", "forty",
                                               "fifty", "sixty", "seventy", "eighty",
                                               "ninety"};

  Natural total = 0;
  Natural group = 0;
  bool any = false;
  std::size_t pos = 0;
  while (pos < norm.size()) {
    if (norm[pos] == ' ') {
      ++pos;
      continue;
    }
    const auto end = std::min(norm.find(' ', pos), norm.size());
    const std::string_view word(norm.data() + pos, end - pos);
    pos = end;
    if (word == "and") {
      continue;
    }
    bool matched = false;
    for (std::size_t k = 0; k < std::size(kSmall) && !matched; ++k) {
      if (word == kSmall[k]) {
        group += k;
        matched = true;
      }
    }
    for (std::size_t k = 2; k < std::size(kTens) && !matched; ++k) {
      if (word == kTens[k]) {
        group += 10 * k;
        matched = true;
      }
    }
    if (!matched && word == "hundred") {
      group = (group == 0 ? 1 : group) * 100;
      matched = true;
    }
    if (!matched && word == "thousand") {
      total += (group == 0 ? 1 : group) * 1000;
      group = 0;
      matched = true;
    }
    if (!matched) {
      return std::nullopt;
    }
    any = true;
  }
  if (!any) {
    return std::nullopt;
  }
  return total + group;
}

}  // namespace digitwise
