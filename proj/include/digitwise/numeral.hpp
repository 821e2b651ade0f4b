#pragma once

// Base-b digit arithmetic and the unit-circle digit encoding.
//
// Digit positions are counted two ways in this library:
//   - DigitVector::digits is most-significant first (display order);
//   - a "digit index" i counts from the units position (i = 0).
// digit_at() bridges the two.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace digitwise {

using Natural = std::uint64_t;

struct DigitVector {
  int base = 10;
  int width = 1;
  std::vector<int> digits;  // most-significant first

  // Digit at index i counted from the units position.
  [[nodiscard]] int digit_at(int index) const;
};

struct CirclePoint {
  double x = 1.0;
  double y = 0.0;
};

// base^width, or nullopt when it does not fit in 64 bits.
[[nodiscard]] std::optional<Natural> checked_pow(Natural base, int width);

[[nodiscard]] DigitVector to_digits(Natural x, int base, int width);
[[nodiscard]] Natural from_digits(const DigitVector& dv);

// Digit i (0 = units) of x in the given base; no width check.
[[nodiscard]] int digit_of(Natural x, int base, int index);

[[nodiscard]] CirclePoint circle_map(int t, int base);

// Unsigned angle of (x, y) scaled to [0, base), rounded to the nearest digit
// modulo base. Throws std::domain_error on the zero vector.
[[nodiscard]] int decode_angle(double x, double y, int base);
[[nodiscard]] inline int decode_angle(CirclePoint p, int base) {
  return decode_angle(p.x, p.y, base);
}

// Number of digit positions needed so that every label in
// [min_label, max_label] has a distinct residue modulo base^width.
// When max_label == base^w exactly and 0 is not a label, the top label wraps
// to 0 and w digits suffice (labels 1..2000 in base 2000 use one digit).
[[nodiscard]] int digit_width(int base, Natural min_label, Natural max_label);

// Numeric value of a label string: decimal digits ("42") or English number
// words ("forty-two", "one hundred and five"). nullopt when unparseable.
[[nodiscard]] std::optional<Natural> parse_number_words(std::string_view text);

}  // namespace digitwise
