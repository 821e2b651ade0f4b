#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "digitwise/numeral.hpp"
#include "digitwise/rng.hpp"

using namespace digitwise;

namespace {

const std::vector<int> kSweepBases = {2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 1000, 2000};

// Angle from acos plus the sign of y; independent of atan2.
double scalar_angle(double x, double y) {
  const double r = std::hypot(x, y);
  const double a = std::acos(x / r);
  return y >= 0 ? a : 2.0 * std::numbers::pi - a;
}

}  // namespace

TEST_CASE("to_digits pads most-significant first") {
  CHECK(to_digits(375, 10, 3).digits == std::vector<int>{3, 7, 5});
  CHECK(to_digits(0, 10, 4).digits == std::vector<int>{0, 0, 0, 0});
  const auto dv = to_digits(2000, 1000, 2);
  CHECK(dv.digits == std::vector<int>{2, 0});
  CHECK(from_digits(dv) == 2000);
  CHECK(to_digits(375, 10, 3).digit_at(1) == 7);
}

TEST_CASE("to_digits rejects out-of-range input") {
  CHECK_THROWS_AS((void)to_digits(1000, 10, 3), std::invalid_argument);
  CHECK_THROWS_AS((void)to_digits(5, 1, 3), std::invalid_argument);
  CHECK_THROWS_AS((void)to_digits(5, 10, 0), std::invalid_argument);
}

TEST_CASE("from_digits") {
  CHECK(from_digits({10, 3, {3, 7, 5}}) == 375);
  CHECK(from_digits({10, 4, {0, 0, 0, 0}}) == 0);
  CHECK(from_digits({2, 2, {1, 1}}) == 3);
  CHECK_THROWS_AS((void)from_digits({10, 2, {1, 10}}), std::invalid_argument);
  CHECK_THROWS_AS((void)from_digits({10, 3, {1, 1}}), std::invalid_argument);
}

TEST_CASE("circle_map") {
  auto p = circle_map(0, 10);
  CHECK(p.x == doctest::Approx(1.0));
  CHECK(p.y == doctest::Approx(0.0));
  p = circle_map(5, 10);
  CHECK(p.x == doctest::Approx(-1.0));
  CHECK(std::abs(p.y) < 1e-12);
  p = circle_map(2, 4);
  CHECK(p.x == doctest::Approx(-1.0));
  CHECK(std::abs(p.y) < 1e-12);
  CHECK_THROWS_AS((void)circle_map(10, 10), std::invalid_argument);
  CHECK_THROWS_AS((void)circle_map(-1, 10), std::invalid_argument);
}

TEST_CASE("circle points lie on the unit circle") {
  for (int b : kSweepBases) {
    for (int t = 0; t < b; ++t) {
      const auto p = circle_map(t, b);
      REQUIRE(std::abs(p.x * p.x + p.y * p.y - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("decode_angle examples") {
  CHECK(decode_angle(circle_map(7, 10), 10) == 7);
  CHECK(decode_angle(0.0, -1.0, 4) == 3);

  // (0.9, -0.1) in base 10: the scalar-angle oracle puts it just below a full
  // turn, which rounds to 10 == 0.
  const double theta = scalar_angle(0.9, -0.1);
  const double continuous = 10.0 * theta / (2.0 * std::numbers::pi);
  CHECK(continuous == doctest::Approx(9.8239).epsilon(1e-4));
  CHECK(static_cast<int>(std::lround(continuous)) % 10 == 0);
  CHECK(decode_angle(0.9, -0.1, 10) == 0);

  CHECK_THROWS_AS((void)decode_angle(0.0, 0.0, 10), std::domain_error);
}

TEST_CASE("round trip to_digits/from_digits, exhaustive over [0, 2000]") {
  for (int b : kSweepBases) {
    const int w = digit_width(b, 0, 2000);
    for (Natural x = 0; x <= 2000; ++x) {
      REQUIRE(from_digits(to_digits(x, b, w)) == x);
    }
  }
}

TEST_CASE("decode inverts encode for every digit of every sweep base") {
  for (int b : kSweepBases) {
    for (int t = 0; t < b; ++t) {
      REQUIRE(decode_angle(circle_map(t, b), b) == t);
    }
  }
}

TEST_CASE("decode is scale invariant") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const int b = kSweepBases[rng.bounded(kSweepBases.size())];
    const int t = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(b)));
    const auto p = circle_map(t, b);
    const double s = std::exp(20.0 * (rng.uniform01() - 0.5));
    REQUIRE(decode_angle(s * p.x, s * p.y, b) == decode_angle(p, b));
  }
}

TEST_CASE("decode tolerates angular noise below half a digit slot") {
  SplitMix64 rng(12);
  for (int b : kSweepBases) {
    for (int trial = 0; trial < 200; ++trial) {
      const int t = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(b)));
      const double slot = std::numbers::pi / b;
      const double delta = (2.0 * rng.uniform01() - 1.0) * slot * 0.999;
      const double angle = 2.0 * std::numbers::pi * t / b + delta;
      REQUIRE(decode_angle(std::cos(angle), std::sin(angle), b) == t);
    }
  }
}

TEST_CASE("digit_width over label ranges") {
  CHECK(digit_width(10, 1, 2000) == 4);
  CHECK(digit_width(1000, 1, 2000) == 2);
  CHECK(digit_width(2000, 1, 2000) == 1);
  CHECK(digit_width(2000, 0, 2000) == 2);  // 0 and 2000 would collide
  CHECK(digit_width(10, 0, 999) == 3);
  CHECK(digit_width(2, 1, 2000) == 11);
  CHECK(digit_width(13, 1, 2000) == 3);
}

TEST_CASE("labels stay distinct modulo base^width") {
  for (int b : kSweepBases) {
    const int w = digit_width(b, 1, 2000);
    const Natural cap = *checked_pow(static_cast<Natural>(b), w);
    std::vector<bool> seen(static_cast<std::size_t>(std::min<Natural>(cap, 1u << 20)), false);
    for (Natural x = 1; x <= 2000; ++x) {
      const auto r = static_cast<std::size_t>(x % cap);
      REQUIRE_FALSE(seen[r]);
      seen[r] = true;
    }
  }
}

TEST_CASE("digit_of counts from the units position") {
  CHECK(digit_of(375, 10, 0) == 5);
  CHECK(digit_of(375, 10, 2) == 3);
  CHECK(digit_of(375, 10, 3) == 0);
  CHECK(digit_of(7, 5, 0) == 2);
  CHECK(digit_of(7, 5, 1) == 1);
}

TEST_CASE("number words") {
  CHECK(parse_number_words("zero") == Natural{0});
  CHECK(parse_number_words("twenty-two") == Natural{22});
  CHECK(parse_number_words("fifty") == Natural{50});
  CHECK(parse_number_words("Nineteen") == Natural{19});
  CHECK(parse_number_words("one hundred and five") == Natural{105});
  CHECK(parse_number_words("two thousand") == Natural{2000});
  CHECK(parse_number_words("42") == Natural{42});
  CHECK_FALSE(parse_number_words("banana").has_value());
  CHECK_FALSE(parse_number_words("").has_value());
}

TEST_CASE("checked_pow detects overflow") {
  CHECK(checked_pow(10, 3) == Natural{1000});
  CHECK_FALSE(checked_pow(2000, 6).has_value());
}
