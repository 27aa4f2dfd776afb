#include <doctest.h>

#include "indist/errors.hpp"
#include "indist/rational.hpp"

using namespace indist;

TEST_SUITE("rational") {
  TEST_CASE("parses fractions, integers and decimals exactly") {
    CHECK(parse_rational("3/4") == Rational(3, 4));
    CHECK(parse_rational("6/8") == Rational(3, 4));
    CHECK(parse_rational("-2") == Rational(-2));
    CHECK(parse_rational("0.1") == Rational(1, 10));
    CHECK(parse_rational("1.25e-2") == Rational(1, 80));
    CHECK(parse_rational("5E3") == Rational(5000));
    CHECK(parse_rational(" 1/3 ") == Rational(1, 3));
  }

  TEST_CASE("rejects malformed input") {
    CHECK_THROWS_AS(parse_rational(""), ParseError);
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("abc"), ParseError);
    CHECK_THROWS_AS(parse_rational("1.2.3"), ParseError);
    CHECK_THROWS_AS(parse_rational("1e999999"), ParseError);
  }

  TEST_CASE("canonical printing round-trips") {
    CHECK(to_string(Rational(6, 8)) == "3/4");
    CHECK(to_string(Rational(4, 2)) == "2");
    CHECK(parse_rational(to_string(Rational(-7, 9))) == Rational(-7, 9));
  }

  TEST_CASE("doubles convert through their shortest decimal") {
    CHECK(rational_from_double(0.1) == Rational(1, 10));
    CHECK(rational_from_double(0.25) == Rational(1, 4));
    CHECK(to_double(rational_from_double(0.3)) == 0.3);
  }

  TEST_CASE("nearest multiple with halves toward zero") {
    // 1/3 on a grid of 1/20: 6.67 -> 7.
    CHECK(round_half_toward_zero(Rational(1, 3), 20) == 7);
    CHECK(round_half_toward_zero(Rational(1, 8), 4) == 0);   // 0.5 -> 0
    CHECK(round_half_toward_zero(Rational(3, 8), 4) == 1);   // 1.5 -> 1
    CHECK(round_half_toward_zero(Rational(-3, 8), 4) == -1);
    CHECK(round_half_toward_zero(Rational(2, 5), 10) == 4);
  }

  TEST_CASE("ceil and binomial") {
    CHECK(ceil(Rational(7, 2)) == 4);
    CHECK(ceil(Rational(-7, 2)) == -3);
    CHECK(ceil(Rational(4)) == 4);
    CHECK(binomial(10, 3) == 120);
    CHECK(binomial(60, 30) == BigInt("118264581564861424"));
  }
}
