#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace indist {

using Rational = mpq_class;
using BigInt = mpz_class;

// Exact parse of "a/b", integers, and decimals with optional exponent
// ("0.125", "-3e-2"). Throws ParseError.
Rational parse_rational(std::string_view text);

// Canonical "a/b" (or "a" when the denominator is 1).
std::string to_string(const Rational& q);

// Shortest decimal that round-trips the double, then parsed exactly.
Rational rational_from_double(double x);

double to_double(const Rational& q);
std::vector<double> to_doubles(const std::vector<Rational>& v);

// Rounds q*den to the nearest integer; exact halves round toward zero.
BigInt round_half_toward_zero(const Rational& q, const BigInt& den);

// Smallest integer >= q.
BigInt ceil(const Rational& q);

// Exact n choose k.
BigInt binomial(unsigned long n, unsigned long k);

}  // namespace indist
