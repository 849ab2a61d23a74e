#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace heightlab {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "7", "-3/4" or a terminating decimal such as "0.25" into an exact
/// rational. Throws Error(BadParameter) on malformed input.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

Rational make_rational(long num, long den = 1);

Integer floor(const Rational& q);
Integer ceil(const Rational& q);

/// p-adic order of a nonzero integer.
unsigned long valuation(const Integer& n, const Integer& p);

/// p-adic order of a nonzero rational (may be negative).
long valuation(const Rational& q, const Integer& p);

bool is_prime(const Integer& n);

/// Prime factorization of |n| (n != 0), primes ascending.
std::vector<std::pair<Integer, unsigned>> factorize(const Integer& n);

Integer binomial(unsigned long n, unsigned long k);

Integer ipow(const Integer& base, unsigned long exponent);

}  // namespace heightlab
