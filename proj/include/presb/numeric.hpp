#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace presb {

using Integer = mpz_class;
using Rational = mpq_class;

/// Nonnegative remainder: the unique r in [0, n) with a = q*n + r.
Integer mod_floor(const Integer& a, const Integer& n);
std::uint64_t mod_floor(const Integer& a, std::uint64_t n);

Integer floor_div(const Integer& a, const Integer& n);

Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);
std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

/// lcm(1, 2, ..., n).
Integer lcm_upto(std::uint64_t n);

/// Converts to a machine word; throws std::overflow_error when it does not fit.
std::uint64_t to_u64(const Integer& z);
std::int64_t to_i64(const Integer& z);

Rational make_rational(const Integer& num, const Integer& den);

std::string to_string(const Integer& z);
/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& q);

/// Accepts "-12", "3/4", "-1/2". Throws std::invalid_argument otherwise.
Rational parse_rational(std::string_view text);
Integer parse_integer(std::string_view text);

int sign(const Integer& z);
int sign(const Rational& q);

}  // namespace presb
