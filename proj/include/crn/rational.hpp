#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace crn {

using Rational = mpq_class;
using Integer = mpz_class;

/// Exact rational vector; used for complexes and reaction vectors.
using RationalVector = std::vector<Rational>;

/// Parses "3", "-2", "1.5", "-0.25", "1e-3", "3/4" exactly. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Decimal text when the denominator has only the prime factors 2 and 5, "p/q" otherwise.
/// parse_rational(format_rational(q)) == q for every q.
std::string format_rational(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

std::vector<double> to_doubles(const RationalVector& v);

Rational dot(const RationalVector& a, const RationalVector& b);
RationalVector operator-(const RationalVector& a, const RationalVector& b);
RationalVector operator+(const RationalVector& a, const RationalVector& b);
bool is_zero(const RationalVector& v);
bool is_integer(const Rational& q);

}  // namespace crn
