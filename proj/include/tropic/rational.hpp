#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace tropic {

/// Exact rational scalar. GMP keeps it canonical (lowest terms, positive
/// denominator) after every arithmetic operation.
using Rational = mpq_class;
using Integer = mpz_class;
using Vector = std::vector<Rational>;

/// Parses "p/q", "-p/q" or a bare decimal integer. Floats are rejected.
Rational parse_rational(std::string_view text);

/// Integer when the denominator is 1, otherwise "p/q".
std::string format_rational(const Rational& value);

Rational dot(const Vector& lhs, const Vector& rhs);
Vector operator+(const Vector& lhs, const Vector& rhs);
Vector operator-(const Vector& lhs, const Vector& rhs);
Vector operator*(const Rational& scale, const Vector& v);
bool is_zero(const Vector& v);

/// Lexicographic order; used to sort and deduplicate point sets.
struct VectorLess {
  bool operator()(const Vector& lhs, const Vector& rhs) const;
};

}  // namespace tropic
