#include "tropic/rational.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "tropic/errors.hpp"

namespace tropic {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) {
    throw InputError("not a rational scalar: \"" + std::string(text) + "\"");
  }
  Integer d(std::string(den), 10);
  if (d == 0) throw InputError("zero denominator in \"" + std::string(text) + "\"");
  Rational value(Integer(std::string(num), 10), d);
  value.canonicalize();
  if (!text.empty() && text.front() == '-') value = -value;
  return value;
}

std::string format_rational(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_str();
}

Rational dot(const Vector& lhs, const Vector& rhs) {
  Rational sum;
  Rational term;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (sgn(lhs[i]) == 0 || sgn(rhs[i]) == 0) continue;
    mpq_mul(term.get_mpq_t(), lhs[i].get_mpq_t(), rhs[i].get_mpq_t());
    sum += term;
  }
  return sum;
}

Vector operator+(const Vector& lhs, const Vector& rhs) {
  Vector out(lhs.size());
  for (std::size_t i = 0; i < lhs.size(); ++i) out[i] = lhs[i] + rhs[i];
  return out;
}

Vector operator-(const Vector& lhs, const Vector& rhs) {
  Vector out(lhs.size());
  for (std::size_t i = 0; i < lhs.size(); ++i) out[i] = lhs[i] - rhs[i];
  return out;
}

Vector operator*(const Rational& scale, const Vector& v) {
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = scale * v[i];
  return out;
}

bool is_zero(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return sgn(x) == 0; });
}

bool VectorLess::operator()(const Vector& lhs, const Vector& rhs) const {
  return std::lexicographical_compare(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(),
                                      [](const Rational& a, const Rational& b) { return cmp(a, b) < 0; });
}

}  // namespace tropic
