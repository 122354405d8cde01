#include "core/rational.hpp"

#include <cctype>

#include "core/error.hpp"

namespace kelvin {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{"1"}
                                                         : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) {
    throw Error(ErrorCode::kParse, "not a rational: \"" + std::string(text) + "\"");
  }
  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) {
    throw Error(ErrorCode::kParse, "zero denominator: \"" + std::string(text) + "\"");
  }
  if (negative) n = -n;
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string format_rational(const Rational& value) { return value.get_str(10); }

std::string approximate_rational(const Rational& value, int digits) {
  if (digits < 0) digits = 0;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  // Round half away from zero.
  Rational scaled = abs(value) * scale;
  mpz_class twice = (2 * scaled.get_num() + scaled.get_den()) / (2 * scaled.get_den());
  std::string int_digits = twice.get_str(10);
  if (static_cast<int>(int_digits.size()) <= digits) {
    int_digits.insert(0, static_cast<std::size_t>(digits + 1 - int_digits.size()), '0');
  }
  std::string out;
  if (value < 0 && twice != 0) out.push_back('-');
  const std::size_t split = int_digits.size() - static_cast<std::size_t>(digits);
  out += int_digits.substr(0, split);
  if (digits > 0) {
    out.push_back('.');
    out += int_digits.substr(split);
  }
  return out;
}

}  // namespace kelvin
