#include "disclab/rational.hpp"

#include <cctype>
#include <cstdlib>

#include "disclab/error.hpp"

namespace disclab {

namespace {

long long parse_integer(const std::string& text) {
  if (text.empty()) fail(ErrorKind::parameter, "empty number");
  std::size_t pos = 0;
  long long value = 0;
  try {
    value = std::stoll(text, &pos);
  } catch (const std::exception&) {
    fail(ErrorKind::parameter, "malformed number '" + text + "'");
  }
  if (pos != text.size())
    fail(ErrorKind::parameter, "malformed number '" + text + "'");
  return value;
}

}  // namespace

Rational rational_from_string(const std::string& text) {
  if (text.empty()) fail(ErrorKind::parameter, "empty rational literal");
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const long long num = parse_integer(text.substr(0, slash));
    const long long den = parse_integer(text.substr(slash + 1));
    if (den == 0) fail(ErrorKind::parameter, "zero denominator in '" + text + "'");
    return Rational(num, den);
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(parse_integer(text), 1);

  std::string head = text.substr(0, dot);
  std::string tail = text.substr(dot + 1);
  bool negative = false;
  if (!head.empty() && (head[0] == '-' || head[0] == '+')) {
    negative = head[0] == '-';
    head.erase(0, 1);
  }
  if (tail.empty()) tail = "0";
  if (tail.size() > 17)
    fail(ErrorKind::parameter, "too many decimal digits in '" + text + "'");
  for (char c : tail)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      fail(ErrorKind::parameter, "malformed number '" + text + "'");
  const long long whole = head.empty() ? 0 : parse_integer(head);
  long long den = 1;
  for (std::size_t k = 0; k < tail.size(); ++k) den *= 10;
  const long long frac = parse_integer(tail);
  Rational value = Rational(whole, 1) + Rational(frac, den);
  return negative ? -value : value;
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace disclab
