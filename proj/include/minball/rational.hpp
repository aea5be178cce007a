#ifndef MINBALL_RATIONAL_HPP
#define MINBALL_RATIONAL_HPP

#include <algorithm>
#include <cctype>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace minball {

using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;

// Accepts "a", "a/b" and finite decimals such as "-0.125" or "2.5e-1", exactly.
inline Rational parse_rational(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw DomainError("empty rational");
  try {
    if (auto slash = s.find('/'); slash != std::string::npos) {
      if (s.find('/', slash + 1) != std::string::npos) throw DomainError("more than one '/'");
      const Rational num = parse_rational(s.substr(0, slash));
      const Rational den = parse_rational(s.substr(slash + 1));
      if (den == 0) throw DomainError("zero denominator in '" + text + "'");
      return num / den;
    }
    int exp10 = 0;
    if (auto e = s.find_first_of("eE"); e != std::string::npos) {
      exp10 = std::stoi(s.substr(e + 1));
      if (std::abs(exp10) > 4096) throw DomainError("exponent out of range");
      s = s.substr(0, e);
    }
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
      neg = s[0] == '-';
      s = s.substr(1);
    }
    std::string digits;
    int frac = 0;
    bool seen_dot = false;
    for (char ch : s) {
      if (ch == '.') {
        if (seen_dot) throw DomainError("bad number");
        seen_dot = true;
      } else if (std::isdigit(static_cast<unsigned char>(ch))) {
        digits += ch;
        if (seen_dot) ++frac;
      } else {
        throw DomainError("bad number");
      }
    }
    if (digits.empty()) throw DomainError("bad number");
    // a leading zero would select octal in the BigInt string constructor
    digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
    Rational value{BigInt(digits)};
    const int shift = exp10 - frac;
    const BigInt ten = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::abs(shift)));
    value = shift >= 0 ? value * ten : value / ten;
    return neg ? -value : value;
  } catch (const DomainError&) {
    throw DomainError("cannot parse rational '" + text + "'");
  } catch (const std::exception&) {
    throw DomainError("cannot parse rational '" + text + "'");
  }
}

inline std::string to_string(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r), den = boost::multiprecision::denominator(r);
  return den == 1 ? num.str() : num.str() + "/" + den.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational rmin(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational rmax(const Rational& a, const Rational& b) { return a < b ? b : a; }

} // namespace minball

#endif // MINBALL_RATIONAL_HPP
