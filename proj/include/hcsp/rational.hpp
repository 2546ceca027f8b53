#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <cmath>
#include <cstdint>
#include <string>

namespace hcsp {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::rational<BigInt>;

inline Rat rat(long long n, long long d = 1) { return Rat(BigInt(n), BigInt(d)); }

inline double to_double(const Rat& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// Parses "123", "-4/7" or a decimal like "3.25" into an exact rational.
inline Rat rat_from_string(const std::string& s) {
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    return Rat(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) return Rat(BigInt(s));
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  size_t first = digits.find_first_not_of('0');  // avoid the octal prefix
  digits = first == std::string::npos ? "0" : digits.substr(first);
  BigInt den = 1;
  for (size_t i = dot + 1; i < s.size(); ++i) den *= 10;
  return Rat(BigInt(digits), den);
}

// Exact conversion: every finite double is a dyadic rational.
inline Rat rat_from_double(double v) {
  if (v == 0) return Rat(0);
  int exp;
  double m = std::frexp(v, &exp);
  auto mant = static_cast<long long>(std::ldexp(m, 53));
  exp -= 53;
  Rat r{BigInt(mant), BigInt(1)};
  if (exp > 0) r *= Rat(BigInt(1) << exp, BigInt(1));
  if (exp < 0) r /= Rat(BigInt(1) << -exp, BigInt(1));
  return r;
}

inline std::string rat_to_string(const Rat& r) {
  std::string out = r.numerator().str();
  if (r.denominator() != 1) out += "/" + r.denominator().str();
  return out;
}

}  // namespace hcsp
