#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace sqtsp {

/// Exact rational scalar used throughout the pipeline.
using Rational = mpq_class;

/// Lowest-terms "p/q" text; integers are written with an explicit "/1".
inline std::string to_string(const Rational& r) {
  Rational c(r);
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

/// Accepts "p/q", "p" or a finite decimal such as "0.25".
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational");
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos) throw std::invalid_argument("malformed rational: " + s);
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    if (digits.empty() || digits == "-" || digits == "+") throw std::invalid_argument("malformed rational: " + s);
    std::string den = "1" + std::string(s.size() - dot - 1, '0');
    Rational r;
    if (r.set_str(digits + "/" + den, 10) != 0) throw std::invalid_argument("malformed rational: " + s);
    r.canonicalize();
    return r;
  }
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational: " + s);
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  r.canonicalize();
  return r;
}

inline Rational rat(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }

/// Approximate value, for human-readable columns only.
inline double approx(const Rational& r) { return r.get_d(); }

}  // namespace sqtsp
