#pragma once

// Exact rational scalars. GMP's mpq_class already maintains the canonical
// form we rely on everywhere: lowest terms, denominator > 0.

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace f2v {

using Rational = mpq_class;

inline Rational rat(long n) { return Rational(n); }

inline Rational rat(long n, long d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }

// "p" when the denominator is 1, "p/q" otherwise; sign attached to p.
inline std::string rat_string(const Rational& r) { return r.get_str(); }

inline Rational rat_from_string(const std::string& s) {
  Rational r(s);
  r.canonicalize();
  return r;
}

}  // namespace f2v
