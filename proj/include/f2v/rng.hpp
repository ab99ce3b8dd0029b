#pragma once

// Deterministic cross-platform sampling. splitmix64 core with hand-rolled
// bounded draws; std:: distributions are implementation-defined and would
// break byte-identical reports across toolchains.

#include <cstdint>

#include "f2v/rational.hpp"

namespace f2v {

struct Rng {
  uint64_t state;

  explicit Rng(uint64_t seed) : state(seed) {}

  uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform-ish integer in [lo, hi]; the tiny modulo bias is irrelevant here.
  long range(long lo, long hi) {
    return lo + static_cast<long>(next() % static_cast<uint64_t>(hi - lo + 1));
  }

  Rational rational(long max_abs_num = 9, long max_den = 4) {
    long n = range(-max_abs_num, max_abs_num);
    long d = range(1, max_den);
    return rat(n, d);
  }

  Rational nonzero_rational(long max_abs_num = 9, long max_den = 4) {
    Rational r = rational(max_abs_num, max_den);
    while (is_zero(r)) r = rational(max_abs_num, max_den);
    return r;
  }
};

}  // namespace f2v
