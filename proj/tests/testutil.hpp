#pragma once

// Test-only helpers: a floating-point evaluation oracle for cyclotomic values
// (independent of the exact reduction path) and a tiny deterministic RNG.

#include <complex>
#include <cstdint>

#include "mactab/cyclotomic.hpp"

namespace mactab::testutil {

inline std::complex<double> eval(const Cyclotomic& v) {
  const double tau = 6.283185307179586476925287;
  std::complex<double> acc(0.0, 0.0);
  const auto& c = v.coeffs();
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    double x = (double)boost::multiprecision::numerator(c[i]).convert_to<long long>() /
               (double)boost::multiprecision::denominator(c[i]).convert_to<long long>();
    double ang = tau * (double)i / (double)v.modulus();
    acc += x * std::complex<double>(std::cos(ang), std::sin(ang));
  }
  return acc;
}

inline double eval_abs_err(const Cyclotomic& v, std::complex<double> expect) {
  return std::abs(eval(v) - expect);
}

// splitmix64: small, deterministic, no <random> churn.
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  int64_t below(int64_t n) { return (int64_t)(next() % (uint64_t)n); }
};

}  // namespace mactab::testutil
