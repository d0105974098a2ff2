#pragma once

#include <string>
#include <vector>

#include "mactab/common.hpp"

namespace mactab {

// Exact element of Q(zeta_N), stored on the power basis 1, z, ..., z^(phi(N)-1)
// after reduction modulo the N-th cyclotomic polynomial.  The stored form is
// canonical for a fixed modulus; equality across moduli lifts both sides to the
// lcm first.
class Cyclotomic {
 public:
  Cyclotomic() : n_(1), c_(1, Rat(0)) {}

  static Cyclotomic rational(const Rat& r);
  static Cyclotomic integer(long v) { return rational(Rat(v)); }
  // zeta_N^e
  static Cyclotomic root(int64_t n, int64_t e);

  int64_t modulus() const { return n_; }
  const std::vector<Rat>& coeffs() const { return c_; }

  bool is_zero() const;
  bool is_rational() const;
  Rat rational_part() const;  // valid only when is_rational()

  Cyclotomic lifted(int64_t m) const;  // requires n_ | m

  Cyclotomic operator+(const Cyclotomic& o) const;
  Cyclotomic operator-(const Cyclotomic& o) const;
  Cyclotomic operator*(const Cyclotomic& o) const;
  Cyclotomic operator-() const;
  Cyclotomic& operator+=(const Cyclotomic& o) { return *this = *this + o; }
  Cyclotomic& operator-=(const Cyclotomic& o) { return *this = *this - o; }
  Cyclotomic& operator*=(const Cyclotomic& o) { return *this = *this * o; }

  Cyclotomic scaled(const Rat& r) const;
  Cyclotomic times_root(int64_t e) const;  // multiply by zeta_N^e, same modulus
  Cyclotomic conj() const;                 // zeta_N -> zeta_N^(N-1), extended linearly
  Cyclotomic inverse() const;              // throws DivisionByZero on zero
  Cyclotomic abs_square() const { return *this * conj(); }

  bool equals(const Cyclotomic& o) const;
  bool operator==(const Cyclotomic& o) const { return equals(o); }
  bool operator!=(const Cyclotomic& o) const { return !equals(o); }

  // Accumulate r * zeta_N^e without the full operator chain; exponent taken mod N.
  void add_root_multiple(const Rat& r, int64_t e);

  std::string to_string() const;

 private:
  Cyclotomic(int64_t n, std::vector<Rat> c) : n_(n), c_(std::move(c)) {}
  static Cyclotomic reduce(int64_t n, std::vector<Rat> raw);  // raw indexed by exponent mod n

  int64_t n_;
  std::vector<Rat> c_;  // size phi(n_)
};

int64_t euler_phi(int64_t n);

// sqrt(q) for a prime power q, as a cyclotomic number (classical Gauss-sum
// expression; exact).  Used for half-integer power-of-q comparisons.
Cyclotomic sqrt_prime_power(int64_t q);

// A factor value q^(half_power/2) * c with c cyclotomic.  Multiplication is
// componentwise; equality is exact and aware of sqrt(q) lying in a suitable
// cyclotomic field.
struct FactorValue {
  int64_t q = 0;
  int64_t half_power = 0;  // exponent of q in units of 1/2
  Cyclotomic c;

  FactorValue() = default;
  FactorValue(int64_t q_, int64_t half_power_, Cyclotomic c_)
      : q(q_), half_power(half_power_), c(std::move(c_)) {}
  static FactorValue one(int64_t q) { return FactorValue(q, 0, Cyclotomic::integer(1)); }

  FactorValue operator*(const FactorValue& o) const;
  FactorValue pow(int64_t k) const;  // k >= 0
  FactorValue abs_square() const { return FactorValue(q, 2 * half_power, c.abs_square()); }
  FactorValue scaled(const Cyclotomic& s) const { return FactorValue(q, half_power, c * s); }

  bool is_zero() const { return c.is_zero(); }
  bool equals(const FactorValue& o) const;
  bool operator==(const FactorValue& o) const { return equals(o); }

  std::string to_string() const;
};

}  // namespace mactab
