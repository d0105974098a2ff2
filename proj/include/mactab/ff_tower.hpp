#pragma once

#include <cstdint>
#include <vector>

#include "mactab/common.hpp"
#include "mactab/cyclotomic.hpp"

namespace mactab {

// Element of k_n inside a fixed tower.  code 0 is zero; a nonzero element
// g_n^e is stored as code 1+e with e in [0, q^n-1).
struct FieldElem {
  int level = 1;
  int64_t code = 0;
  bool operator==(const FieldElem& o) const { return level == o.level && code == o.code; }
  bool operator!=(const FieldElem& o) const { return !(*this == o); }
};

// The tower k = F_q c k_2 c ... c k_L with norm-compatible generators
// g_n := g_L^((q^L-1)/(q^n-1)).  All arithmetic runs on discrete logs over a
// Zech-log table for the ambient field F_{q^L}, built from the smallest
// primitive polynomial over F_p in the documented coefficient order.
class FieldTower {
 public:
  static FieldTower build(int64_t q, int L, int64_t limit = int64_t(1) << 20);

  int64_t p() const { return p_; }
  int64_t q() const { return q_; }
  int top_level() const { return L_; }
  int64_t level_size(int n) const { return ipow(q_, n); }
  int64_t unit_order(int n) const { return ipow(q_, n) - 1; }

  FieldElem zero(int n) const { check_level(n); return FieldElem{n, 0}; }
  FieldElem one(int n) const { check_level(n); return FieldElem{n, 1}; }
  FieldElem generator(int n) const { return from_dlog(n, 1); }
  FieldElem from_dlog(int n, int64_t e) const {
    check_level(n);
    return FieldElem{n, 1 + mod_pos(e, unit_order(n))};
  }
  bool is_zero(FieldElem x) const { return x.code == 0; }
  int64_t dlog(FieldElem x) const {
    require(x.code != 0, Err::ZeroElement, "dlog of zero");
    return x.code - 1;
  }

  FieldElem add(FieldElem a, FieldElem b) const;
  FieldElem sub(FieldElem a, FieldElem b) const { return add(a, neg(b)); }
  FieldElem neg(FieldElem a) const;
  FieldElem mul(FieldElem a, FieldElem b) const;
  FieldElem inv(FieldElem a) const;
  FieldElem pow(FieldElem a, int64_t k) const;

  FieldElem frobenius(FieldElem a) const;       // x -> x^q
  FieldElem embed(FieldElem a, int n) const;    // k_m -> k_n for m | n
  FieldElem norm(FieldElem a, int m) const;     // k_n -> k_m, x -> x^((q^n-1)/(q^m-1))
  FieldElem trace(FieldElem a, int m) const;    // sum of Frob^(mi) x

  // Absolute trace down to F_p, as an integer in [0, p).
  int abs_trace_int(FieldElem x) const;

  // Level-1 codes [0, q) for matrix entries; code 0 is zero, 1+e is g_1^e.
  uint8_t add1(uint8_t a, uint8_t b) const { return add1_[a * q_ + b]; }
  uint8_t mul1(uint8_t a, uint8_t b) const { return mul1_[a * q_ + b]; }
  uint8_t neg1(uint8_t a) const { return neg1_[a]; }
  uint8_t inv1(uint8_t a) const {
    require(a != 0, Err::DivisionByZero, "inverse of zero");
    return inv1_[a];
  }
  uint8_t sub1(uint8_t a, uint8_t b) const { return add1(a, neg1(b)); }
  FieldElem elem1(uint8_t code) const { return FieldElem{1, code}; }
  // The scalar -1 of k as a level-1 code.
  uint8_t minus_one1() const { return neg1_[1]; }

  // Coordinates of x in k_n over k with respect to the basis 1, g_n, ..., g_n^(n-1),
  // returned as level-1 codes.
  std::vector<uint8_t> coords(FieldElem x) const;

  const std::vector<uint8_t>& min_poly() const { return min_poly_; }

 private:
  FieldTower() = default;
  void check_level(int n) const {
    require(n >= 1 && L_ % n == 0, Err::LevelMismatch,
            "level " + std::to_string(n) + " not in tower of top level " + std::to_string(L_));
  }
  int64_t stride(int n) const { return (amb_ord_) / unit_order(n); }
  // ambient dlog (or -1 for zero) arithmetic
  int64_t amb_of(FieldElem x) const { return x.code == 0 ? -1 : (x.code - 1) * stride(x.level); }
  FieldElem from_amb(int n, int64_t a) const;
  int64_t amb_add(int64_t a, int64_t b) const;
  int64_t amb_neg(int64_t a) const;

  int64_t p_ = 0, q_ = 0, f_ = 0;
  int L_ = 0;
  int64_t qL_ = 0;
  int64_t amb_ord_ = 0;  // q^L - 1
  std::vector<uint8_t> min_poly_;                 // monic, coeffs c_0..c_{d-1} over F_p
  std::vector<std::vector<uint8_t>> pow_poly_;    // dlog -> polynomial representation
  std::vector<int64_t> zech_;                     // dlog of 1 + gamma^a, -1 if zero
  std::vector<int64_t> prime_field_amb_;          // ambient dlog of the integer j, j in [0,p)
  std::vector<uint8_t> add1_, mul1_, neg1_, inv1_;
  mutable std::vector<std::vector<std::vector<uint8_t>>> coords_cache_;  // per level
  mutable std::vector<int> coords_built_;
};

// The canonical additive character psi(x) = zeta_p^(abs trace of t*x); t is a
// level-1 twist (t = 1 gives the pinned psi, t = -1 its inverse).
struct AddChar {
  const FieldTower* tower = nullptr;
  uint8_t twist = 1;

  int exponent(FieldElem x) const {
    FieldElem t = tower->embed(tower->elem1(twist), x.level);
    return tower->abs_trace_int(tower->mul(t, x));
  }
  Cyclotomic value(FieldElem x) const {
    return Cyclotomic::root(tower->p(), exponent(x));
  }
  AddChar inverse() const { return AddChar{tower, tower->neg1(twist)}; }
};

}  // namespace mactab
