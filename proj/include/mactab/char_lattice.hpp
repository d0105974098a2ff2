#pragma once

#include <cstdint>
#include <vector>

#include "mactab/common.hpp"
#include "mactab/ff_tower.hpp"

namespace mactab {

// Weakly decreasing positive parts.
using Partition = std::vector<int>;

std::vector<Partition> partitions_of(int n);
int partition_weight(const Partition& p);
// n(lambda) = sum (i-1) lambda_i  and the multiset of hook lengths.
int64_t partition_n_stat(const Partition& p);
std::vector<int> partition_hooks(const Partition& p);

// A character of k_n^x: theta(g_n^a) = zeta_(q^n-1)^(e a).  Stored at its
// minimal level (inflated-from form detected and reduced).
struct LevelChar {
  int level = 1;
  int64_t exponent = 0;
  bool operator==(const LevelChar& o) const {
    return level == o.level && exponent == o.exponent;
  }
};

// Frobenius orbit of a character of minimal level `degree`; the canonical
// representative is the smallest exponent in the orbit.
struct GaloisOrbit {
  int degree = 1;
  int64_t rep_exponent = 0;
  std::vector<int64_t> orbit;  // sorted exponents at level `degree`

  bool operator==(const GaloisOrbit& o) const {
    return degree == o.degree && rep_exponent == o.rep_exponent;
  }
  bool operator<(const GaloisOrbit& o) const {
    if (degree != o.degree) return degree < o.degree;
    return rep_exponent < o.rep_exponent;
  }
  bool is_trivial() const { return degree == 1 && rep_exponent == 0; }
};

// Gamma-invariant partition-valued function with finite support, keyed by
// canonical orbit representatives; total = sum |lambda| * degree.
struct ParamFunction {
  std::vector<std::pair<GaloisOrbit, Partition>> parts;  // sorted by orbit
  int total = 0;

  bool operator==(const ParamFunction& o) const { return parts == o.parts; }
  bool operator<(const ParamFunction& o) const;
};

LevelChar reduce_level(int64_t q, LevelChar t);
bool is_regular(int64_t q, const LevelChar& t);
GaloisOrbit orbit_of(int64_t q, const LevelChar& t);
// theta(x) for x in k_d^x with [theta] given at minimal level dividing d.
Cyclotomic eval_orbit_rep(const FieldTower& tw, const GaloisOrbit& o, FieldElem x);

std::vector<GaloisOrbit> orbits_of_degree(const FieldTower& tw, int d);

// All of P_n(X)^Gamma for the given tower; canonical sorted order.
std::vector<ParamFunction> enumerate_params(const FieldTower& tw, int n,
                                            int64_t cap = 2000000);

ParamFunction make_param(std::vector<std::pair<GaloisOrbit, Partition>> parts);

// Multiset of Galois orbits of the products theta1^(q^i) * theta2^(q^j),
// with multiplicities; total degree-weighted size is d1*d2.
std::vector<std::pair<GaloisOrbit, int>> orbit_product_decompose(const FieldTower& tw,
                                                                 const GaloisOrbit& a,
                                                                 const GaloisOrbit& b);

}  // namespace mactab
