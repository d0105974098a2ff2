#pragma once

#include <vector>

#include "mactab/char_lattice.hpp"
#include "mactab/common.hpp"
#include "mactab/cyclotomic.hpp"
#include "mactab/ff_tower.hpp"

namespace mactab {

// Inertial equivalence class of a tame Weil-Deligne representation: a multiset
// of (orbit, partition) pairs, each encoding (+)_parts sp(part) (x) rho(theta).
// The canonical sorted form is the equality test.
struct TameWDClass {
  std::vector<std::pair<GaloisOrbit, Partition>> parts;

  int dimension() const;
  bool irreducible() const;  // single orbit with lambda = (1)
  bool operator==(const TameWDClass& o) const { return parts == o.parts; }
  bool operator<(const TameWDClass& o) const { return parts < o.parts; }
};

TameWDClass param_to_wd(const ParamFunction& p);
ParamFunction wd_to_param(const TameWDClass& c);

// The two binary conventions of the tame epsilon constant, frozen by the
// pinning procedure before any epsilon is computed: the sign family
// s(d) = (-1)^(d-1) or (-1)^d, and the dualization theta -> theta^iota.
struct Conventions {
  bool pinned = false;
  int sign_parity = 0;  // 0: s(d) = (-1)^(d-1); 1: s(d) = (-1)^d
  int iota = -1;        // +1 or -1

  int sign(int d) const { return ((d - 1 + sign_parity) % 2 == 0) ? 1 : -1; }
};

// s(d) q^(-d/2) sum_{x in k_d^x} theta^iota(x) psi(Tr_{k_d/k} x).
FactorValue eps0_orbit(const FieldTower& tw, const GaloisOrbit& o, const AddChar& psi,
                       const Conventions& conv);

// Product over pairs of eps0_orbit^(|lambda|); the sp parts enter only through
// the multiplicity of the inertia restriction.
FactorValue eps0_class(const FieldTower& tw, const TameWDClass& c, const AddChar& psi,
                       const Conventions& conv);

// Tensor of two irreducible classes: decompose the inertia restriction into
// orbits and multiply the per-orbit constants.
FactorValue eps0_pair(const FieldTower& tw, const TameWDClass& a, const TameWDClass& b,
                      const AddChar& psi, const Conventions& conv);

// Determinant character of the class restricted to k^x, as a level-1 exponent.
LevelChar wd_det_character(int64_t q, const TameWDClass& c);

}  // namespace mactab
