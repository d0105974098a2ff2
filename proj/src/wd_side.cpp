#include "mactab/wd_side.hpp"

#include <algorithm>

namespace mactab {

int TameWDClass::dimension() const {
  int d = 0;
  for (const auto& [o, lam] : parts) d += o.degree * partition_weight(lam);
  return d;
}

bool TameWDClass::irreducible() const {
  return parts.size() == 1 && parts[0].second == Partition{1};
}

TameWDClass param_to_wd(const ParamFunction& p) {
  TameWDClass c;
  c.parts = p.parts;
  return c;
}

ParamFunction wd_to_param(const TameWDClass& c) { return make_param(c.parts); }

FactorValue eps0_orbit(const FieldTower& tw, const GaloisOrbit& o, const AddChar& psi,
                       const Conventions& conv) {
  require(conv.pinned, Err::ConventionNotPinned, "epsilon conventions not pinned");
  int d = o.degree;
  int64_t on = tw.unit_order(d);
  Cyclotomic sum = Cyclotomic::root(lcm64(on, tw.p()), 0).scaled(Rat(0));
  for (int64_t e = 0; e < on; ++e) {
    FieldElem x = tw.from_dlog(d, e);
    int pe = psi.exponent(tw.trace(x, 1));
    // theta^iota(x) psi(tr x) as a single root of unity
    Cyclotomic term = Cyclotomic::root(on, conv.iota * o.rep_exponent * e) *
                      Cyclotomic::root(tw.p(), pe);
    sum += term;
  }
  if (conv.sign(d) < 0) sum = -sum;
  return FactorValue(tw.q(), -d, sum);
}

FactorValue eps0_class(const FieldTower& tw, const TameWDClass& c, const AddChar& psi,
                       const Conventions& conv) {
  FactorValue acc = FactorValue::one(tw.q());
  for (const auto& [o, lam] : c.parts)
    acc = acc * eps0_orbit(tw, o, psi, conv).pow(partition_weight(lam));
  return acc;
}

FactorValue eps0_pair(const FieldTower& tw, const TameWDClass& a, const TameWDClass& b,
                      const AddChar& psi, const Conventions& conv) {
  require(a.irreducible() && b.irreducible(), Err::NotIrreducible,
          "pair epsilon defined for irreducible classes");
  FactorValue acc = FactorValue::one(tw.q());
  for (const auto& [o, mult] : orbit_product_decompose(tw, a.parts[0].first, b.parts[0].first))
    acc = acc * eps0_orbit(tw, o, psi, conv).pow(mult);
  return acc;
}

LevelChar wd_det_character(int64_t q, const TameWDClass& c) {
  int64_t e = 0;
  for (const auto& [o, lam] : c.parts)
    e += partition_weight(lam) * mod_pos(o.rep_exponent, q - 1);
  return LevelChar{1, mod_pos(e, q - 1)};
}

}  // namespace mactab
