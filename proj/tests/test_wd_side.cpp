#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mactab/wd_side.hpp"
#include "testutil.hpp"

using namespace mactab;

namespace {
// The conventions the pinning procedure lands on; unit tests freeze them here,
// the harness re-derives them from the pinning set.
Conventions pinned() { return Conventions{true, 0, -1}; }
}  // namespace

TEST_CASE("param <-> wd round trips on all of the (2,3) parameter set") {
  FieldTower tw = FieldTower::build(3, 2);
  auto params = enumerate_params(tw, 2);
  CHECK(params.size() == 8);
  for (const auto& p : params) {
    TameWDClass c = param_to_wd(p);
    CHECK(c.dimension() == 2);
    CHECK(wd_to_param(c) == p);
  }
  // injectivity
  for (size_t i = 0; i < params.size(); ++i)
    for (size_t j = i + 1; j < params.size(); ++j)
      CHECK(!(param_to_wd(params[i]) == param_to_wd(params[j])));
}

TEST_CASE("unramified special classes and irreducibility") {
  FieldTower tw = FieldTower::build(3, 2);
  auto d1 = orbits_of_degree(tw, 1);
  TameWDClass sp2 = param_to_wd(make_param({{d1[0], {2}}}));
  CHECK(sp2.dimension() == 2);
  CHECK(!sp2.irreducible());
  auto d2 = orbits_of_degree(tw, 2);
  TameWDClass irr2 = param_to_wd(make_param({{d2[0], {1}}}));
  CHECK(irr2.irreducible());
}

TEST_CASE("eps0 requires pinned conventions") {
  FieldTower tw = FieldTower::build(3, 1);
  AddChar psi{&tw, 1};
  Conventions unpinned;
  CHECK_THROWS_AS(eps0_orbit(tw, orbits_of_degree(tw, 1)[0], psi, unpinned), Error);
}

TEST_CASE("eps0 of the trivial orbit over F_3") {
  FieldTower tw = FieldTower::build(3, 1);
  AddChar psi{&tw, 1};
  FactorValue e0 = eps0_orbit(tw, orbits_of_degree(tw, 1)[0], psi, pinned());
  // character sum is -1; s(1) = +1
  CHECK(e0 == FactorValue(3, -1, Cyclotomic::integer(-1)));
}

TEST_CASE("eps0 of nontrivial degree-1 orbits has modulus one") {
  for (int64_t q : {3, 4, 5}) {
    FieldTower tw = FieldTower::build(q, 1);
    AddChar psi{&tw, 1};
    auto orbits = orbits_of_degree(tw, 1);
    for (const auto& o : orbits) {
      if (o.is_trivial()) continue;
      CHECK(eps0_orbit(tw, o, psi, pinned()).abs_square() == FactorValue::one(q));
    }
  }
}

TEST_CASE("eps0 Gauss-sum modulus for orbits of degree up to 3") {
  for (int64_t q : {2, 3, 4, 5}) {
    for (int d : {1, 2, 3}) {
      FieldTower tw = FieldTower::build(q, d);
      AddChar psi{&tw, 1};
      for (const auto& o : orbits_of_degree(tw, d)) {
        if (o.is_trivial()) continue;
        CHECK(eps0_orbit(tw, o, psi, pinned()).abs_square() == FactorValue::one(q));
      }
    }
  }
}

TEST_CASE("eps0 of the degree-2 orbit over F_2 by direct summation") {
  FieldTower tw = FieldTower::build(2, 2);
  AddChar psi{&tw, 1};
  auto d2 = orbits_of_degree(tw, 2);
  REQUIRE(d2.size() == 1);
  // independent oracle: sum theta^-1(x) psi(Tr x) over the three units of F_4
  Cyclotomic sum;
  for (int64_t e = 0; e < 3; ++e) {
    FieldElem x = tw.from_dlog(2, e);
    sum += Cyclotomic::root(3, -e) * psi.value(tw.trace(x, 1));
  }
  CHECK(sum == Cyclotomic::integer(2));  // 1 - z3 - z3^2
  FactorValue expect(2, -2, -sum);      // s(2) = -1
  CHECK(eps0_orbit(tw, d2[0], psi, pinned()) == expect);
  CHECK(eps0_orbit(tw, d2[0], psi, pinned()) == FactorValue(2, 0, Cyclotomic::integer(-1)));
}

TEST_CASE("eps0_class: multiplicativity over inertia constituents") {
  FieldTower tw = FieldTower::build(3, 2);
  AddChar psi{&tw, 1};
  auto d1 = orbits_of_degree(tw, 1);
  auto d2 = orbits_of_degree(tw, 2);

  FactorValue e_triv = eps0_orbit(tw, d1[0], psi, pinned());
  // sp(2) on the trivial orbit: square of the orbit constant
  TameWDClass sp2 = param_to_wd(make_param({{d1[0], {2}}}));
  CHECK(eps0_class(tw, sp2, psi, pinned()) == e_triv * e_triv);
  // irreducible class of dimension 2: the orbit constant itself
  TameWDClass irr2 = param_to_wd(make_param({{d2[0], {1}}}));
  CHECK(eps0_class(tw, irr2, psi, pinned()) == eps0_orbit(tw, d2[0], psi, pinned()));
  // two distinct degree-1 orbits: product of the two level-1 constants
  TameWDClass two = param_to_wd(make_param({{d1[0], {1}}, {d1[1], {1}}}));
  CHECK(eps0_class(tw, two, psi, pinned()) ==
        e_triv * eps0_orbit(tw, d1[1], psi, pinned()));
}

TEST_CASE("eps0_pair via tensor decomposition") {
  FieldTower tw = FieldTower::build(3, 2);
  AddChar psi{&tw, 1};
  auto d1 = orbits_of_degree(tw, 1);
  auto d2 = orbits_of_degree(tw, 2);
  TameWDClass c13 = param_to_wd(make_param({{d2[0], {1}}}));   // orbit {1,3}
  TameWDClass c57 = param_to_wd(make_param({{d2[2], {1}}}));   // orbit {5,7}
  TameWDClass c26 = param_to_wd(make_param({{d2[1], {1}}}));   // orbit {2,6}
  TameWDClass csgn = param_to_wd(make_param({{d1[1], {1}}}));  // level-1 exponent 1
  TameWDClass ctriv = param_to_wd(make_param({{d1[0], {1}}}));

  CHECK(eps0_pair(tw, c13, csgn, psi, pinned()) == eps0_class(tw, c57, psi, pinned()));
  FactorValue lhs = eps0_pair(tw, c13, c13, psi, pinned());
  FactorValue rhs = eps0_class(tw, c26, psi, pinned()) *
                    eps0_orbit(tw, d1[1], psi, pinned()).pow(2);
  CHECK(lhs == rhs);
  CHECK(eps0_pair(tw, c13, ctriv, psi, pinned()) == eps0_class(tw, c13, psi, pinned()));
  // symmetry
  CHECK(eps0_pair(tw, c13, csgn, psi, pinned()) == eps0_pair(tw, csgn, c13, psi, pinned()));
  // not defined for reducible classes
  TameWDClass sp2 = param_to_wd(make_param({{d1[0], {2}}}));
  CHECK_THROWS_AS(eps0_pair(tw, sp2, c13, psi, pinned()), Error);
}

TEST_CASE("determinant character of a class") {
  FieldTower tw = FieldTower::build(3, 2);
  auto d2 = orbits_of_degree(tw, 2);
  // orbit {1,3}: exponent 1 mod 2
  CHECK(wd_det_character(3, param_to_wd(make_param({{d2[0], {1}}}))) == LevelChar{1, 1});
  // orbit {2,6}: exponent 0 mod 2
  CHECK(wd_det_character(3, param_to_wd(make_param({{d2[1], {1}}}))) == LevelChar{1, 0});
}
