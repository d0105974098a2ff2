#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "mactab/char_table.hpp"
#include "testutil.hpp"

using namespace mactab;

namespace {

struct Fixture {
  FieldTower tw;
  std::vector<GroupContext> ctxs;
  std::vector<CharacterTable> tables;
  std::vector<const GroupContext*> ctxp;
  std::vector<const CharacterTable*> tabp;

  Fixture(int64_t q, int n, int L) : tw(FieldTower::build(q, L)) {
    for (int s = 1; s <= n; ++s) ctxs.push_back(GroupContext::build(tw, s));
    for (int s = 1; s <= n; ++s) tables.push_back(CharacterTable::compute(ctxs[s - 1]));
    for (int s = 1; s <= n; ++s) {
      ctxp.push_back(&ctxs[s - 1]);
      tabp.push_back(&tables[s - 1]);
    }
  }
};

std::vector<int64_t> sorted_degrees(const CharacterTable& T) {
  auto d = T.degrees();
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace

TEST_CASE("GL_1(F_q) tables are the q-1 linear characters") {
  for (int64_t q : {2, 3, 4, 5}) {
    FieldTower tw = FieldTower::build(q, 1);
    GroupContext G = GroupContext::build(tw, 1);
    CharacterTable T = CharacterTable::compute(G);
    CHECK(T.size() == q - 1);
    for (auto d : T.degrees()) CHECK(d == 1);
    T.verify_orthogonality();
  }
}

TEST_CASE("GL_2(F_2) is S_3") {
  Fixture f(2, 2, 2);
  CHECK(sorted_degrees(f.tables[1]) == std::vector<int64_t>{1, 1, 2});
  f.tables[1].verify_orthogonality();
}

TEST_CASE("GL_2(F_3) degrees and orthogonality") {
  Fixture f(3, 2, 2);
  CHECK(sorted_degrees(f.tables[1]) == std::vector<int64_t>{1, 1, 2, 2, 2, 3, 3, 4});
  f.tables[1].verify_orthogonality();
  // contragredient rows exist
  for (int i = 0; i < f.tables[1].size(); ++i) CHECK(f.tables[1].contragredient(i) >= 0);
}

TEST_CASE("parabolic induction: trivial x trivial in GL_2(F_3)") {
  Fixture f(3, 2, 2);
  const CharacterTable& T1 = f.tables[0];
  const CharacterTable& T2 = f.tables[1];
  // trivial character of GL_1 is the all-ones row
  int triv1 = -1;
  for (int i = 0; i < T1.size(); ++i) {
    bool allone = true;
    for (const auto& x : T1.irr(i).v)
      if (!(x == Cyclotomic::integer(1))) allone = false;
    if (allone) triv1 = i;
  }
  REQUIRE(triv1 >= 0);
  ParabolicShape s{{1, 1}};
  ClassFunction ind = parabolic_induce(*f.ctxp[1], s, {f.ctxp[0], f.ctxp[0]},
                                       {&T1.irr(triv1), &T1.irr(triv1)});
  CHECK(ind.degree_int() == 4);
  // decomposes into exactly two constituents of dimensions 1 and 3
  std::vector<int64_t> condims;
  for (int i = 0; i < T2.size(); ++i) {
    Cyclotomic m = ind.inner(T2.irr(i));
    if (!m.is_zero()) {
      CHECK(m == Cyclotomic::integer(1));
      condims.push_back(T2.irr(i).degree_int());
    }
  }
  std::sort(condims.begin(), condims.end());
  CHECK(condims == std::vector<int64_t>{1, 3});
}

TEST_CASE("induction is commutative at character level") {
  Fixture f(3, 2, 2);
  const CharacterTable& T1 = f.tables[0];
  ParabolicShape s{{1, 1}};
  ClassFunction a = parabolic_induce(*f.ctxp[1], s, {f.ctxp[0], f.ctxp[0]},
                                     {&T1.irr(0), &T1.irr(1)});
  ClassFunction b = parabolic_induce(*f.ctxp[1], s, {f.ctxp[0], f.ctxp[0]},
                                     {&T1.irr(1), &T1.irr(0)});
  CHECK(a == b);
}

TEST_CASE("GL_3(F_2): Borel induction of the trivial has degree 21") {
  Fixture f(2, 3, 6);
  const CharacterTable& T1 = f.tables[0];
  REQUIRE(T1.size() == 1);
  ParabolicShape s{{1, 1, 1}};
  ClassFunction ind = parabolic_induce(*f.ctxp[2], s, {f.ctxp[0], f.ctxp[0], f.ctxp[0]},
                                       {&T1.irr(0), &T1.irr(0), &T1.irr(0)});
  CHECK(ind.degree_int() == 21);
}

TEST_CASE("Jacquet restriction and cuspidality in GL_2(F_3)") {
  Fixture f(3, 2, 2);
  const CharacterTable& T2 = f.tables[1];
  ParabolicShape s{{1, 1}};
  int cusp = 0, steinberg_nonzero = 0;
  for (int i = 0; i < T2.size(); ++i) {
    LeviClassFunction r = jacquet_restrict(T2.irr(i), s, {f.ctxp[0], f.ctxp[0]});
    bool cuspidal = is_cuspidal(T2.irr(i), f.ctxp);
    CHECK(cuspidal == r.is_zero());
    if (cuspidal) {
      ++cusp;
      CHECK(T2.irr(i).degree_int() == 2);  // q - 1
    }
    if (T2.irr(i).degree_int() == 3 && !r.is_zero()) ++steinberg_nonzero;
  }
  CHECK(cusp == 3);
  CHECK(steinberg_nonzero == 2);
}

TEST_CASE("adjointness of induction and restriction in GL_3(F_2)") {
  Fixture f(2, 3, 6);
  const CharacterTable& T3 = f.tables[2];
  const CharacterTable& T2 = f.tables[1];
  const CharacterTable& T1 = f.tables[0];
  ParabolicShape s{{2, 1}};
  for (int i = 0; i < T3.size(); ++i) {
    for (int a = 0; a < T2.size(); ++a) {
      for (int b = 0; b < T1.size(); ++b) {
        LeviClassFunction jr = jacquet_restrict(T3.irr(i), s, {f.ctxp[1], f.ctxp[0]});
        // <jr, sigma_a x sigma_b>_L
        LeviClassFunction sig;
        sig.L = jr.L;
        for (int idx = 0; idx < jr.L.num_classes(); ++idx) {
          auto t = jr.L.decode(idx);
          sig.v.push_back(T2.irr(a).v[t[0]] * T1.irr(b).v[t[1]]);
        }
        Cyclotomic lhs = jr.inner(sig);
        ClassFunction ind = parabolic_induce(*f.ctxp[2], s, {f.ctxp[1], f.ctxp[0]},
                                             {&T2.irr(a), &T1.irr(b)});
        Cyclotomic rhs = T3.irr(i).inner(ind);
        CHECK(lhs == rhs);
      }
    }
  }
}

TEST_CASE("GL_3(F_2) cuspidal census and Green labels") {
  Fixture f(2, 3, 6);
  const CharacterTable& T3 = f.tables[2];
  CHECK(T3.size() == 6);
  std::vector<GaloisOrbit> found;
  for (int i = 0; i < T3.size(); ++i) {
    if (!is_cuspidal(T3.irr(i), f.ctxp)) continue;
    CHECK(T3.irr(i).degree_int() == 3);  // (q-1)(q^2-1)
    found.push_back(label_cuspidal(f.tw, T3.irr(i)));
  }
  CHECK(found.size() == 2);
  CHECK(found[0].degree == 3);
  CHECK(!(found[0] == found[1]));
}

TEST_CASE("GL_2(F_3) cuspidals biject with the degree-2 orbits") {
  Fixture f(3, 2, 2);
  const CharacterTable& T2 = f.tables[1];
  std::vector<GaloisOrbit> found;
  for (int i = 0; i < T2.size(); ++i)
    if (is_cuspidal(T2.irr(i), f.ctxp)) found.push_back(label_cuspidal(f.tw, T2.irr(i)));
  REQUIRE(found.size() == 3);
  std::sort(found.begin(), found.end());
  auto orbits = orbits_of_degree(f.tw, 2);
  for (size_t i = 0; i < 3; ++i) CHECK(found[i] == orbits[i]);
}

TEST_CASE("labeling of GL_2(F_3): generic degrees and mixed parameters") {
  Fixture f(3, 2, 2);
  auto labs = label_tower(f.tw, f.ctxp, f.tabp, 2);
  const Labeling& L2 = labs[1];
  const CharacterTable& T2 = f.tables[1];
  auto d1 = orbits_of_degree(f.tw, 1);
  // trivial orbit with lambda = (2) is the trivial character (dim 1); (1,1) is Steinberg (dim q)
  int i2 = L2.irr_of_param.at(make_param({{d1[0], {2}}}));
  int i11 = L2.irr_of_param.at(make_param({{d1[0], {1, 1}}}));
  CHECK(T2.irr(i2).degree_int() == 1);
  CHECK(T2.irr(i11).degree_int() == 3);
  // mixed label: two distinct degree-1 orbits, dim q+1 = 4
  int imix = L2.irr_of_param.at(make_param({{d1[0], {1}}, {d1[1], {1}}}));
  CHECK(T2.irr(imix).degree_int() == 4);
  // bijection onto the parameter set
  CHECK((int)L2.irr_of_param.size() == T2.size());
}

TEST_CASE("central characters in GL_2(F_3)") {
  Fixture f(3, 2, 2);
  auto labs = label_tower(f.tw, f.ctxp, f.tabp, 2);
  const CharacterTable& T2 = f.tables[1];
  auto d1 = orbits_of_degree(f.tw, 1);
  int itriv = labs[1].irr_of_param.at(make_param({{d1[0], {2}}}));
  int ist = labs[1].irr_of_param.at(make_param({{d1[0], {1, 1}}}));
  CHECK(central_character(T2.irr(itriv)) == LevelChar{1, 0});
  CHECK(central_character(T2.irr(ist)) == LevelChar{1, 0});
  // cuspidal with orbit {1,3}: central exponent 1 mod 2
  for (int i = 0; i < T2.size(); ++i) {
    if (!is_cuspidal(T2.irr(i), f.ctxp)) continue;
    GaloisOrbit o = label_cuspidal(f.tw, T2.irr(i));
    LevelChar w = central_character(T2.irr(i));
    CHECK(w.exponent == mod_pos(o.rep_exponent, 2));
  }
}

TEST_CASE("cache round trip is byte-identical") {
  Fixture f(3, 2, 2);
  std::string dump = f.tables[1].cache_json();
  auto loaded = CharacterTable::from_cache_json(*f.ctxp[1], dump);
  REQUIRE(loaded.has_value());
  CHECK(loaded->cache_json() == dump);
  for (int i = 0; i < f.tables[1].size(); ++i)
    CHECK(loaded->irr(i) == f.tables[1].irr(i));
  // corrupted schema rejected
  CHECK(!CharacterTable::from_cache_json(*f.ctxp[1], "{}").has_value());
}

TEST_CASE("GL_3(F_3): the 11232-element table is exact") {
  Fixture f(3, 3, 6);
  const CharacterTable& T3 = f.tables[2];
  CHECK(T3.size() == 24);
  int64_t ss = 0;
  for (auto d : T3.degrees()) ss += d * d;
  CHECK(ss == 11232);
  T3.verify_orthogonality();
  int cusp = 0;
  for (int i = 0; i < T3.size(); ++i) {
    if (is_cuspidal(T3.irr(i), f.ctxp)) {
      ++cusp;
      CHECK(T3.irr(i).degree_int() == 16);  // (q-1)(q^2-1)
    }
  }
  CHECK(cusp == 8);
}
