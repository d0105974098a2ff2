#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "mactab/char_lattice.hpp"
#include "testutil.hpp"

using namespace mactab;
using mactab::testutil::Rng;

TEST_CASE("partitions") {
  CHECK(partitions_of(4).size() == 5);
  CHECK(partitions_of(1) == std::vector<Partition>{{1}});
  CHECK(partition_hooks({2, 1}) == std::vector<int>{3, 1, 1});
  CHECK(partition_n_stat({2, 1, 1}) == 3);
}

TEST_CASE("regularity") {
  CHECK(is_regular(3, LevelChar{2, 1}));
  CHECK_FALSE(is_regular(3, LevelChar{2, 4}));  // 3*4 = 4 mod 8
  CHECK(is_regular(2, LevelChar{1, 0}));
}

TEST_CASE("minimal level reduction and re-inflation") {
  // exponent 4 at level 2 over q=3 is inflated from exponent 1 at level 1
  LevelChar r = reduce_level(3, LevelChar{2, 4});
  CHECK(r.level == 1);
  CHECK(r.exponent == 1);
  // reduction then inflation is the identity
  Rng rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    int64_t q = 2 + rng.below(4);
    int lvl = 1 + (int)rng.below(3);
    int64_t on = ipow(q, lvl) - 1;
    LevelChar t{lvl, rng.below(on)};
    LevelChar m = reduce_level(q, t);
    int64_t s = on / (ipow(q, m.level) - 1);
    CHECK(mod_pos(m.exponent * s, on) == mod_pos(t.exponent, on));
  }
}

TEST_CASE("orbits of degree") {
  FieldTower t3 = FieldTower::build(3, 2);
  auto d1 = orbits_of_degree(t3, 1);
  CHECK(d1.size() == 2);
  auto d2 = orbits_of_degree(t3, 2);
  CHECK(d2.size() == 3);
  CHECK(d2[0].orbit == std::vector<int64_t>{1, 3});
  CHECK(d2[1].orbit == std::vector<int64_t>{2, 6});
  CHECK(d2[2].orbit == std::vector<int64_t>{5, 7});

  FieldTower t2 = FieldTower::build(2, 2);
  auto e2 = orbits_of_degree(t2, 2);
  CHECK(e2.size() == 1);
  CHECK(e2[0].orbit == std::vector<int64_t>{1, 2});
}

TEST_CASE("orbit counts match the necklace formula") {
  auto mobius = [](int n) {
    int m = 1;
    for (int p = 2; p * p <= n; ++p) {
      if (n % p == 0) {
        n /= p;
        if (n % p == 0) return 0;
        m = -m;
      }
    }
    if (n > 1) m = -m;
    return m;
  };
  for (int64_t q : {2, 3, 4, 5}) {
    for (int d : {1, 2, 3}) {
      if (ipow(q, d) > (int64_t(1) << 12)) continue;
      FieldTower tw = FieldTower::build(q, d);
      int64_t expect = 0;
      for (int m = 1; m <= d; ++m) {
        if (d % m != 0) continue;
        expect += mobius(d / m) * (ipow(q, m) - 1);
      }
      expect /= d;
      CHECK((int64_t)orbits_of_degree(tw, d).size() == expect);
    }
  }
}

TEST_CASE("parameter enumeration counts") {
  FieldTower t3 = FieldTower::build(3, 2);
  CHECK(enumerate_params(t3, 1).size() == 2);
  CHECK(enumerate_params(t3, 2).size() == 8);
  FieldTower t2 = FieldTower::build(2, 2);
  CHECK(enumerate_params(t2, 2).size() == 3);
  // duplicate-free
  auto ps = enumerate_params(t3, 2);
  std::set<ParamFunction> s(ps.begin(), ps.end());
  CHECK(s.size() == ps.size());
  for (const auto& p : ps) CHECK(p.total == 2);
}

TEST_CASE("orbit product decomposition") {
  FieldTower t3 = FieldTower::build(3, 2);
  auto d2 = orbits_of_degree(t3, 2);
  auto d1 = orbits_of_degree(t3, 1);
  const GaloisOrbit& o13 = d2[0];   // {1,3}
  const GaloisOrbit& triv = d1[0];  // exponent 0
  const GaloisOrbit& sgn = d1[1];   // exponent 1

  // {1,3} x (deg-1, e=1) -> one degree-2 orbit {5,7}
  auto r1 = orbit_product_decompose(t3, o13, sgn);
  REQUIRE(r1.size() == 1);
  CHECK(r1[0].first.orbit == std::vector<int64_t>{5, 7});
  CHECK(r1[0].second == 1);

  // {1,3} x {1,3} -> {2,6} once and the deg-1 orbit e=1 twice
  auto r2 = orbit_product_decompose(t3, o13, o13);
  REQUIRE(r2.size() == 2);
  CHECK(r2[0].first.degree == 1);
  CHECK(r2[0].first.rep_exponent == 1);
  CHECK(r2[0].second == 2);
  CHECK(r2[1].first.orbit == std::vector<int64_t>{2, 6});
  CHECK(r2[1].second == 1);

  // tensoring with the trivial orbit is the identity
  auto r3 = orbit_product_decompose(t3, o13, triv);
  REQUIRE(r3.size() == 1);
  CHECK(r3[0].first == o13);
  CHECK(r3[0].second == 1);
}

TEST_CASE("product decomposition conserves weighted degree") {
  Rng rng(17);
  for (int64_t q : {2, 3}) {
    FieldTower tw = FieldTower::build(q, 2);
    std::vector<GaloisOrbit> all;
    for (int d : {1, 2}) {
      auto od = orbits_of_degree(tw, d);
      all.insert(all.end(), od.begin(), od.end());
    }
    for (int rep = 0; rep < 12; ++rep) {
      const GaloisOrbit& a = all[rng.below((int64_t)all.size())];
      const GaloisOrbit& b = all[rng.below((int64_t)all.size())];
      auto r = orbit_product_decompose(tw, a, b);
      int64_t w = 0;
      for (auto& pr : r) w += (int64_t)pr.first.degree * pr.second;
      CHECK(w == (int64_t)a.degree * b.degree);
    }
  }
}

TEST_CASE("orbit evaluation matches the defining character") {
  FieldTower t3 = FieldTower::build(3, 2);
  auto d2 = orbits_of_degree(t3, 2);
  const GaloisOrbit& o = d2[0];
  for (int64_t e = 0; e < t3.unit_order(2); ++e) {
    FieldElem x = t3.from_dlog(2, e);
    CHECK(eval_orbit_rep(t3, o, x) == Cyclotomic::root(8, o.rep_exponent * e));
  }
}
