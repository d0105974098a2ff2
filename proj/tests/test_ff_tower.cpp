#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mactab/ff_tower.hpp"
#include "testutil.hpp"

using namespace mactab;

TEST_CASE("build validates inputs") {
  CHECK_THROWS_AS(FieldTower::build(6, 1), Error);
  CHECK_THROWS_AS(FieldTower::build(2, 25), Error);  // 2^25 over default limit
  FieldTower t = FieldTower::build(2, 1);
  CHECK(t.unit_order(1) == 1);
  CHECK(t.generator(1) == t.one(1));
}

TEST_CASE("q=3 L=2 tower basics") {
  FieldTower t = FieldTower::build(3, 2);
  CHECK(t.unit_order(2) == 8);
  // norm compatibility: g_2^4 = g_1
  FieldElem g2 = t.generator(2);
  CHECK(t.pow(g2, 4) == t.embed(t.generator(1), 2));
  CHECK(t.norm(g2, 1) == t.generator(1));
  // the element 2 = -1 is the unique order-2 element of F_3
  CHECK(t.generator(1) == t.neg(t.one(1)));
}

TEST_CASE("q=4 L=2 contains F_4 inside F_16") {
  FieldTower t = FieldTower::build(4, 2);
  CHECK(t.p() == 2);
  CHECK(t.unit_order(1) == 3);
  CHECK(t.unit_order(2) == 15);
  // Frobenius x -> x^4 fixes exactly k_1
  int fixed = 0;
  for (int64_t c = 0; c < t.level_size(2); ++c) {
    FieldElem x{2, c};
    if (t.frobenius(x) == x) ++fixed;
  }
  CHECK(fixed == 4);
}

TEST_CASE("norm transitivity and surjectivity") {
  FieldTower t = FieldTower::build(2, 4);
  // N_{2,1} o N_{4,2} = N_{4,1} on all of k_4^x
  for (int64_t e = 0; e < t.unit_order(4); ++e) {
    FieldElem x = t.from_dlog(4, e);
    CHECK(t.norm(t.norm(x, 2), 1) == t.norm(x, 1));
  }
  CHECK(t.norm(t.zero(4), 1) == t.zero(1));
  // identity case m = n
  FieldElem y = t.from_dlog(4, 7);
  CHECK(t.norm(y, 4) == y);
}

TEST_CASE("norm fibers have the predicted size") {
  for (int64_t q : {2, 3, 4, 5}) {
    for (int L : {2, 3}) {
      if (ipow(q, L) > (int64_t(1) << 12)) continue;
      FieldTower t = FieldTower::build(q, L);
      for (int m = 1; m < L; ++m) {
        if (L % m != 0) continue;
        std::vector<int64_t> fiber(t.unit_order(m), 0);
        for (int64_t e = 0; e < t.unit_order(L); ++e)
          fiber[t.dlog(t.norm(t.from_dlog(L, e), m))]++;
        int64_t expect = t.unit_order(L) / t.unit_order(m);
        for (int64_t c : fiber) CHECK(c == expect);
      }
    }
  }
}

TEST_CASE("trace is additive, surjective, and k_m-linear") {
  FieldTower t = FieldTower::build(3, 2);
  // trace of the scalar 1 from level 2 is 2*1
  CHECK(t.trace(t.one(2), 1) == t.add(t.one(1), t.one(1)));
  CHECK(t.trace(t.zero(2), 1) == t.zero(1));
  // additive character sums to zero over the whole field
  AddChar psi{&t, 1};
  Cyclotomic total;
  for (int64_t c = 0; c < t.level_size(2); ++c)
    total += psi.value(t.trace(FieldElem{2, c}, 1));
  CHECK(total == Cyclotomic::integer(0));
  // surjectivity and k-linearity of trace
  std::vector<int> hit(t.level_size(1), 0);
  for (int64_t c = 0; c < t.level_size(2); ++c)
    hit[t.trace(FieldElem{2, c}, 1).code] = 1;
  for (int v : hit) CHECK(v == 1);
  for (int64_t a = 0; a < t.level_size(1); ++a) {
    FieldElem s{1, a};
    for (int64_t c = 0; c < t.level_size(2); ++c) {
      FieldElem x{2, c};
      CHECK(t.trace(t.mul(t.embed(s, 2), x), 1) == t.mul(s, t.trace(x, 1)));
    }
  }
}

TEST_CASE("frobenius properties") {
  FieldTower t = FieldTower::build(3, 2);
  FieldElem g2 = t.generator(2);
  CHECK(t.frobenius(g2) == t.pow(g2, 3));
  for (int64_t c = 0; c < t.level_size(1); ++c) {
    FieldElem x{1, c};
    CHECK(t.frobenius(x) == x);
  }
  for (int64_t c = 0; c < t.level_size(2); ++c) {
    FieldElem x{2, c};
    CHECK(t.frobenius(t.frobenius(x)) == x);
  }
}

TEST_CASE("generator compatibility across all divisor pairs") {
  FieldTower t = FieldTower::build(2, 4);
  for (int n : {1, 2, 4}) {
    for (int m : {1, 2, 4}) {
      if (n % m != 0) continue;
      CHECK(t.norm(t.generator(n), m) == t.generator(m));
    }
  }
}

TEST_CASE("level-1 tables agree with element ops") {
  for (int64_t q : {2, 3, 4, 5}) {
    FieldTower t = FieldTower::build(q, 1);
    for (int64_t a = 0; a < q; ++a) {
      for (int64_t b = 0; b < q; ++b) {
        FieldElem ea{1, a}, eb{1, b};
        CHECK(t.add(ea, eb).code == t.add1((uint8_t)a, (uint8_t)b));
        CHECK(t.mul(ea, eb).code == t.mul1((uint8_t)a, (uint8_t)b));
      }
      CHECK(t.neg(FieldElem{1, a}).code == t.neg1((uint8_t)a));
    }
  }
}

TEST_CASE("coordinates reconstruct elements") {
  FieldTower t = FieldTower::build(3, 2);
  FieldElem g2 = t.generator(2);
  for (int64_t c = 0; c < t.level_size(2); ++c) {
    FieldElem x{2, c};
    auto co = t.coords(x);
    FieldElem acc = t.zero(2);
    for (size_t i = 0; i < co.size(); ++i)
      acc = t.add(acc, t.mul(t.embed(FieldElem{1, co[i]}, 2), t.pow(g2, (int64_t)i)));
    CHECK(acc == x);
  }
}

TEST_CASE("classical Gauss sum modulus for q in 2..5") {
  for (int64_t q : {2, 3, 4, 5}) {
    FieldTower t = FieldTower::build(q, 1);
    AddChar psi{&t, 1};
    for (int64_t e = 1; e < t.unit_order(1); ++e) {
      // chi(g^a) = zeta_(q-1)^(e a), nontrivial since e != 0
      Cyclotomic sum;
      for (int64_t a = 0; a < t.unit_order(1); ++a) {
        Cyclotomic chi = Cyclotomic::root(t.unit_order(1), e * a);
        sum += chi * psi.value(t.from_dlog(1, a));
      }
      CHECK(sum.abs_square() == Cyclotomic::integer(q));
    }
  }
}
