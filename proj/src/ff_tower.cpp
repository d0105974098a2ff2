#include "mactab/ff_tower.hpp"

#include <algorithm>

namespace mactab {

namespace {

// Dense polynomials over F_p, little-endian, for tower construction only.
using PPoly = std::vector<uint8_t>;

PPoly pmul_mod(const PPoly& a, const PPoly& b, const PPoly& mod, int64_t p) {
  std::vector<int64_t> acc(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j) acc[i + j] = (acc[i + j] + int64_t(a[i]) * b[j]) % p;
  }
  // reduce modulo monic mod of degree d
  int64_t d = (int64_t)mod.size();
  for (int64_t k = (int64_t)acc.size() - 1; k >= d; --k) {
    int64_t c = acc[k];
    if (!c) continue;
    acc[k] = 0;
    for (int64_t j = 0; j < d; ++j) acc[k - d + j] = mod_pos(acc[k - d + j] - c * mod[j], p);
  }
  PPoly out(d, 0);
  for (int64_t i = 0; i < d && i < (int64_t)acc.size(); ++i) out[i] = (uint8_t)acc[i];
  return out;
}

PPoly ppow_mod(PPoly base, int64_t e, const PPoly& mod, int64_t p) {
  PPoly r(mod.size(), 0);
  r[0] = 1;
  while (e > 0) {
    if (e & 1) r = pmul_mod(r, base, mod, p);
    base = pmul_mod(base, base, mod, p);
    e >>= 1;
  }
  return r;
}

bool is_x(const PPoly& a) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != (i == 1 ? 1 : 0)) return false;
  return true;
}

bool is_one(const PPoly& a) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != (i == 0 ? 1 : 0)) return false;
  return true;
}

std::vector<int64_t> prime_factors(int64_t n) {
  std::vector<int64_t> fs;
  for (int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      fs.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) fs.push_back(n);
  return fs;
}

// Full polynomial (trimmed, with leading coefficient) from the packed monic
// representation c_0..c_{d-1}.
PPoly unpack_monic(const PPoly& mod) {
  PPoly f = mod;
  f.push_back(1);
  return f;
}

PPoly pgcd(PPoly a, PPoly b, int64_t p) {
  auto deg = [](const PPoly& f) {
    int64_t d = (int64_t)f.size() - 1;
    while (d > 0 && f[d] == 0) --d;
    return f[d] == 0 ? int64_t(-1) : d;
  };
  auto inv_mod_p = [&](int64_t v) {
    for (int64_t w = 1; w < p; ++w)
      if (v * w % p == 1) return w;
    fail(Err::Internal, "no inverse mod p");
  };
  while (deg(b) >= 0) {
    // a mod b
    int64_t db = deg(b);
    int64_t lead_inv = inv_mod_p(b[db]);
    for (int64_t k = deg(a); k >= db; --k) {
      int64_t c = a[k];
      if (!c) continue;
      int64_t f = c * lead_inv % p;
      for (int64_t j = 0; j <= db; ++j)
        a[k - db + j] = mod_pos(a[k - db + j] - f * b[j], p);
    }
    std::swap(a, b);
  }
  return a;
}

// Irreducibility of the monic polynomial x^d + sum c_j x^j over F_p, and
// primitivity of its root x.
bool irreducible_and_primitive(const PPoly& mod, int64_t p, int64_t ord) {
  int64_t d = (int64_t)mod.size();
  if (d == 1) {
    // x + c_0: the root -c_0 must generate F_p^x.
    int64_t g = mod_pos(-(int64_t)mod[0], p);
    if (g == 0) return false;
    int64_t e = 1, v = g;
    while (v != 1) { v = v * g % p; ++e; }
    return e == ord;
  }
  PPoly x(mod.size(), 0);
  x[1] = 1;
  // x^(p^d) == x, and gcd(x^(p^(d/r)) - x, f) = 1 for every prime r | d
  if (!is_x(ppow_mod(x, ipow(p, d), mod, p))) return false;
  for (int64_t r : prime_factors(d)) {
    PPoly diff = ppow_mod(x, ipow(p, d / r), mod, p);
    diff.resize(d + 1, 0);
    diff[1] = (uint8_t)mod_pos((int64_t)diff[1] - 1, p);
    PPoly g = pgcd(unpack_monic(mod), diff, p);
    int64_t dg = (int64_t)g.size() - 1;
    while (dg > 0 && g[dg] == 0) --dg;
    if (dg != 0) return false;
  }
  // order of x is exactly p^d - 1
  if (!is_one(ppow_mod(x, ord, mod, p))) return false;
  for (int64_t r : prime_factors(ord))
    if (is_one(ppow_mod(x, ord / r, mod, p))) return false;
  return true;
}

}  // namespace

FieldTower FieldTower::build(int64_t q, int L, int64_t limit) {
  require(q >= 2, Err::NotPrimePower, "q must be at least 2");
  int64_t p = 0;
  for (int64_t d = 2; d * d <= q; ++d)
    if (q % d == 0) { p = d; break; }
  if (p == 0) p = q;
  int64_t f = 0, m = q;
  while (m % p == 0) { m /= p; ++f; }
  require(m == 1, Err::NotPrimePower, std::to_string(q) + " is not a prime power");
  require(L >= 1, Err::LimitExceeded, "top level must be positive");

  // q^L <= limit
  int64_t qL = 1;
  for (int i = 0; i < L; ++i) {
    qL *= q;
    require(qL <= limit, Err::LimitExceeded, "tower size q^L exceeds configured limit");
  }

  FieldTower t;
  t.p_ = p;
  t.q_ = q;
  t.f_ = f;
  t.L_ = L;
  t.qL_ = qL;
  t.amb_ord_ = qL - 1;

  int64_t d = f * L;  // ambient degree over F_p
  // Smallest primitive polynomial: coefficients (c_0, ..., c_{d-1}) in ascending
  // lexicographic order with c_0 varying fastest.
  PPoly mod(d, 0);
  bool found = false;
  for (int64_t enc = 0; enc < ipow(p, d) && !found; ++enc) {
    int64_t e = enc;
    for (int64_t j = 0; j < d; ++j) { mod[j] = (uint8_t)(e % p); e /= p; }
    if (irreducible_and_primitive(mod, p, t.amb_ord_)) found = true;
  }
  require(found, Err::Internal, "no primitive polynomial found");
  t.min_poly_ = mod;

  // Powers of gamma = x.
  t.pow_poly_.resize(t.amb_ord_);
  PPoly cur(d, 0);
  cur[0] = 1;
  PPoly x(d, 0);
  if (d > 1) x[1] = 1; else x[0] = (uint8_t)mod_pos(-(int64_t)mod[0], p);  // d=1: x = -c_0
  for (int64_t k = 0; k < t.amb_ord_; ++k) {
    t.pow_poly_[k] = cur;
    cur = pmul_mod(cur, x, mod, p);
  }

  // Encode-to-code lookup.
  std::vector<int64_t> code_of_enc(qL, -1);
  auto encode = [&](const PPoly& a) {
    int64_t v = 0;
    for (int64_t j = d - 1; j >= 0; --j) v = v * p + a[j];
    return v;
  };
  code_of_enc[0] = 0;
  for (int64_t k = 0; k < t.amb_ord_; ++k) code_of_enc[encode(t.pow_poly_[k])] = k + 1;

  // Zech logs: gamma^a + 1.
  t.zech_.assign(t.amb_ord_, -1);
  for (int64_t a = 0; a < t.amb_ord_; ++a) {
    PPoly s = t.pow_poly_[a];
    s[0] = (uint8_t)((s[0] + 1) % p);
    int64_t code = code_of_enc[encode(s)];
    t.zech_[a] = code == 0 ? -1 : code - 1;
  }

  // Ambient dlogs of the prime field 0, 1, 2, ..., p-1 (index 0 unused: -1 = zero).
  t.prime_field_amb_.assign(p, -1);
  for (int64_t j = 1; j < p; ++j) {
    PPoly cj(d, 0);
    cj[0] = (uint8_t)j;
    int64_t code = code_of_enc[encode(cj)];
    require(code > 0, Err::Internal, "prime field lookup failed");
    t.prime_field_amb_[j] = code - 1;
  }

  // Level-1 operation tables on codes [0, q).
  int64_t s1 = t.amb_ord_ / (q - 1);
  auto amb_of1 = [&](uint8_t c) -> int64_t { return c == 0 ? -1 : (int64_t)(c - 1) * s1; };
  auto code1_of_amb = [&](int64_t a) -> uint8_t {
    if (a < 0) return 0;
    require(a % s1 == 0, Err::Internal, "level-1 closure violated");
    return (uint8_t)(1 + a / s1);
  };
  t.add1_.assign(q * q, 0);
  t.mul1_.assign(q * q, 0);
  t.neg1_.assign(q, 0);
  t.inv1_.assign(q, 0);
  for (int64_t a = 0; a < q; ++a) {
    for (int64_t b = 0; b < q; ++b) {
      int64_t A = amb_of1((uint8_t)a), B = amb_of1((uint8_t)b);
      // add
      int64_t s;
      if (A < 0) s = B;
      else if (B < 0) s = A;
      else {
        int64_t delta = mod_pos(B - A, t.amb_ord_);
        int64_t z = t.zech_[delta];
        s = z < 0 ? -1 : (A + z) % t.amb_ord_;
      }
      t.add1_[a * q + b] = code1_of_amb(s);
      t.mul1_[a * q + b] = (A < 0 || B < 0) ? 0 : code1_of_amb((A + B) % t.amb_ord_);
    }
  }
  for (int64_t a = 0; a < q; ++a) {
    // -x = (p-1)*x
    uint8_t acc = 0;
    for (int64_t i = 0; i < p - 1; ++i) acc = t.add1_[acc * q + a];
    t.neg1_[a] = acc;
    if (a != 0) {
      int64_t A = amb_of1((uint8_t)a);
      t.inv1_[a] = code1_of_amb(mod_pos(-A, t.amb_ord_));
    }
  }

  t.coords_cache_.resize(L + 1);
  t.coords_built_.assign(L + 1, 0);
  return t;
}

FieldElem FieldTower::from_amb(int n, int64_t a) const {
  if (a < 0) return FieldElem{n, 0};
  int64_t s = stride(n);
  require(a % s == 0, Err::Internal, "element not in requested level");
  return FieldElem{n, 1 + a / s};
}

int64_t FieldTower::amb_add(int64_t a, int64_t b) const {
  if (a < 0) return b;
  if (b < 0) return a;
  int64_t delta = mod_pos(b - a, amb_ord_);
  int64_t z = zech_[delta];
  return z < 0 ? -1 : (a + z) % amb_ord_;
}

int64_t FieldTower::amb_neg(int64_t a) const {
  if (a < 0 || p_ == 2) return a;
  // -1 = gamma^((q^L-1)/2)
  return (a + amb_ord_ / 2) % amb_ord_;
}

FieldElem FieldTower::add(FieldElem a, FieldElem b) const {
  require(a.level == b.level, Err::LevelMismatch, "add across levels");
  check_level(a.level);
  return from_amb(a.level, amb_add(amb_of(a), amb_of(b)));
}

FieldElem FieldTower::neg(FieldElem a) const {
  check_level(a.level);
  return from_amb(a.level, amb_neg(amb_of(a)));
}

FieldElem FieldTower::mul(FieldElem a, FieldElem b) const {
  require(a.level == b.level, Err::LevelMismatch, "mul across levels");
  check_level(a.level);
  if (a.code == 0 || b.code == 0) return FieldElem{a.level, 0};
  int64_t ord = unit_order(a.level);
  return FieldElem{a.level, 1 + (a.code - 1 + b.code - 1) % ord};
}

FieldElem FieldTower::inv(FieldElem a) const {
  check_level(a.level);
  require(a.code != 0, Err::DivisionByZero, "inverse of zero");
  int64_t ord = unit_order(a.level);
  return FieldElem{a.level, 1 + mod_pos(-(a.code - 1), ord)};
}

FieldElem FieldTower::pow(FieldElem a, int64_t k) const {
  check_level(a.level);
  if (a.code == 0) {
    require(k > 0, Err::DivisionByZero, "0^k for k <= 0");
    return a;
  }
  int64_t ord = unit_order(a.level);
  return FieldElem{a.level, 1 + mod_pos((a.code - 1) % ord * mod_pos(k, ord) % ord, ord)};
}

FieldElem FieldTower::frobenius(FieldElem a) const {
  check_level(a.level);
  if (a.code == 0) return a;
  int64_t ord = unit_order(a.level);
  return FieldElem{a.level, 1 + (a.code - 1) * (q_ % ord) % ord};
}

FieldElem FieldTower::embed(FieldElem a, int n) const {
  check_level(a.level);
  check_level(n);
  require(n % a.level == 0, Err::LevelMismatch, "embedding target not a multiple level");
  if (a.code == 0) return FieldElem{n, 0};
  int64_t factor = unit_order(n) / unit_order(a.level);
  return FieldElem{n, 1 + (a.code - 1) * factor};
}

FieldElem FieldTower::norm(FieldElem a, int m) const {
  check_level(a.level);
  check_level(m);
  require(a.level % m == 0, Err::LevelMismatch, "norm target must divide level");
  if (a.code == 0) return FieldElem{m, 0};
  return FieldElem{m, 1 + (a.code - 1) % unit_order(m)};
}

FieldElem FieldTower::trace(FieldElem a, int m) const {
  check_level(a.level);
  check_level(m);
  require(a.level % m == 0, Err::LevelMismatch, "trace target must divide level");
  int dcount = a.level / m;
  int64_t acc = -1;
  int64_t ord = unit_order(a.level);
  int64_t e = a.code == 0 ? -1 : a.code - 1;
  int64_t qm = ipow(q_, m);
  for (int i = 0; i < dcount; ++i) {
    if (e >= 0) {
      acc = amb_add(acc, e * stride(a.level));
      e = e * (qm % ord) % ord;
    }
  }
  return from_amb(m, acc);
}

int FieldTower::abs_trace_int(FieldElem x) const {
  check_level(x.level);
  if (x.code == 0) return 0;
  // Tr_{k_n/F_p}(x) = sum of the p-power conjugates within k_n.
  int64_t ord = unit_order(x.level);
  int64_t s = stride(x.level);
  int64_t conj = x.code - 1;
  int64_t acc = -1;
  for (int64_t i = 0; i < f_ * x.level; ++i) {
    acc = amb_add(acc, conj * s);
    conj = conj * (p_ % ord) % ord;
  }
  if (acc < 0) return 0;
  for (int64_t j = 1; j < p_; ++j)
    if (prime_field_amb_[j] == acc) return (int)j;
  fail(Err::Internal, "absolute trace not in the prime field");
}

std::vector<uint8_t> FieldTower::coords(FieldElem x) const {
  int n = x.level;
  check_level(n);
  if (!coords_built_[n]) {
    // Solve over F_p: ambient basis expansion of g_1^j * g_n^i.
    int64_t d = f_ * L_;
    int64_t dim = f_ * n;
    std::vector<std::vector<int64_t>> M(d, std::vector<int64_t>(dim, 0));
    FieldElem gn = generator(n);
    FieldElem g1n = embed(generator(1), n);
    for (int64_t i = 0; i < n; ++i) {
      for (int64_t j = 0; j < f_; ++j) {
        FieldElem b = mul(pow(gn, i), pow(g1n, j));
        if (b.code != 0) {
          const auto& pp = pow_poly_[amb_of(b)];
          for (int64_t r = 0; r < d; ++r) M[r][i * f_ + j] = pp[r];
        }
      }
    }
    // Row-reduce [M | I_d] to get a left inverse acting on polynomial reps.
    std::vector<std::vector<int64_t>> aug(d, std::vector<int64_t>(dim + d, 0));
    for (int64_t r = 0; r < d; ++r) {
      for (int64_t c = 0; c < dim; ++c) aug[r][c] = M[r][c];
      aug[r][dim + r] = 1;
    }
    auto inv_mod_p = [&](int64_t a) {
      for (int64_t v = 1; v < p_; ++v)
        if (a * v % p_ == 1) return v;
      fail(Err::Internal, "no inverse mod p");
    };
    int64_t row = 0;
    std::vector<int64_t> pivot_of_col(dim, -1);
    for (int64_t col = 0; col < dim && row < d; ++col) {
      int64_t pr = -1;
      for (int64_t r = row; r < d; ++r)
        if (aug[r][col] % p_ != 0) { pr = r; break; }
      require(pr >= 0, Err::Internal, "coordinate basis not independent");
      std::swap(aug[pr], aug[row]);
      int64_t iv = inv_mod_p(mod_pos(aug[row][col], p_));
      for (int64_t k = 0; k < dim + d; ++k) aug[row][k] = aug[row][k] * iv % p_;
      for (int64_t r = 0; r < d; ++r) {
        if (r == row) continue;
        int64_t fct = mod_pos(aug[r][col], p_);
        if (!fct) continue;
        for (int64_t k = 0; k < dim + d; ++k)
          aug[r][k] = mod_pos(aug[r][k] - fct * aug[row][k], p_);
      }
      pivot_of_col[col] = row;
      ++row;
    }
    // Coordinate table for all elements of the level.
    int64_t sz = level_size(n);
    auto& table = coords_cache_[n];
    table.assign(sz, std::vector<uint8_t>(n, 0));
    FieldElem g1 = generator(1);
    for (int64_t code = 1; code < sz; ++code) {
      FieldElem e{n, code};
      const auto& pp = pow_poly_[amb_of(e)];
      std::vector<uint8_t>& out = table[code];
      for (int64_t i = 0; i < n; ++i) {
        // c_i = sum_j coeff(i,j) g_1^j with coeff from the solved system
        FieldElem ci = zero(1);
        for (int64_t j = 0; j < f_; ++j) {
          int64_t v = 0;
          int64_t r = pivot_of_col[i * f_ + j];
          for (int64_t col = 0; col < d; ++col) v = (v + aug[r][dim + col] * pp[col]) % p_;
          // add v copies of g_1^j
          FieldElem term = zero(1);
          FieldElem base = pow(g1, j);
          for (int64_t cpy = 0; cpy < v; ++cpy) term = add(term, base);
          ci = add(ci, term);
        }
        out[i] = (uint8_t)ci.code;
      }
    }
    coords_built_[n] = 1;
  }
  return coords_cache_[n][x.code];
}

}  // namespace mactab
