#include "mactab/cyclotomic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace mactab {

namespace {

// Integer polynomials, little-endian coefficients, used only to set up the
// per-modulus reduction tables.
using IPoly = std::vector<Int>;

IPoly xn_minus_1(int64_t n) {
  IPoly p(n + 1, Int(0));
  p[0] = -1;
  p[n] = 1;
  return p;
}

void trim(IPoly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

// Exact division, remainder asserted zero.  Divisor monic.
IPoly exact_div(IPoly num, const IPoly& den) {
  IPoly q(num.size() - den.size() + 1, Int(0));
  for (int64_t i = (int64_t)q.size() - 1; i >= 0; --i) {
    Int coef = num[i + den.size() - 1];
    q[i] = coef;
    if (coef == 0) continue;
    for (size_t j = 0; j < den.size(); ++j) num[i + j] -= coef * den[j];
  }
  for (const Int& c : num)
    if (c != 0) fail(Err::Internal, "non-exact polynomial division");
  trim(q);
  return q;
}

struct ModTables {
  int64_t n = 1;
  int64_t phi = 1;
  IPoly cyclo;                         // Phi_n, monic, degree phi
  std::vector<std::vector<Int>> red;   // x^k mod Phi_n for k in [phi, 2n)
};

std::map<int64_t, IPoly> g_cyclo_cache;
std::map<int64_t, ModTables> g_tables;
std::mutex g_mutex;

const IPoly& cyclotomic_poly_locked(int64_t n) {
  auto it = g_cyclo_cache.find(n);
  if (it != g_cyclo_cache.end()) return it->second;
  IPoly p = xn_minus_1(n);
  for (int64_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    p = exact_div(std::move(p), cyclotomic_poly_locked(d));
  }
  return g_cyclo_cache.emplace(n, std::move(p)).first->second;
}

const ModTables& tables_for(int64_t n) {
  std::lock_guard<std::mutex> lock(g_mutex);
  auto it = g_tables.find(n);
  if (it != g_tables.end()) return it->second;

  ModTables t;
  t.n = n;
  t.cyclo = cyclotomic_poly_locked(n);
  t.phi = (int64_t)t.cyclo.size() - 1;
  // x^phi mod Phi = -(lower part of Phi); then iterate multiply-by-x.
  std::vector<Int> cur(t.phi, Int(0));
  for (int64_t i = 0; i < t.phi; ++i) cur[i] = -t.cyclo[i];
  t.red.reserve(2 * n - t.phi);
  for (int64_t k = t.phi; k < 2 * n; ++k) {
    t.red.push_back(cur);
    // cur <- x*cur mod Phi
    Int lead = cur[t.phi - 1];
    for (int64_t i = t.phi - 1; i > 0; --i) cur[i] = cur[i - 1];
    cur[0] = 0;
    if (lead != 0)
      for (int64_t i = 0; i < t.phi; ++i) cur[i] -= lead * t.cyclo[i];
  }
  return g_tables.emplace(n, std::move(t)).first->second;
}

}  // namespace

int64_t euler_phi(int64_t n) {
  int64_t result = n;
  int64_t m = n;
  for (int64_t p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      result -= result / p;
      while (m % p == 0) m /= p;
    }
  }
  if (m > 1) result -= result / m;
  return result;
}

Cyclotomic Cyclotomic::reduce(int64_t n, std::vector<Rat> raw) {
  const ModTables& t = tables_for(n);
  std::vector<Rat> out(t.phi, Rat(0));
  for (int64_t k = 0; k < (int64_t)raw.size(); ++k) {
    if (raw[k] == 0) continue;
    if (k < t.phi) {
      out[k] += raw[k];
    } else {
      const std::vector<Int>& row = t.red[k - t.phi];
      for (int64_t i = 0; i < t.phi; ++i)
        if (row[i] != 0) out[i] += raw[k] * Rat(row[i]);
    }
  }
  return Cyclotomic(n, std::move(out));
}

Cyclotomic Cyclotomic::rational(const Rat& r) {
  std::vector<Rat> c(1, r);
  return Cyclotomic(1, std::move(c));
}

Cyclotomic Cyclotomic::root(int64_t n, int64_t e) {
  std::vector<Rat> raw(n, Rat(0));
  raw[mod_pos(e, n)] = 1;
  return reduce(n, std::move(raw));
}

bool Cyclotomic::is_zero() const {
  for (const Rat& x : c_)
    if (x != 0) return false;
  return true;
}

bool Cyclotomic::is_rational() const {
  for (size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

Rat Cyclotomic::rational_part() const {
  require(is_rational(), Err::Internal, "rational_part of irrational cyclotomic");
  return c_[0];
}

Cyclotomic Cyclotomic::lifted(int64_t m) const {
  if (m == n_) return *this;
  require(m % n_ == 0, Err::Internal, "lift target not a multiple of modulus");
  int64_t s = m / n_;
  std::vector<Rat> raw(m, Rat(0));
  for (int64_t i = 0; i < (int64_t)c_.size(); ++i)
    if (c_[i] != 0) raw[i * s] = c_[i];
  return reduce(m, std::move(raw));
}

Cyclotomic Cyclotomic::operator+(const Cyclotomic& o) const {
  int64_t m = lcm64(n_, o.n_);
  Cyclotomic a = lifted(m), b = o.lifted(m);
  for (size_t i = 0; i < a.c_.size(); ++i) a.c_[i] += b.c_[i];
  return a;
}

Cyclotomic Cyclotomic::operator-(const Cyclotomic& o) const { return *this + (-o); }

Cyclotomic Cyclotomic::operator-() const {
  Cyclotomic r = *this;
  for (Rat& x : r.c_) x = -x;
  return r;
}

Cyclotomic Cyclotomic::scaled(const Rat& r) const {
  Cyclotomic out = *this;
  for (Rat& x : out.c_) x *= r;
  return out;
}

Cyclotomic Cyclotomic::operator*(const Cyclotomic& o) const {
  int64_t m = lcm64(n_, o.n_);
  Cyclotomic a = lifted(m), b = o.lifted(m);
  std::vector<Rat> raw(m, Rat(0));
  for (int64_t i = 0; i < (int64_t)a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (int64_t j = 0; j < (int64_t)b.c_.size(); ++j) {
      if (b.c_[j] == 0) continue;
      raw[(i + j) % m] += a.c_[i] * b.c_[j];
    }
  }
  return reduce(m, std::move(raw));
}

Cyclotomic Cyclotomic::times_root(int64_t e) const {
  std::vector<Rat> raw(n_, Rat(0));
  for (int64_t i = 0; i < (int64_t)c_.size(); ++i)
    if (c_[i] != 0) raw[mod_pos(i + e, n_)] += c_[i];
  return reduce(n_, std::move(raw));
}

Cyclotomic Cyclotomic::conj() const {
  std::vector<Rat> raw(n_, Rat(0));
  for (int64_t i = 0; i < (int64_t)c_.size(); ++i)
    if (c_[i] != 0) raw[mod_pos(n_ - i, n_)] += c_[i];
  return reduce(n_, std::move(raw));
}

void Cyclotomic::add_root_multiple(const Rat& r, int64_t e) {
  if (r == 0) return;
  const ModTables& t = tables_for(n_);
  int64_t k = mod_pos(e, n_);
  if (k < t.phi) {
    c_[k] += r;
  } else {
    const std::vector<Int>& row = t.red[k - t.phi];
    for (int64_t i = 0; i < t.phi; ++i)
      if (row[i] != 0) c_[i] += r * Rat(row[i]);
  }
}

Cyclotomic Cyclotomic::inverse() const {
  require(!is_zero(), Err::DivisionByZero, "inverse of zero");
  if (is_rational()) return rational(Rat(1) / c_[0]);
  // Solve a*x = 1 on the power basis: columns are a*zeta^j.
  int64_t phi = (int64_t)c_.size();
  std::vector<std::vector<Rat>> m(phi, std::vector<Rat>(phi + 1, Rat(0)));
  for (int64_t j = 0; j < phi; ++j) {
    Cyclotomic col = times_root(j);
    for (int64_t i = 0; i < phi; ++i) m[i][j] = col.c_[i];
  }
  m[0][phi] = 1;
  // Gaussian elimination, exact.
  int64_t row = 0;
  std::vector<int64_t> pivot_col(phi, -1);
  for (int64_t col = 0; col < phi && row < phi; ++col) {
    int64_t pr = -1;
    for (int64_t r = row; r < phi; ++r)
      if (m[r][col] != 0) { pr = r; break; }
    if (pr < 0) continue;
    std::swap(m[pr], m[row]);
    Rat inv = Rat(1) / m[row][col];
    for (int64_t k = col; k <= phi; ++k) m[row][k] *= inv;
    for (int64_t r = 0; r < phi; ++r) {
      if (r == row || m[r][col] == 0) continue;
      Rat f = m[r][col];
      for (int64_t k = col; k <= phi; ++k) m[r][k] -= f * m[row][k];
    }
    pivot_col[row] = col;
    ++row;
  }
  std::vector<Rat> x(phi, Rat(0));
  for (int64_t r = 0; r < phi; ++r) {
    if (pivot_col[r] >= 0) x[pivot_col[r]] = m[r][phi];
    else if (m[r][phi] != 0) fail(Err::DivisionByZero, "singular multiplication map");
  }
  Cyclotomic res(n_, std::move(x));
  return res;
}

bool Cyclotomic::equals(const Cyclotomic& o) const {
  if (n_ == o.n_) return c_ == o.c_;
  int64_t m = lcm64(n_, o.n_);
  return lifted(m).c_ == o.lifted(m).c_;
}

std::string Cyclotomic::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    if (!first) os << " + ";
    os << c_[i];
    if (i > 0) os << "*z" << n_ << "^" << i;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

namespace {

int64_t legendre_symbol(int64_t a, int64_t p) {
  a = mod_pos(a, p);
  if (a == 0) return 0;
  // Euler criterion by repeated squaring.
  int64_t e = (p - 1) / 2, r = 1, b = a;
  while (e > 0) {
    if (e & 1) r = (r * b) % p;
    b = (b * b) % p;
    e >>= 1;
  }
  return r == 1 ? 1 : -1;
}

}  // namespace

Cyclotomic sqrt_prime_power(int64_t q) {
  // q = p^f.  sqrt(q) = p^(f/2) for even f, else p^((f-1)/2)*sqrt(p).
  int64_t p = 0;
  for (int64_t d = 2; d * d <= q; ++d)
    if (q % d == 0) { p = d; break; }
  if (p == 0) p = q;
  int64_t f = 0;
  int64_t m = q;
  while (m > 1) { m /= p; ++f; }
  Cyclotomic out = Cyclotomic::integer(ipow(p, f / 2));
  if (f % 2 == 0) return out;
  if (p == 2) {
    // sqrt(2) = zeta_8 + zeta_8^-1
    return out * (Cyclotomic::root(8, 1) + Cyclotomic::root(8, 7));
  }
  // Quadratic Gauss sum g = sum_x (x|p) zeta_p^x; g = sqrt(p) for p=1 mod 4,
  // g = i*sqrt(p) for p=3 mod 4.
  Cyclotomic g = Cyclotomic::root(p, 0).scaled(Rat(0));
  for (int64_t x = 1; x < p; ++x)
    g.add_root_multiple(Rat(legendre_symbol(x, p)), x);
  if (p % 4 == 1) return out * g;
  return out * (-Cyclotomic::root(4, 1)) * g;  // -i * (i sqrt p) = sqrt p
}

FactorValue FactorValue::operator*(const FactorValue& o) const {
  require(q == o.q, Err::Internal, "factor values over different q");
  return FactorValue(q, half_power + o.half_power, c * o.c);
}

FactorValue FactorValue::pow(int64_t k) const {
  require(k >= 0, Err::Internal, "negative factor power");
  FactorValue r = FactorValue::one(q);
  for (int64_t i = 0; i < k; ++i) r = r * *this;
  return r;
}

namespace {

// Fold even half-powers (and exact square roots when q is a perfect square)
// into the cyclotomic part, leaving half_power in {0,1}.
void normalize_factor(int64_t q, int64_t& hp, Cyclotomic& c) {
  int64_t s = (int64_t)std::llround(std::sqrt((double)q));
  bool square = (s * s == q);
  if (square && mod_pos(hp, 2) == 1) {
    c = c * Cyclotomic::integer(s);
    hp -= 1;
  }
  int64_t r = mod_pos(hp, 2);
  int64_t whole = (hp - r) / 2;
  if (whole != 0) {
    Rat scale = whole > 0 ? Rat(ipow(q, whole)) : Rat(1, ipow(q, -whole));
    c = c.scaled(scale);
    hp = r;
  }
}

}  // namespace

bool FactorValue::equals(const FactorValue& o) const {
  require(q == o.q, Err::Internal, "comparing factor values over different q");
  int64_t ha = half_power, hb = o.half_power;
  Cyclotomic ca = c, cb = o.c;
  normalize_factor(q, ha, ca);
  normalize_factor(q, hb, cb);
  if (ca.is_zero() && cb.is_zero()) return true;
  if (ha == hb) return ca.equals(cb);
  // Parities differ: compare q^(1/2)*ca against cb (or symmetrically) using the
  // explicit cyclotomic sqrt(q).
  const Cyclotomic root = sqrt_prime_power(q);
  if (ha == 1) return (ca * root).equals(cb);
  return ca.equals(cb * root);
}

std::string FactorValue::to_string() const {
  std::ostringstream os;
  os << "q^(" << half_power << "/2) * (" << c.to_string() << ")";
  return os.str();
}

}  // namespace mactab
