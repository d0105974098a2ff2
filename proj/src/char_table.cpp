#include "mactab/char_table.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace mactab {

int64_t ClassFunction::degree_int() const {
  const Cyclotomic& d = at_identity();
  require(d.is_rational(), Err::Internal, "degree not rational");
  Rat r = d.rational_part();
  require(boost::multiprecision::denominator(r) == 1, Err::Internal, "degree not integral");
  return boost::multiprecision::numerator(r).convert_to<int64_t>();
}

Cyclotomic ClassFunction::inner(const ClassFunction& o) const {
  require(G == o.G, Err::Internal, "inner product across groups");
  Cyclotomic acc;
  for (int k = 0; k < G->num_classes(); ++k) {
    if (v[k].is_zero() || o.v[k].is_zero()) continue;
    acc += (v[k] * o.v[k].conj()).scaled(Rat(G->classes()[k].size));
  }
  return acc.scaled(Rat(1, G->order()));
}

ClassFunction ClassFunction::conj_fn() const {
  ClassFunction r{G, {}};
  r.v.reserve(v.size());
  for (const Cyclotomic& x : v) r.v.push_back(x.conj());
  return r;
}

bool ClassFunction::is_zero() const {
  for (const Cyclotomic& x : v)
    if (!x.is_zero()) return false;
  return true;
}

int LeviContext::num_classes() const {
  int64_t n = 1;
  for (const GroupContext* b : blocks) n *= b->num_classes();
  return (int)n;
}

std::vector<int> LeviContext::decode(int idx) const {
  std::vector<int> t(blocks.size());
  for (size_t i = 0; i < blocks.size(); ++i) {
    t[i] = idx % blocks[i]->num_classes();
    idx /= blocks[i]->num_classes();
  }
  return t;
}

int64_t LeviContext::class_size(const std::vector<int>& t) const {
  int64_t s = 1;
  for (size_t i = 0; i < blocks.size(); ++i) s *= blocks[i]->classes()[t[i]].size;
  return s;
}

int64_t LeviContext::order() const {
  int64_t s = 1;
  for (const GroupContext* b : blocks) s *= b->order();
  return s;
}

Cyclotomic LeviClassFunction::inner(const LeviClassFunction& o) const {
  Cyclotomic acc;
  for (int idx = 0; idx < L.num_classes(); ++idx) {
    if (v[idx].is_zero() || o.v[idx].is_zero()) continue;
    acc += (v[idx] * o.v[idx].conj()).scaled(Rat(L.class_size(L.decode(idx))));
  }
  return acc.scaled(Rat(1, L.order()));
}

bool LeviClassFunction::is_zero() const {
  for (const Cyclotomic& x : v)
    if (!x.is_zero()) return false;
  return true;
}

namespace {

// ---- modular arithmetic over the splitting prime ----

int64_t mulmod(int64_t a, int64_t b, int64_t m) { return a * b % m; }

int64_t powmod(int64_t a, int64_t e, int64_t m) {
  int64_t r = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

int64_t invmod(int64_t a, int64_t m) { return powmod(mod_pos(a, m), m - 2, m); }

bool is_prime(int64_t n) {
  if (n < 2) return false;
  for (int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<int64_t> prime_divisors(int64_t n) {
  std::vector<int64_t> out;
  for (int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

int64_t smallest_primitive_root(int64_t ell) {
  auto divs = prime_divisors(ell - 1);
  for (int64_t g = 2; g < ell; ++g) {
    bool ok = true;
    for (int64_t f : divs)
      if (powmod(g, (ell - 1) / f, ell) == 1) { ok = false; break; }
    if (ok) return g;
  }
  fail(Err::Internal, "no primitive root");
}

using ModVec = std::vector<int64_t>;
using ModMat = std::vector<ModVec>;

}  // namespace

CharacterTable CharacterTable::compute(const GroupContext& G, int64_t cap) {
  require(G.order() <= cap, Err::CapExceeded,
          "group order " + std::to_string(G.order()) + " exceeds table cap");
  const FieldTower& tw = G.tower();
  const int r = G.num_classes();
  const int64_t e = G.exponent();
  const int64_t order = G.order();

  // elements bucketed per class
  std::vector<std::vector<uint32_t>> class_elems(r);
  for (uint32_t code : G.elements()) class_elems[G.class_of_code(code)].push_back(code);

  // splitting prime: ell = 1 mod e, ell > 2 sqrt(|G|)
  int64_t isq = (int64_t)std::floor(std::sqrt((double)order));
  while ((isq + 1) * (isq + 1) <= order) ++isq;
  while (isq * isq > order) --isq;
  int64_t ell = e + 1;
  while (!(is_prime(ell) && ell > 2 * isq)) ell += e;
  const int64_t z = powmod(smallest_primitive_root(ell), (ell - 1) / e, ell);

  // lazy class matrices
  auto make_A = [&](int i) {
    ModMat A(r, ModVec(r, 0));
    for (int k = 0; k < r; ++k) {
      const Mat& zk = G.classes()[k].rep;
      for (uint32_t code : class_elems[i]) {
        Mat x = mat_decode(tw, G.n(), code);
        int j = G.class_of(mat_mul(tw, mat_inv(tw, x), zk));
        A[j][k]++;
      }
    }
    return A;
  };

  // subspaces as reduced-echelon row bases over F_ell (rows = column vectors of
  // the class algebra, indexed by class)
  struct Space {
    ModMat basis;
    std::vector<int> pivots;
  };
  std::vector<Space> spaces;
  {
    Space full;
    full.basis.assign(r, ModVec(r, 0));
    for (int i = 0; i < r; ++i) {
      full.basis[i][i] = 1;
      full.pivots.push_back(i);
    }
    spaces.push_back(std::move(full));
  }

  std::vector<int> class_order(r);
  for (int i = 0; i < r; ++i) class_order[i] = i;
  std::sort(class_order.begin(), class_order.end(), [&](int a, int b) {
    if (G.classes()[a].size != G.classes()[b].size) return G.classes()[a].size < G.classes()[b].size;
    return a < b;
  });

  auto all_split = [&]() {
    for (const Space& s : spaces)
      if (s.basis.size() > 1) return false;
    return true;
  };

  for (int ci : class_order) {
    if (ci == G.identity_class()) continue;
    if (all_split()) break;
    ModMat A = make_A(ci);
    std::vector<Space> next;
    for (Space& W : spaces) {
      int d = (int)W.basis.size();
      if (d == 1) {
        next.push_back(std::move(W));
        continue;
      }
      // restriction B of A to W: A * b_t = sum_s B[s][t] b_s
      ModMat B(d, ModVec(d, 0));
      for (int t = 0; t < d; ++t) {
        ModVec y(r, 0);
        for (int j = 0; j < r; ++j) {
          int64_t acc = 0;
          for (int k = 0; k < r; ++k)
            if (A[j][k] && W.basis[t][k]) acc = (acc + A[j][k] % ell * W.basis[t][k]) % ell;
          y[j] = acc;
        }
        for (int s = 0; s < d; ++s) B[s][t] = y[W.pivots[s]];
        // invariance check
        for (int j = 0; j < r; ++j) {
          int64_t rec = 0;
          for (int s = 0; s < d; ++s) rec = (rec + B[s][t] * W.basis[s][j]) % ell;
          require(rec == y[j], Err::Internal, "class matrix does not preserve subspace");
        }
      }
      // eigenvalues by determinant scan
      std::vector<int64_t> lambdas;
      for (int64_t lam = 0; lam < ell; ++lam) {
        ModMat M = B;
        for (int i = 0; i < d; ++i) M[i][i] = mod_pos(M[i][i] - lam, ell);
        // determinant mod ell
        int64_t det = 1;
        for (int col = 0; col < d && det != 0; ++col) {
          int pr = -1;
          for (int row = col; row < d; ++row)
            if (M[row][col] != 0) { pr = row; break; }
          if (pr < 0) { det = 0; break; }
          if (pr != col) { std::swap(M[pr], M[col]); det = ell - det; }
          det = mulmod(det, M[col][col], ell);
          int64_t iv = invmod(M[col][col], ell);
          for (int row = col + 1; row < d; ++row) {
            if (M[row][col] == 0) continue;
            int64_t f = mulmod(M[row][col], iv, ell);
            for (int k = col; k < d; ++k) M[row][k] = mod_pos(M[row][k] - f * M[col][k], ell);
          }
        }
        if (det % ell == 0) lambdas.push_back(lam);
        if ((int)lambdas.size() == d) break;
      }
      // split into kernels of (B - lam)
      int found_dim = 0;
      for (int64_t lam : lambdas) {
        ModMat M = B;
        for (int i = 0; i < d; ++i) M[i][i] = mod_pos(M[i][i] - lam, ell);
        // kernel basis of M (d x d)
        // row-reduce M, then read free columns
        ModMat R = M;
        std::vector<int> piv;
        {
          size_t row = 0;
          for (int col = 0; col < d && (int)row < d; ++col) {
            size_t pr = row;
            while (pr < R.size() && R[pr][col] == 0) ++pr;
            if (pr == R.size()) continue;
            std::swap(R[pr], R[row]);
            int64_t iv = invmod(R[row][col], ell);
            for (int k = 0; k < d; ++k) R[row][k] = mulmod(R[row][k], iv, ell);
            for (size_t rr = 0; rr < R.size(); ++rr) {
              if (rr == row || R[rr][col] == 0) continue;
              int64_t f = R[rr][col];
              for (int k = 0; k < d; ++k) R[rr][k] = mod_pos(R[rr][k] - f * R[row][k], ell);
            }
            piv.push_back(col);
            ++row;
          }
        }
        std::vector<char> is_piv(d, 0);
        for (int c : piv) is_piv[c] = 1;
        Space sub;
        for (int freec = 0; freec < d; ++freec) {
          if (is_piv[freec]) continue;
          // kernel vector in W coordinates
          ModVec kv(d, 0);
          kv[freec] = 1;
          for (size_t s = 0; s < piv.size(); ++s) kv[piv[s]] = mod_pos(-R[s][freec], ell);
          // map to ambient coordinates
          ModVec amb(r, 0);
          for (int t = 0; t < d; ++t)
            if (kv[t])
              for (int j = 0; j < r; ++j) amb[j] = (amb[j] + kv[t] * W.basis[t][j]) % ell;
          sub.basis.push_back(std::move(amb));
        }
        if (sub.basis.empty()) continue;
        found_dim += (int)sub.basis.size();
        // echelonize ambient basis deterministically
        {
          size_t row = 0;
          sub.pivots.clear();
          for (int col = 0; col < r && row < sub.basis.size(); ++col) {
            size_t pr = row;
            while (pr < sub.basis.size() && sub.basis[pr][col] == 0) ++pr;
            if (pr == sub.basis.size()) continue;
            std::swap(sub.basis[pr], sub.basis[row]);
            int64_t iv = invmod(sub.basis[row][col], ell);
            for (int k = 0; k < r; ++k) sub.basis[row][k] = mulmod(sub.basis[row][k], iv, ell);
            for (size_t rr = 0; rr < sub.basis.size(); ++rr) {
              if (rr == row || sub.basis[rr][col] == 0) continue;
              int64_t f = sub.basis[rr][col];
              for (int k = 0; k < r; ++k)
                sub.basis[rr][k] = mod_pos(sub.basis[rr][k] - f * sub.basis[row][k], ell);
            }
            sub.pivots.push_back(col);
            ++row;
          }
        }
        next.push_back(std::move(sub));
      }
      require(found_dim == d, Err::Internal, "eigenspace split lost dimension");
    }
    spaces = std::move(next);
  }
  require((int)spaces.size() == r, Err::Internal, "class algebra did not split completely");

  // recover characters
  std::vector<ClassFunction> rows;
  const int idc = G.identity_class();
  for (const Space& W : spaces) {
    require(W.basis.size() == 1, Err::Internal, "unsplit subspace");
    ModVec omega = W.basis[0];
    require(omega[idc] != 0, Err::Internal, "eigenvector vanishes at identity");
    int64_t scale = invmod(omega[idc], ell);
    for (auto& x : omega) x = mulmod(x, scale, ell);
    // degree from second orthogonality with itself
    int64_t S = 0;
    for (int j = 0; j < r; ++j) {
      int64_t w = omega[j];
      int64_t wstar = omega[G.classes()[j].inverse_class];
      S = (S + mulmod(mulmod(w, wstar, ell), invmod(G.classes()[j].size % ell, ell), ell)) % ell;
    }
    int64_t deg2 = mulmod(order % ell, invmod(S, ell), ell);
    int64_t deg = -1;
    for (int64_t dcand = 1; dcand <= isq; ++dcand) {
      if (mulmod(dcand, dcand, ell) == deg2) {
        require(deg < 0, Err::Internal, "ambiguous degree square root");
        deg = dcand;
      }
    }
    require(deg > 0, Err::Internal, "degree not recovered");

    std::vector<int64_t> chi_ell(r);
    for (int j = 0; j < r; ++j)
      chi_ell[j] = mulmod(mulmod(omega[j], deg % ell, ell),
                          invmod(G.classes()[j].size % ell, ell), ell);

    ClassFunction cf{&G, {}};
    cf.v.resize(r);
    for (int j = 0; j < r; ++j) {
      int64_t o = G.classes()[j].order;
      int64_t zo = powmod(z, e / o, ell);
      int64_t oinv = invmod(o % ell, ell);
      Cyclotomic val = Cyclotomic::root(o, 0).scaled(Rat(0));
      int64_t total = 0;
      for (int64_t t = 0; t < o; ++t) {
        int64_t mt = 0;
        for (int64_t s = 0; s < o; ++s) {
          // zo has order o; the Fourier exponent -s*t is taken mod o
          mt = (mt + mulmod(chi_ell[G.classes()[j].power_class[s]],
                            powmod(zo, mod_pos(-(s * t) % o, o), ell), ell)) % ell;
        }
        mt = mulmod(mt, oinv, ell);
        require(mt <= deg, Err::Internal, "eigenvalue multiplicity exceeds degree");
        total += mt;
        if (mt) val.add_root_multiple(Rat(mt), t);
      }
      require(total == deg, Err::Internal, "eigenvalue multiplicities do not sum to degree");
      cf.v[j] = val;
    }
    require(cf.degree_int() == deg, Err::Internal, "lifted degree mismatch");
    rows.push_back(std::move(cf));
  }

  // canonical order: by degree, then by serialized values
  std::vector<std::pair<std::string, int>> keys;
  for (int i = 0; i < (int)rows.size(); ++i) {
    std::ostringstream os;
    os.width(12);
    os.fill('0');
    os << rows[i].degree_int() << "#";
    for (const Cyclotomic& x : rows[i].v) os << x.to_string() << ";";
    keys.emplace_back(os.str(), i);
  }
  std::sort(keys.begin(), keys.end());
  CharacterTable T;
  T.G_ = &G;
  for (auto& [k, i] : keys) T.irr_.push_back(std::move(rows[i]));

  // sum of squares
  int64_t ss = 0;
  for (const auto& row : T.irr_) ss += row.degree_int() * row.degree_int();
  require(ss == order, Err::Internal, "degree squares do not sum to |G|");
  return T;
}

int CharacterTable::find(const ClassFunction& chi) const {
  for (int i = 0; i < (int)irr_.size(); ++i)
    if (irr_[i].v == chi.v) return i;
  // fall back to exact cross-modulus comparison
  for (int i = 0; i < (int)irr_.size(); ++i) {
    bool eq = true;
    for (int k = 0; k < G_->num_classes() && eq; ++k)
      if (!irr_[i].v[k].equals(chi.v[k])) eq = false;
    if (eq) return i;
  }
  return -1;
}

int CharacterTable::contragredient(int i) const {
  int j = find(irr_[i].conj_fn());
  require(j >= 0, Err::Internal, "contragredient not in table");
  return j;
}

void CharacterTable::verify_orthogonality() const {
  const int r = (int)irr_.size();
  require(r == G_->num_classes(), Err::Internal, "table is not square");
  for (int i = 0; i < r; ++i) {
    for (int j = i; j < r; ++j) {
      Cyclotomic ip = irr_[i].inner(irr_[j]);
      require(ip == Cyclotomic::integer(i == j ? 1 : 0), Err::Internal,
              "row orthogonality fails");
    }
  }
  for (int k = 0; k < r; ++k) {
    for (int l = k; l < r; ++l) {
      Cyclotomic acc;
      for (int i = 0; i < r; ++i) acc += irr_[i].v[k] * irr_[i].v[l].conj();
      Cyclotomic expect =
          k == l ? Cyclotomic::integer(G_->classes()[k].centralizer) : Cyclotomic::integer(0);
      require(acc == expect, Err::Internal, "column orthogonality fails");
    }
  }
}

std::vector<int64_t> CharacterTable::degrees() const {
  std::vector<int64_t> d;
  for (const auto& row : irr_) d.push_back(row.degree_int());
  return d;
}

// ---- cache serialization ----

namespace {

nlohmann::ordered_json cyclo_json(const Cyclotomic& v) {
  nlohmann::ordered_json coeffs = nlohmann::ordered_json::array();
  const auto& c = v.coeffs();
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    Int num = boost::multiprecision::numerator(c[i]);
    Int den = boost::multiprecision::denominator(c[i]);
    require(num >= std::numeric_limits<int64_t>::min() && num <= std::numeric_limits<int64_t>::max() &&
                den <= std::numeric_limits<int64_t>::max(),
            Err::Internal, "coefficient too large for cache format");
    coeffs.push_back({(int64_t)i, num.convert_to<int64_t>(), den.convert_to<int64_t>()});
  }
  return nlohmann::ordered_json{{"N", v.modulus()}, {"coeffs", coeffs}};
}

Cyclotomic cyclo_from_json(const nlohmann::json& j) {
  int64_t n = j.at("N").get<int64_t>();
  Cyclotomic v = Cyclotomic::root(n, 0).scaled(Rat(0));
  for (const auto& triple : j.at("coeffs"))
    v.add_root_multiple(Rat(triple[1].get<int64_t>(), triple[2].get<int64_t>()),
                        triple[0].get<int64_t>());
  return v;
}

constexpr int kCacheSchema = 1;
constexpr const char* kCacheAlgo = "class-algebra-v1";

}  // namespace

std::string CharacterTable::cache_json() const {
  nlohmann::ordered_json j;
  j["schema"] = kCacheSchema;
  j["algo"] = kCacheAlgo;
  j["n"] = G_->n();
  j["q"] = G_->q();
  j["order"] = G_->order();
  nlohmann::ordered_json cls = nlohmann::ordered_json::array();
  for (const auto& c : G_->classes())
    cls.push_back({{"label", c.label_str}, {"size", c.size}, {"order", c.order}});
  j["classes"] = cls;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : irr_) {
    nlohmann::ordered_json vals = nlohmann::ordered_json::array();
    for (const Cyclotomic& x : row.v) vals.push_back(cyclo_json(x));
    rows.push_back({{"degree", row.degree_int()}, {"values", vals}});
  }
  j["irreducibles"] = rows;
  return j.dump(1, '\t') + "\n";
}

std::optional<CharacterTable> CharacterTable::from_cache_json(const GroupContext& G,
                                                              const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) return std::nullopt;
  if (!j.contains("schema") || j["schema"].get<int>() != kCacheSchema) return std::nullopt;
  if (!j.contains("algo") || j["algo"].get<std::string>() != kCacheAlgo) return std::nullopt;
  if (j["n"].get<int>() != G.n() || j["q"].get<int64_t>() != G.q()) return std::nullopt;
  if (j["order"].get<int64_t>() != G.order()) return std::nullopt;
  if ((int)j["classes"].size() != G.num_classes()) return std::nullopt;
  for (int k = 0; k < G.num_classes(); ++k)
    if (j["classes"][k]["label"].get<std::string>() != G.classes()[k].label_str)
      return std::nullopt;
  CharacterTable T;
  T.G_ = &G;
  int64_t ss = 0;
  for (const auto& row : j["irreducibles"]) {
    ClassFunction cf{&G, {}};
    for (const auto& val : row["values"]) cf.v.push_back(cyclo_from_json(val));
    if ((int)cf.v.size() != G.num_classes()) return std::nullopt;
    ss += cf.degree_int() * cf.degree_int();
    T.irr_.push_back(std::move(cf));
  }
  if (ss != G.order()) return std::nullopt;
  return T;
}

// ---- Harish-Chandra operations ----

ClassFunction parabolic_induce(const GroupContext& G, const ParabolicShape& shape,
                               const std::vector<const GroupContext*>& block_ctxs,
                               const std::vector<const ClassFunction*>& chis) {
  require(shape.total() == G.n(), Err::ShapeMismatch, "shape does not sum to n");
  require(block_ctxs.size() == shape.comp.size() && chis.size() == shape.comp.size(),
          Err::ShapeMismatch, "one class function per block required");
  for (size_t i = 0; i < shape.comp.size(); ++i)
    require(block_ctxs[i]->n() == shape.comp[i], Err::ShapeMismatch, "block size mismatch");

  const FieldTower& tw = G.tower();
  std::vector<Mat> ps = shape_p_elements(tw, shape);
  std::vector<Cyclotomic> acc(G.num_classes());
  for (const Mat& p : ps) {
    int k = G.class_of(p);
    std::vector<Mat> blocks = levi_blocks(shape, p);
    Cyclotomic val = Cyclotomic::integer(1);
    bool zero = false;
    for (size_t i = 0; i < blocks.size() && !zero; ++i) {
      const Cyclotomic& x = chis[i]->v[block_ctxs[i]->class_of(blocks[i])];
      if (x.is_zero()) zero = true;
      else val *= x;
    }
    if (!zero) acc[k] += val;
  }
  int64_t psize = (int64_t)ps.size();
  ClassFunction out{&G, {}};
  out.v.resize(G.num_classes());
  for (int k = 0; k < G.num_classes(); ++k)
    out.v[k] = acc[k].scaled(Rat(G.classes()[k].centralizer, psize));
  return out;
}

LeviClassFunction jacquet_restrict(const ClassFunction& chi, const ParabolicShape& shape,
                                   const std::vector<const GroupContext*>& block_ctxs) {
  const GroupContext& G = *chi.G;
  require(shape.total() == G.n(), Err::ShapeMismatch, "shape does not sum to n");
  const FieldTower& tw = G.tower();
  LeviClassFunction out;
  out.L.blocks = block_ctxs;
  std::vector<Mat> us = shape_u_elements(tw, shape);
  int nl = out.L.num_classes();
  out.v.resize(nl);
  for (int idx = 0; idx < nl; ++idx) {
    std::vector<int> t = out.L.decode(idx);
    Mat l;
    l.n = G.n();
    for (size_t i = 0; i < block_ctxs.size(); ++i) {
      const Mat& rep = block_ctxs[i]->classes()[t[i]].rep;
      int start = shape.block_start((int)i);
      for (int a = 0; a < rep.n; ++a)
        for (int b = 0; b < rep.n; ++b) l.at(start + a, start + b) = rep.at(a, b);
    }
    Cyclotomic s;
    for (const Mat& u : us) s += chi.v[G.class_of(mat_mul(tw, l, u))];
    out.v[idx] = s.scaled(Rat(1, (int64_t)us.size()));
  }
  return out;
}

std::vector<std::vector<int>> proper_compositions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int rest) -> void {
    if (rest == 0) {
      if (cur.size() >= 2) out.push_back(cur);
      return;
    }
    for (int k = 1; k <= rest; ++k) {
      cur.push_back(k);
      self(self, rest - k);
      cur.pop_back();
    }
  };
  rec(rec, n);
  return out;
}

bool is_cuspidal(const ClassFunction& chi,
                 const std::vector<const GroupContext*>& ctxs_by_size) {
  require(chi.inner(chi) == Cyclotomic::integer(1), Err::NotIrreducible,
          "cuspidality test needs an irreducible character");
  int n = chi.G->n();
  for (const auto& comp : proper_compositions(n)) {
    ParabolicShape s{comp};
    std::vector<const GroupContext*> blocks;
    for (int c : comp) blocks.push_back(ctxs_by_size[c - 1]);
    if (!jacquet_restrict(chi, s, blocks).is_zero()) return false;
  }
  return true;
}

GaloisOrbit label_cuspidal(const FieldTower& tw, const ClassFunction& chi) {
  const GroupContext& G = *chi.G;
  int n = G.n();
  int64_t on = tw.unit_order(n);
  // degree-n elements: dlog not divisible by any proper-level stride
  std::vector<int64_t> strides;
  for (int m = 1; m < n; ++m)
    if (n % m == 0) strides.push_back(on / (ipow(tw.q(), m) - 1));
  auto degree_n = [&](int64_t e) {
    for (int64_t s : strides)
      if (e % s == 0) return false;
    return true;
  };
  Cyclotomic sign = Cyclotomic::integer(n % 2 == 1 ? 1 : -1);

  std::vector<GaloisOrbit> orbits = orbits_of_degree(tw, n);
  int found = -1;
  for (int oi = 0; oi < (int)orbits.size(); ++oi) {
    bool ok = true;
    for (int64_t e = 0; e < on && ok; ++e) {
      if (!degree_n(e)) continue;
      FieldElem x = tw.from_dlog(n, e);
      Cyclotomic lhs = chi.v[G.class_of(elliptic_embed(tw, x))];
      Cyclotomic rhs = Cyclotomic::root(on, 0).scaled(Rat(0));
      for (int64_t E : orbits[oi].orbit) rhs.add_root_multiple(Rat(1), E * e);
      if (!lhs.equals(sign * rhs)) ok = false;
    }
    if (ok) {
      require(found < 0, Err::MultipleMatch, "two orbits match the trace formula");
      found = oi;
    }
  }
  require(found >= 0, Err::NoMatch, "no orbit matches the trace formula");
  return orbits[found];
}

LevelChar central_character(const ClassFunction& chi) {
  require(chi.inner(chi) == Cyclotomic::integer(1), Err::NotIrreducible,
          "central character of a non-irreducible");
  const GroupContext& G = *chi.G;
  const FieldTower& tw = G.tower();
  int64_t q1 = tw.unit_order(1);
  if (q1 == 1) return LevelChar{1, 0};
  Cyclotomic deg = chi.at_identity();
  // chi(zI)/chi(I) with z = g_1
  Mat zi = mat_scalar(tw, G.n(), 2);  // code 2 = g_1
  Cyclotomic val = chi.v[G.class_of(zi)] * deg.inverse();
  for (int64_t c = 0; c < q1; ++c) {
    if (val == Cyclotomic::root(q1, c)) {
      // consistency across all scalars
      for (int64_t a = 0; a < q1; ++a) {
        Mat za = mat_scalar(tw, G.n(), (uint8_t)(1 + a));
        require(chi.v[G.class_of(za)] * deg.inverse() == Cyclotomic::root(q1, c * a),
                Err::Internal, "central character not multiplicative");
      }
      return LevelChar{1, c};
    }
  }
  fail(Err::Internal, "central value is not a root of unity");
}

Cyclotomic central_sign(const ClassFunction& chi) {
  const GroupContext& G = *chi.G;
  const FieldTower& tw = G.tower();
  Mat mi = mat_scalar(tw, G.n(), tw.minus_one1());
  return chi.v[G.class_of(mi)] * chi.at_identity().inverse();
}

int64_t generic_degree_dimension(int64_t q, int m, int64_t index_gp, int64_t dim_sigma,
                                 const Partition& lam) {
  Int Q = ipow(q, m);
  int e = partition_weight(lam);
  Int num = Int(index_gp);
  for (int i = 0; i < e; ++i) num *= Int(dim_sigma);
  // Q^{n(lambda)}
  int64_t nst = partition_n_stat(lam);
  for (int64_t i = 0; i < nst; ++i) num *= Q;
  Int den = 1;
  for (int h : partition_hooks(lam)) {
    Int qh = 1;
    Int acc = 0;
    for (int i = 0; i < h; ++i) { acc += qh; qh *= Q; }
    den *= acc;  // [h]_Q = 1 + Q + ... + Q^(h-1)
  }
  require(num % den == 0, Err::Internal, "generic degree not integral");
  Int d = num / den;
  return d.convert_to<int64_t>();
}

std::vector<Labeling> label_tower(const FieldTower& tw,
                                  const std::vector<const GroupContext*>& ctxs,
                                  const std::vector<const CharacterTable*>& tables,
                                  int n) {
  std::vector<Labeling> out(n);
  for (int s = 1; s <= n; ++s) {
    const GroupContext& G = *ctxs[s - 1];
    const CharacterTable& T = *tables[s - 1];
    Labeling lab;
    lab.param_of_irr.resize(T.size());
    std::vector<char> used(T.size(), 0);

    // cuspidal labels for this size
    std::map<GaloisOrbit, int> cusp_of_orbit;
    for (int i = 0; i < T.size(); ++i) {
      if (!is_cuspidal(T.irr(i), ctxs)) continue;
      GaloisOrbit o = label_cuspidal(tw, T.irr(i));
      require(!cusp_of_orbit.count(o), Err::MultipleMatch, "orbit labels two cuspidals");
      cusp_of_orbit[o] = i;
    }
    require((int64_t)cusp_of_orbit.size() == (int64_t)orbits_of_degree(tw, s).size(),
            Err::Internal, "cuspidal census disagrees with orbit count");

    // decompositions of e-fold self-inductions, built on demand
    std::map<std::pair<GaloisOrbit, int>, std::map<Partition, int>> selfind;
    auto single_piece_irr = [&](const GaloisOrbit& o, const Partition& lamp) -> int {
      int weight = partition_weight(lamp);
      int sz = o.degree * weight;
      if (weight == 1) {
        // cuspidal of GL_(o.degree)
        if (sz == s) return cusp_of_orbit.at(o);
        ParamFunction p = make_param({{o, lamp}});
        return out[sz - 1].irr_of_param.at(p);
      }
      if (sz < s) {
        ParamFunction p = make_param({{o, lamp}});
        return out[sz - 1].irr_of_param.at(p);
      }
      // sz == s: decompose the e-fold self-induction here
      auto key = std::make_pair(o, weight);
      auto it = selfind.find(key);
      if (it == selfind.end()) {
        int m = o.degree;
        int e = weight;
        int cusp_idx = m == s ? cusp_of_orbit.at(o)
                              : out[m - 1].irr_of_param.at(make_param({{o, {1}}}));
        const ClassFunction& sigma =
            m == s ? T.irr(cusp_idx) : tables[m - 1]->irr(cusp_idx);
        ParabolicShape shape;
        shape.comp.assign(e, m);
        std::vector<const GroupContext*> bl(e, ctxs[m - 1]);
        std::vector<const ClassFunction*> ch(e, &sigma);
        ClassFunction Xi = parabolic_induce(G, shape, bl, ch);
        // constituents
        std::vector<int> cons;
        for (int i = 0; i < T.size(); ++i) {
          Cyclotomic ip = Xi.inner(T.irr(i));
          if (!ip.is_zero()) cons.push_back(i);
        }
        auto lams = partitions_of(e);
        require(cons.size() == lams.size(), Err::AmbiguousLabel,
                "constituent count differs from partition count");
        int64_t index_gp = G.order();
        for (int b = 0; b < e; ++b) index_gp /= ctxs[m - 1]->order();
        int64_t upow = (int64_t)e * (e - 1) / 2 * m * m;
        index_gp /= ipow(tw.q(), upow);
        std::map<Partition, int> match;
        std::map<int64_t, int> by_dim;
        for (int ci : cons) {
          int64_t d = T.irr(ci).degree_int();
          require(!by_dim.count(d), Err::AmbiguousLabel,
                  "two constituents share a dimension");
          by_dim[d] = ci;
        }
        for (const Partition& lam : lams) {
          int64_t d = generic_degree_dimension(tw.q(), m, index_gp,
                                               sigma.degree_int(), lam);
          require(by_dim.count(d), Err::AmbiguousLabel,
                  "no constituent with the predicted generic-degree dimension");
          match[lam] = by_dim[d];
        }
        it = selfind.emplace(key, std::move(match)).first;
      }
      return it->second.at(lamp);
    };

    for (const ParamFunction& p : enumerate_params(tw, s)) {
      int idx;
      if (p.parts.size() == 1) {
        idx = single_piece_irr(p.parts[0].first, p.parts[0].second);
      } else {
        // mixed: induce labeled pieces, assert irreducibility
        ParabolicShape shape;
        std::vector<const GroupContext*> bl;
        std::vector<const ClassFunction*> ch;
        for (const auto& [o, lam] : p.parts) {
          int sz = o.degree * partition_weight(lam);
          shape.comp.push_back(sz);
          bl.push_back(ctxs[sz - 1]);
          int pi = sz == s ? -1 : single_piece_irr(o, lam);
          require(pi >= 0, Err::Internal, "mixed piece fills the whole group");
          ch.push_back(&tables[sz - 1]->irr(pi));
        }
        ClassFunction Xi = parabolic_induce(G, shape, bl, ch);
        require(Xi.inner(Xi) == Cyclotomic::integer(1), Err::Internal,
                "mixed-parameter induction is not irreducible");
        idx = T.find(Xi);
        require(idx >= 0, Err::Internal, "induced irreducible not found in table");
      }
      require(!used[idx], Err::AmbiguousLabel, "irreducible labeled twice");
      used[idx] = 1;
      lab.param_of_irr[idx] = p;
      lab.irr_of_param.emplace(p, idx);
    }
    for (char u : used)
      require(u, Err::Internal, "labeling is not surjective");
    out[s - 1] = std::move(lab);
  }
  return out;
}

}  // namespace mactab
