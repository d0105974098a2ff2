#include "mactab/gl_group.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace mactab {

Mat mat_identity(int n) {
  Mat m;
  m.n = n;
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Mat mat_scalar(const FieldTower& tw, int n, uint8_t c) {
  (void)tw;
  Mat m;
  m.n = n;
  for (int i = 0; i < n; ++i) m.at(i, i) = c;
  return m;
}

Mat mat_mul(const FieldTower& tw, const Mat& x, const Mat& y) {
  Mat r;
  r.n = x.n;
  for (int i = 0; i < x.n; ++i) {
    for (int j = 0; j < x.n; ++j) {
      uint8_t acc = 0;
      for (int k = 0; k < x.n; ++k) acc = tw.add1(acc, tw.mul1(x.at(i, k), y.at(k, j)));
      r.at(i, j) = acc;
    }
  }
  return r;
}

Mat mat_transpose(const Mat& x) {
  Mat r;
  r.n = x.n;
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j) r.at(j, i) = x.at(i, j);
  return r;
}

uint8_t mat_trace(const FieldTower& tw, const Mat& x) {
  uint8_t acc = 0;
  for (int i = 0; i < x.n; ++i) acc = tw.add1(acc, x.at(i, i));
  return acc;
}

namespace {

// Gauss-Jordan over level-1 codes; returns rank, optionally accumulating the
// inverse into `inv` when square and nonsingular.
int gauss(const FieldTower& tw, Mat m, Mat* inv) {
  int n = m.n;
  Mat id = mat_identity(n);
  int rank = 0;
  for (int col = 0; col < n && rank < n; ++col) {
    int pr = -1;
    for (int r = rank; r < n; ++r)
      if (m.at(r, col) != 0) { pr = r; break; }
    if (pr < 0) continue;
    for (int j = 0; j < n; ++j) {
      std::swap(m.a[pr * n + j], m.a[rank * n + j]);
      std::swap(id.a[pr * n + j], id.a[rank * n + j]);
    }
    uint8_t piv = tw.inv1(m.at(rank, col));
    for (int j = 0; j < n; ++j) {
      m.at(rank, j) = tw.mul1(m.at(rank, j), piv);
      id.at(rank, j) = tw.mul1(id.at(rank, j), piv);
    }
    for (int r = 0; r < n; ++r) {
      if (r == rank) continue;
      uint8_t f = m.at(r, col);
      if (!f) continue;
      for (int j = 0; j < n; ++j) {
        m.at(r, j) = tw.sub1(m.at(r, j), tw.mul1(f, m.at(rank, j)));
        id.at(r, j) = tw.sub1(id.at(r, j), tw.mul1(f, id.at(rank, j)));
      }
    }
    ++rank;
  }
  if (inv) *inv = id;
  return rank;
}

}  // namespace

Mat mat_inv(const FieldTower& tw, const Mat& x) {
  Mat inv;
  int rank = gauss(tw, x, &inv);
  require(rank == x.n, Err::Singular, "matrix not invertible");
  return inv;
}

uint8_t mat_det(const FieldTower& tw, const Mat& x) {
  // elimination keeping track of the determinant
  Mat m = x;
  int n = m.n;
  uint8_t det = 1;
  for (int col = 0; col < n; ++col) {
    int pr = -1;
    for (int r = col; r < n; ++r)
      if (m.at(r, col) != 0) { pr = r; break; }
    if (pr < 0) return 0;
    if (pr != col) {
      for (int j = 0; j < n; ++j) std::swap(m.a[pr * n + j], m.a[col * n + j]);
      det = tw.neg1(det);
    }
    det = tw.mul1(det, m.at(col, col));
    uint8_t piv = tw.inv1(m.at(col, col));
    for (int r = col + 1; r < n; ++r) {
      uint8_t f = tw.mul1(m.at(r, col), piv);
      if (!f) continue;
      for (int j = col; j < n; ++j) m.at(r, j) = tw.sub1(m.at(r, j), tw.mul1(f, m.at(col, j)));
    }
  }
  return det;
}

uint32_t mat_encode(const FieldTower& tw, const Mat& x) {
  int64_t q = tw.q();
  uint32_t code = 0;
  for (int idx = x.n * x.n - 1; idx >= 0; --idx) code = (uint32_t)(code * q + x.a[idx]);
  return code;
}

Mat mat_decode(const FieldTower& tw, int n, uint32_t code) {
  int64_t q = tw.q();
  Mat m;
  m.n = n;
  for (int idx = 0; idx < n * n; ++idx) {
    m.a[idx] = (uint8_t)(code % q);
    code /= (uint32_t)q;
  }
  return m;
}

bool poly_less(const PolyFq& a, const PolyFq& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

namespace {

PolyFq poly_mul(const FieldTower& tw, const PolyFq& a, const PolyFq& b) {
  PolyFq r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = tw.add1(r[i + j], tw.mul1(a[i], b[j]));
  }
  return r;
}

// Remainder of a by monic b.
PolyFq poly_rem(const FieldTower& tw, PolyFq a, const PolyFq& b) {
  int64_t db = (int64_t)b.size() - 1;
  while ((int64_t)a.size() - 1 >= db) {
    uint8_t lead = a.back();
    if (lead) {
      int64_t shift = (int64_t)a.size() - 1 - db;
      for (int64_t j = 0; j <= db; ++j)
        a[shift + j] = tw.sub1(a[shift + j], tw.mul1(lead, b[j]));
    }
    a.pop_back();
    if (a.empty()) break;
  }
  while (a.size() > 1 && a.back() == 0) a.pop_back();
  if (a.empty()) a.push_back(0);
  return a;
}

// Exact quotient of a by monic b (remainder must vanish).
PolyFq poly_div_exact(const FieldTower& tw, PolyFq a, const PolyFq& b) {
  int64_t db = (int64_t)b.size() - 1;
  PolyFq q(a.size() - db, 0);
  for (int64_t i = (int64_t)q.size() - 1; i >= 0; --i) {
    uint8_t c = a[i + db];
    q[i] = c;
    if (!c) continue;
    for (int64_t j = 0; j <= db; ++j) a[i + j] = tw.sub1(a[i + j], tw.mul1(c, b[j]));
  }
  for (uint8_t c : a)
    require(c == 0, Err::Internal, "non-exact polynomial division over F_q");
  return q;
}

uint64_t poly_key(const PolyFq& f, int64_t q) {
  uint64_t k = 1;  // length marker
  for (size_t i = f.size(); i-- > 0;) k = k * (uint64_t)q + f[i];
  return k;
}

struct FqPolyTables {
  std::vector<std::vector<PolyFq>> irred_by_degree;  // [d] sorted
  std::unordered_map<uint64_t, std::vector<std::pair<PolyFq, int>>> factorization;
};

std::map<int64_t, FqPolyTables> g_poly_tables;
std::mutex g_poly_mutex;

void extend_poly_tables(const FieldTower& tw, int degree) {
  std::lock_guard<std::mutex> lock(g_poly_mutex);
  FqPolyTables& t = g_poly_tables[tw.q()];
  int64_t q = tw.q();
  if ((int)t.irred_by_degree.size() > degree) return;
  if (t.irred_by_degree.empty()) t.irred_by_degree.resize(1);
  for (int d = (int)t.irred_by_degree.size(); d <= degree; ++d) {
    t.irred_by_degree.resize(d + 1);
    // enumerate monic polynomials of degree d in ascending coefficient order
    int64_t count = ipow(q, d);
    for (int64_t enc = 0; enc < count; ++enc) {
      PolyFq f(d + 1, 0);
      int64_t e = enc;
      for (int i = 0; i < d; ++i) { f[i] = (uint8_t)(e % q); e /= q; }
      f[d] = 1;
      // factor by trial division with known smaller irreducibles
      std::vector<std::pair<PolyFq, int>> fac;
      PolyFq rest = f;
      for (int dd = 1; dd <= d && (int64_t)rest.size() - 1 > 0; ++dd) {
        if ((int64_t)rest.size() - 1 < dd) break;
        for (const PolyFq& p : t.irred_by_degree[dd]) {
          if ((int64_t)rest.size() - 1 < dd) break;
          int mult = 0;
          PolyFq r = poly_rem(tw, rest, p);
          while (r.size() == 1 && r[0] == 0) {
            rest = poly_div_exact(tw, rest, p);
            ++mult;
            if ((int64_t)rest.size() - 1 < dd) break;
            r = poly_rem(tw, rest, p);
          }
          if (mult) fac.emplace_back(p, mult);
        }
      }
      if ((int64_t)rest.size() - 1 == d) {
        // no proper factor: f itself is irreducible
        t.irred_by_degree[d].push_back(f);
        fac.clear();
        fac.emplace_back(f, 1);
      } else {
        require((int64_t)rest.size() == 1 && rest[0] == 1, Err::Internal,
                "incomplete factorization");
      }
      t.factorization[poly_key(f, q)] = std::move(fac);
    }
    std::sort(t.irred_by_degree[d].begin(), t.irred_by_degree[d].end(), poly_less);
  }
}

Mat poly_at_matrix(const FieldTower& tw, const PolyFq& f, const Mat& g) {
  Mat acc = mat_scalar(tw, g.n, f.back());
  for (size_t i = f.size() - 1; i-- > 0;) {
    acc = mat_mul(tw, acc, g);
    for (int d = 0; d < g.n; ++d) acc.at(d, d) = tw.add1(acc.at(d, d), f[i]);
  }
  return acc;
}

int nullity(const FieldTower& tw, const Mat& m) { return m.n - gauss(tw, m, nullptr); }

}  // namespace

std::vector<PolyFq> irreducible_polys(const FieldTower& tw, int degree) {
  extend_poly_tables(tw, degree);
  std::lock_guard<std::mutex> lock(g_poly_mutex);
  return g_poly_tables[tw.q()].irred_by_degree[degree];
}

std::vector<std::pair<PolyFq, int>> factor_poly(const FieldTower& tw, const PolyFq& f) {
  extend_poly_tables(tw, (int)f.size() - 1);
  std::lock_guard<std::mutex> lock(g_poly_mutex);
  auto it = g_poly_tables[tw.q()].factorization.find(poly_key(f, tw.q()));
  require(it != g_poly_tables[tw.q()].factorization.end(), Err::Internal,
          "polynomial outside factor tables");
  return it->second;
}

PolyFq char_poly(const FieldTower& tw, const Mat& g) {
  // det(xI - g) by permutation expansion; n <= 4 keeps this cheap.
  int n = g.n;
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::vector<uint8_t> acc(n + 1, 0);
  do {
    // sign of the permutation
    int inv = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inv;
    // product over i of the (i, perm(i)) entry of xI - g
    PolyFq prod{1};
    for (int i = 0; i < n; ++i) {
      PolyFq entry;
      if (perm[i] == i) entry = {tw.neg1(g.at(i, i)), 1};
      else entry = {tw.neg1(g.at(i, perm[i]))};
      prod = poly_mul(tw, prod, entry);
    }
    uint8_t s = (inv % 2 == 0) ? 1 : tw.neg1(1);
    for (size_t k = 0; k < prod.size(); ++k)
      acc[k] = tw.add1(acc[k], tw.mul1(s, prod[k]));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc;
}

ClassLabel class_label(const FieldTower& tw, const Mat& g) {
  require(mat_det(tw, g) != 0, Err::Singular, "conjugacy label of singular matrix");
  PolyFq cp = char_poly(tw, g);
  ClassLabel label;
  for (const auto& [f, mult] : factor_poly(tw, cp)) {
    int df = (int)f.size() - 1;
    Partition lam;
    if (mult == 1) {
      lam = {1};
    } else {
      // parts >= j counted by nullity jumps of f(g)^j
      Mat fg = poly_at_matrix(tw, f, g);
      std::vector<int> cnt;  // c_j = #parts >= j
      Mat pw = fg;
      int prev = 0;
      for (int j = 1; j <= mult; ++j) {
        int nul = nullity(tw, pw);
        int c = (nul - prev) / df;
        if (c == 0) break;
        cnt.push_back(c);
        prev = nul;
        pw = mat_mul(tw, pw, fg);
      }
      for (int i = 1; i <= cnt[0]; ++i) {
        int li = 0;
        for (int c : cnt)
          if (c >= i) ++li;
        lam.push_back(li);
      }
      require(partition_weight(lam) == mult, Err::Internal, "partition weight mismatch");
    }
    label.emplace_back(f, lam);
  }
  std::sort(label.begin(), label.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return poly_less(a.first, b.first);
    return a.second < b.second;
  });
  return label;
}

std::string class_label_string(const ClassLabel& label) {
  std::ostringstream os;
  for (const auto& [f, lam] : label) {
    os << "f";
    for (uint8_t c : f) os << (int)c << ".";
    os << "l";
    for (int x : lam) os << x << ".";
    os << "|";
  }
  return os.str();
}

int psi_n_exponent(const FieldTower& tw, const Mat& u) {
  for (int i = 0; i < u.n; ++i) {
    require(u.at(i, i) == 1, Err::NotUnitriangular, "diagonal not one");
    for (int j = 0; j < i; ++j)
      require(u.at(i, j) == 0, Err::NotUnitriangular, "nonzero below diagonal");
  }
  uint8_t s = 0;
  for (int i = 0; i + 1 < u.n; ++i) s = tw.add1(s, u.at(i, i + 1));
  return tw.abs_trace_int(tw.elem1(s));
}

Cyclotomic psi_n_value(const FieldTower& tw, const Mat& u) {
  return Cyclotomic::root(tw.p(), psi_n_exponent(tw, u));
}

Mat elliptic_embed(const FieldTower& tw, FieldElem x) {
  require(!tw.is_zero(x), Err::ZeroElement, "elliptic embedding of zero");
  int n = x.level;
  FieldElem gn = tw.generator(n);
  Mat m;
  m.n = n;
  for (int j = 0; j < n; ++j) {
    FieldElem col = tw.mul(x, tw.pow(gn, j));
    std::vector<uint8_t> co = tw.coords(col);
    for (int i = 0; i < n; ++i) m.at(i, j) = co[i];
  }
  return m;
}

std::vector<Mat> shape_u_elements(const FieldTower& tw, const ParabolicShape& s) {
  int n = s.total();
  std::vector<std::pair<int, int>> freepos;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (s.block_of(i) < s.block_of(j)) freepos.emplace_back(i, j);
  int64_t q = tw.q();
  std::vector<Mat> out;
  int64_t count = ipow(q, (int64_t)freepos.size());
  out.reserve(count);
  for (int64_t enc = 0; enc < count; ++enc) {
    Mat m = mat_identity(n);
    int64_t e = enc;
    for (auto [i, j] : freepos) {
      m.at(i, j) = (uint8_t)(e % q);
      e /= q;
    }
    out.push_back(m);
  }
  return out;
}

namespace {

std::vector<Mat> all_invertible(const FieldTower& tw, int b) {
  int64_t q = tw.q();
  int64_t count = ipow(q, (int64_t)b * b);
  require(count <= (int64_t(1) << 22), Err::LimitExceeded, "block too large to enumerate");
  std::vector<Mat> out;
  for (int64_t code = 0; code < count; ++code) {
    Mat m = mat_decode(tw, b, (uint32_t)code);
    if (mat_det(tw, m) != 0) out.push_back(m);
  }
  return out;
}

}  // namespace

std::vector<Mat> shape_l_elements(const FieldTower& tw, const ParabolicShape& s) {
  int n = s.total();
  std::vector<std::vector<Mat>> blocks;
  for (int b : s.comp) blocks.push_back(all_invertible(tw, b));
  std::vector<Mat> out;
  std::vector<size_t> idx(blocks.size(), 0);
  for (;;) {
    Mat m;
    m.n = n;
    for (size_t bi = 0; bi < blocks.size(); ++bi) {
      int start = s.block_start((int)bi);
      const Mat& blk = blocks[bi][idx[bi]];
      for (int i = 0; i < blk.n; ++i)
        for (int j = 0; j < blk.n; ++j) m.at(start + i, start + j) = blk.at(i, j);
    }
    out.push_back(m);
    size_t bi = 0;
    while (bi < blocks.size() && ++idx[bi] == blocks[bi].size()) {
      idx[bi] = 0;
      ++bi;
    }
    if (bi == blocks.size()) break;
  }
  return out;
}

std::vector<Mat> shape_p_elements(const FieldTower& tw, const ParabolicShape& s) {
  std::vector<Mat> ls = shape_l_elements(tw, s);
  std::vector<Mat> us = shape_u_elements(tw, s);
  std::vector<Mat> out;
  out.reserve(ls.size() * us.size());
  for (const Mat& l : ls)
    for (const Mat& u : us) out.push_back(mat_mul(tw, l, u));
  return out;
}

std::vector<Mat> levi_blocks(const ParabolicShape& s, const Mat& p) {
  std::vector<Mat> out;
  for (size_t bi = 0; bi < s.comp.size(); ++bi) {
    int start = s.block_start((int)bi);
    Mat m;
    m.n = s.comp[bi];
    for (int i = 0; i < m.n; ++i)
      for (int j = 0; j < m.n; ++j) m.at(i, j) = p.at(start + i, start + j);
    out.push_back(m);
  }
  return out;
}

bool in_parabolic(const ParabolicShape& s, const Mat& p) {
  for (int i = 0; i < p.n; ++i)
    for (int j = 0; j < p.n; ++j)
      if (s.block_of(i) > s.block_of(j) && p.at(i, j) != 0) return false;
  return true;
}

Mat w_hat(int n1, int n2) {
  Mat m;
  m.n = n1 + n2;
  for (int i = 0; i < n2; ++i) m.at(i, n1 + i) = 1;
  for (int i = 0; i < n1; ++i) m.at(n2 + i, i) = 1;
  return m;
}

Mat w_long(int n) {
  Mat m;
  m.n = n;
  for (int i = 0; i < n; ++i) m.at(i, n - 1 - i) = 1;
  return m;
}

int64_t gl_order(int64_t q, int n) {
  int64_t qn = ipow(q, n);
  int64_t o = 1;
  for (int i = 0; i < n; ++i) o *= qn - ipow(q, i);
  return o;
}

GroupContext GroupContext::build(const FieldTower& tw, int n, int64_t cap) {
  GroupContext g;
  g.tw_ = &tw;
  g.n_ = n;
  g.q_ = tw.q();
  require(tw.top_level() % n == 0, Err::LevelMismatch, "tower does not contain level n");
  g.order_ = gl_order(g.q_, n);
  require(g.order_ <= cap, Err::CapExceeded,
          "|GL_" + std::to_string(n) + "(F_" + std::to_string(g.q_) +
              ")| = " + std::to_string(g.order_) + " exceeds cap " + std::to_string(cap));
  int64_t codes = ipow(g.q_, (int64_t)n * n);
  require(codes <= (int64_t(1) << 26), Err::CapExceeded, "matrix code space too large");

  extend_poly_tables(tw, n);

  g.class_of_.assign(codes, -1);
  std::map<std::string, int> class_idx;
  std::vector<ClassLabel> labels;
  std::vector<int64_t> sizes;
  std::vector<uint32_t> reps;
  for (int64_t code = 0; code < codes; ++code) {
    Mat m = mat_decode(tw, n, (uint32_t)code);
    if (mat_det(tw, m) == 0) continue;
    g.elements_.push_back((uint32_t)code);
    ClassLabel lab = class_label(tw, m);
    std::string key = class_label_string(lab);
    auto it = class_idx.find(key);
    int idx;
    if (it == class_idx.end()) {
      idx = (int)labels.size();
      class_idx.emplace(key, idx);
      labels.push_back(std::move(lab));
      sizes.push_back(0);
      reps.push_back((uint32_t)code);
    } else {
      idx = it->second;
    }
    sizes[idx]++;
    g.class_of_[code] = idx;
  }
  require((int64_t)g.elements_.size() == g.order_, Err::Internal,
          "element count disagrees with the order formula");

  // canonical order: sort classes by label
  std::vector<int> order_idx(labels.size());
  for (size_t i = 0; i < order_idx.size(); ++i) order_idx[i] = (int)i;
  std::sort(order_idx.begin(), order_idx.end(), [&](int a, int b) {
    const ClassLabel& la = labels[a];
    const ClassLabel& lb = labels[b];
    size_t m = std::min(la.size(), lb.size());
    for (size_t i = 0; i < m; ++i) {
      if (la[i].first != lb[i].first) return poly_less(la[i].first, lb[i].first);
      if (la[i].second != lb[i].second) return la[i].second < lb[i].second;
    }
    return la.size() < lb.size();
  });
  std::vector<int> new_of_old(labels.size());
  for (size_t i = 0; i < order_idx.size(); ++i) new_of_old[order_idx[i]] = (int)i;
  for (int64_t code = 0; code < codes; ++code)
    if (g.class_of_[code] >= 0) g.class_of_[code] = new_of_old[g.class_of_[code]];

  int64_t total = 0;
  g.classes_.resize(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) {
    ClassInfo& ci = g.classes_[new_of_old[i]];
    ci.label = labels[i];
    ci.label_str = class_label_string(labels[i]);
    ci.rep = mat_decode(tw, n, reps[i]);
    ci.size = sizes[i];
    ci.centralizer = g.order_ / sizes[i];
    total += sizes[i];
  }
  require(total == g.order_, Err::Internal, "class sizes do not sum to |G|");

  Mat id = mat_identity(n);
  g.identity_class_ = g.class_of_[mat_encode(tw, id)];

  for (auto& ci : g.classes_) {
    Mat p = ci.rep;
    int o = 1;
    while (!(p == id)) {
      p = mat_mul(tw, p, ci.rep);
      ++o;
    }
    ci.order = o;
    ci.trace_code = mat_trace(tw, ci.rep);
    ci.power_class.resize(o);
    Mat pw = id;
    for (int s = 0; s < o; ++s) {
      ci.power_class[s] = g.class_of_[mat_encode(tw, pw)];
      pw = mat_mul(tw, pw, ci.rep);
    }
    ci.inverse_class = ci.power_class[(o - 1) % o];
    g.exponent_ = (int)lcm64(g.exponent_, o);
  }

  // U_n elements and the left-coset structure of U_n \ G.
  ParabolicShape borel;
  borel.comp.assign(n, 1);
  std::vector<Mat> us = shape_u_elements(tw, borel);
  g.u_elements_.reserve(us.size());
  for (const Mat& u : us) g.u_elements_.push_back(mat_encode(tw, u));
  g.coset_of_.assign(codes, -1);
  g.coset_psi_.assign(codes, 0);
  for (uint32_t code : g.elements_) {
    if (g.coset_of_[code] >= 0) continue;
    int32_t idx = (int32_t)g.coset_rep_.size();
    g.coset_rep_.push_back(code);
    Mat rep = mat_decode(tw, n, code);
    for (const Mat& u : us) {
      Mat mem = mat_mul(tw, u, rep);
      uint32_t mc = mat_encode(tw, mem);
      require(g.coset_of_[mc] < 0, Err::Internal, "coset overlap");
      g.coset_of_[mc] = idx;
      g.coset_psi_[mc] = psi_n_exponent(tw, u);
    }
  }
  require((int64_t)g.coset_rep_.size() * (int64_t)us.size() == g.order_, Err::Internal,
          "coset decomposition incomplete");
  return g;
}

}  // namespace mactab
