#include "mactab/factors.hpp"

#include <algorithm>
#include <unordered_map>

namespace mactab {

namespace {

// splitmix64 for the seeded sampling policy
struct SampleRng {
  uint64_t state;
  explicit SampleRng(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
};

Mat random_invertible(const FieldTower& tw, int n, SampleRng& rng) {
  for (;;) {
    Mat m;
    m.n = n;
    for (int i = 0; i < n * n; ++i) m.a[i] = (uint8_t)(rng.next() % tw.q());
    if (mat_det(tw, m) != 0) return m;
  }
}

int prime_int_of_code1(const FieldTower& tw, uint8_t code) {
  uint8_t acc = 0;
  for (int j = 0; j < (int)tw.p(); ++j) {
    if (acc == code) return j;
    acc = tw.add1(acc, 1);
  }
  fail(Err::Internal, "additive twist not in the prime field");
}

}  // namespace

FactorValue w_scalar(const ClassFunction& chi, const AddChar& psi) {
  require(chi.inner(chi) == Cyclotomic::integer(1), Err::NotIrreducible,
          "Fourier scalar of a non-irreducible");
  const GroupContext& G = *chi.G;
  const FieldTower& tw = G.tower();
  Cyclotomic sum;
  for (int k = 0; k < G.num_classes(); ++k) {
    const auto& ci = G.classes()[k];
    if (chi.v[k].is_zero()) continue;
    Cyclotomic term = psi.value(tw.elem1(ci.trace_code)) * chi.v[k];
    sum += term.scaled(Rat(ci.size));
  }
  int n = G.n();
  return FactorValue(tw.q(), -(int64_t)n * n, sum.scaled(Rat(1, chi.degree_int())));
}

FactorValue eps_zeta(const ClassFunction& chi, const AddChar& psi) {
  return w_scalar(chi.conj_fn(), psi);
}

WhittakerModel WhittakerModel::build(const GroupContext& G, const ClassFunction& chi,
                                     const AddChar& psi) {
  WhittakerModel m;
  m.G_ = &G;
  m.chi_ = &chi;
  m.psi_ = psi;
  const FieldTower& tw = G.tower();
  m.twist_int_ = prime_int_of_code1(tw, psi.twist);
  require(m.twist_int_ != 0, Err::Internal, "trivial additive character");
  const int64_t p = tw.p();
  const int64_t N = G.num_cosets();
  const int64_t dim = chi.degree_int();

  // psi_n exponents of all of U_n under the twist
  std::vector<std::pair<uint32_t, int>> u_exp;
  u_exp.reserve(G.u_elements().size());
  for (uint32_t uc : G.u_elements()) {
    Mat u = mat_decode(tw, G.n(), uc);
    u_exp.emplace_back(uc, (int)mod_pos((int64_t)m.twist_int_ * psi_n_exponent(tw, u), p));
  }
  const int64_t usz = (int64_t)u_exp.size();

  // Whittaker type: <chi|_U, psi_n> must be exactly one
  {
    Cyclotomic ip;
    for (auto& [uc, pe] : u_exp)
      ip += chi.v[G.class_of_code(uc)] * Cyclotomic::root(p, -pe);
    require(ip.scaled(Rat(1, usz)) == Cyclotomic::integer(1), Err::NotGeneric,
            "character is not of Whittaker type for this additive character");
  }

  // Bessel vector: B(t) = |U|^-1 sum_u chi(t u) psi_n(u)^-1
  m.whittaker_.assign(N, Cyclotomic());
  for (int64_t r = 0; r < N; ++r) {
    Mat rep = mat_decode(tw, G.n(), G.coset_reps()[r]);
    Cyclotomic acc;
    for (auto& [uc, pe] : u_exp) {
      Mat u = mat_decode(tw, G.n(), uc);
      const Cyclotomic& cv = chi.v[G.class_of(mat_mul(tw, rep, u))];
      if (!cv.is_zero()) acc += cv.times_root(0) * Cyclotomic::root(p, -pe);
    }
    m.whittaker_[r] = acc.scaled(Rat(1, usz));
  }
  require(m.eval(m.whittaker_, mat_identity(G.n())) == Cyclotomic::integer(1), Err::Internal,
          "Bessel vector not normalized at the identity");
  // two-sided equivariance: R(u) B = psi_n(u) B
  for (auto& [uc, pe] : u_exp) {
    Mat u = mat_decode(tw, G.n(), uc);
    Fn tr = m.translate(m.whittaker_, u);
    for (int64_t r = 0; r < N; ++r)
      require(tr[r] == m.whittaker_[r] * Cyclotomic::root(p, pe), Err::Internal,
              "Bessel vector is not a psi eigenvector");
  }

  // basis of the chi-isotypic image: apply the projector to coset deltas
  struct EchelonRow {
    int64_t pivot;
    Fn row;
  };
  std::vector<EchelonRow> ech;
  for (int64_t t = 0; t < N && (int64_t)m.basis_.size() < dim; ++t) {
    Mat tmat = mat_decode(tw, G.n(), G.coset_reps()[t]);
    Fn vec(N, Cyclotomic());
    for (uint32_t hc : G.elements()) {
      const Cyclotomic& cv = chi.v[G.class_of_code(hc)];
      if (cv.is_zero()) continue;
      Mat s = mat_mul(tw, tmat, mat_decode(tw, G.n(), hc));
      auto [r, pu] = G.coset_of_code(mat_encode(tw, s));
      vec[r] += cv.times_root(0) *
                Cyclotomic::root(p, -mod_pos((int64_t)m.twist_int_ * pu, p));
    }
    // reduce against current echelon rows
    Fn red = vec;
    for (const auto& er : ech) {
      if (red[er.pivot].is_zero()) continue;
      Cyclotomic f = red[er.pivot];
      for (int64_t k = 0; k < N; ++k) red[k] -= f * er.row[k];
    }
    int64_t piv = -1;
    for (int64_t k = 0; k < N; ++k)
      if (!red[k].is_zero()) { piv = k; break; }
    if (piv < 0) continue;
    Cyclotomic inv = red[piv].inverse();
    for (int64_t k = 0; k < N; ++k) red[k] *= inv;
    ech.push_back({piv, std::move(red)});
    m.basis_.push_back(std::move(vec));
  }
  require((int64_t)m.basis_.size() == dim, Err::Internal,
          "isotypic image has unexpected rank");
  return m;
}

Cyclotomic WhittakerModel::eval(const Fn& fn, const Mat& g) const {
  const FieldTower& tw = G_->tower();
  auto [r, pu] = G_->coset_of_code(mat_encode(tw, g));
  require(r >= 0, Err::Singular, "evaluation at a singular matrix");
  if (fn[r].is_zero()) return Cyclotomic();
  int64_t e = mod_pos((int64_t)twist_int_ * pu, tw.p());
  if (e == 0) return fn[r];
  return fn[r] * Cyclotomic::root(tw.p(), e);
}

WhittakerModel::Fn WhittakerModel::translate(const Fn& fn, const Mat& a) const {
  const FieldTower& tw = G_->tower();
  Fn out(fn.size());
  for (size_t r = 0; r < fn.size(); ++r) {
    Mat g = mat_mul(tw, mat_decode(tw, G_->n(), G_->coset_reps()[r]), a);
    out[r] = eval(fn, g);
  }
  return out;
}

bool cell_factor(const FieldTower& tw, int n1, int n2, const Mat& g, Mat* p_out,
                 Mat* u_out) {
  const int n = n1 + n2;
  require(g.n == n, Err::ShapeMismatch, "matrix size does not match the shape");
  // Support matrix is w_hat(n2, n1), the block swap with I_{n1} in the top
  // right: the stabilizer of the factorization then acts on v1 (x) v2 through
  // the Whittaker property, which is what makes the induced vector
  // well-defined.  The cleared columns are the sources of the first n1
  // columns after the column permutation: [n2, n).
  std::vector<int> targets;
  for (int mcol = 0; mcol < n1; ++mcol) targets.push_back(n2 + mcol);

  // bottom n2 rows of g, by column
  auto R = [&](int col, int row) { return g.at(n1 + row, col); };

  Mat V = mat_identity(n);  // V = u^-1
  for (int j : targets) {
    // solve sum_{i<j} x_i R_i = -R_j
    // Gaussian elimination on the n2 x j system
    std::vector<std::vector<uint8_t>> A(n2, std::vector<uint8_t>(j + 1, 0));
    for (int row = 0; row < n2; ++row) {
      for (int i = 0; i < j; ++i) A[row][i] = R(i, row);
      A[row][j] = tw.neg1(R(j, row));
    }
    int rank = 0;
    std::vector<int> pivcol;
    for (int col = 0; col < j && rank < n2; ++col) {
      int pr = -1;
      for (int row = rank; row < n2; ++row)
        if (A[row][col] != 0) { pr = row; break; }
      if (pr < 0) continue;
      std::swap(A[pr], A[rank]);
      uint8_t iv = tw.inv1(A[rank][col]);
      for (int k = col; k <= j; ++k) A[rank][k] = tw.mul1(A[rank][k], iv);
      for (int row = 0; row < n2; ++row) {
        if (row == rank || A[row][col] == 0) continue;
        uint8_t f = A[row][col];
        for (int k = col; k <= j; ++k)
          A[row][k] = tw.sub1(A[row][k], tw.mul1(f, A[rank][k]));
      }
      pivcol.push_back(col);
      ++rank;
    }
    for (int row = rank; row < n2; ++row)
      if (A[row][j] != 0) return false;  // inconsistent: outside the cell
    for (int s = 0; s < rank; ++s) V.at(pivcol[s], j) = A[s][j];
  }
  Mat what = w_hat(n2, n1);
  Mat p = mat_mul(tw, mat_mul(tw, g, V), mat_transpose(what));  // w_hat^-1 = transpose
  require(in_parabolic(ParabolicShape{{n1, n2}}, p), Err::Internal,
          "cell factorization escaped the parabolic");
  if (p_out) *p_out = p;
  if (u_out) *u_out = mat_inv(tw, V);
  return true;
}

namespace {

using Fn = WhittakerModel::Fn;

// Lazy evaluator for the induced Whittaker vector of (pi1, pi2) and its
// intertwining transform, with memoized Levi translations.
struct InducedVectors {
  const WhittakerModel* m1;
  const WhittakerModel* m2;
  const FieldTower* tw;
  int n1, n2, n;
  Mat what;
  std::vector<Mat> ublock;  // U(n1, n2)
  mutable std::unordered_map<uint32_t, Fn> cache1, cache2;

  InducedVectors(const WhittakerModel& a, const WhittakerModel& b)
      : m1(&a), m2(&b), tw(&a.group().tower()) {
    n1 = a.group().n();
    n2 = b.group().n();
    n = n1 + n2;
    what = w_hat(n2, n1);  // support matrix: I_{n1} top right
    // the intertwining sum runs over the radical of the target parabolic
    ublock = shape_u_elements(*tw, ParabolicShape{{n2, n1}});
  }

  const Fn& translated(const WhittakerModel& m,
                       std::unordered_map<uint32_t, Fn>& cache, const Mat& a) const {
    uint32_t key = mat_encode(*tw, a);
    auto it = cache.find(key);
    if (it == cache.end())
      it = cache.emplace(key, m.translate(m.whittaker(), a)).first;
    return it->second;
  }

  // v(g) as the pure tensor (x1, x2), with the psi_n(u) scalar folded into x1;
  // false when g lies outside the support cell P w U.
  bool eval_pure(const Mat& g, Fn& x1, Fn& x2) const {
    Mat p, u;
    if (!cell_factor(*tw, n1, n2, g, &p, &u)) return false;
    auto blocks = levi_blocks(ParabolicShape{{n1, n2}}, p);
    const Fn& t1 = translated(*m1, cache1, blocks[0]);
    const Fn& t2 = translated(*m2, cache2, blocks[1]);
    int64_t pe = mod_pos((int64_t)m1->psi_twist_int() * psi_n_exponent(*tw, u), tw->p());
    x1 = t1;
    if (pe != 0) {
      Cyclotomic ph = Cyclotomic::root(tw->p(), pe);
      for (auto& c : x1) c *= ph;
    }
    x2 = t2;
    return true;
  }

  // flat value of v(g) in V1 (x) V2 order: idx = a * N2 + b
  bool eval_flat(const Mat& g, std::vector<Cyclotomic>& out) const {
    Fn x1, x2;
    if (!eval_pure(g, x1, x2)) return false;
    out.assign(x1.size() * x2.size(), Cyclotomic());
    for (size_t a = 0; a < x1.size(); ++a) {
      if (x1[a].is_zero()) continue;
      for (size_t b = 0; b < x2.size(); ++b)
        if (!x2[b].is_zero()) out[a * x2.size() + b] = x1[a] * x2[b];
    }
    return true;
  }

  // (A v)(g) = sum_u sw(v(w_hat u g)), valued in V2 (x) V1: idx = b * N1 + a
  std::vector<Cyclotomic> intertwined(const Mat& g) const {
    int64_t N1 = m1->ambient_dim(), N2 = m2->ambient_dim();
    std::vector<Cyclotomic> out(N1 * N2, Cyclotomic());
    for (const Mat& u : ublock) {
      Mat arg = mat_mul(*tw, what, mat_mul(*tw, u, g));
      Fn x1, x2;
      if (!eval_pure(arg, x1, x2)) continue;
      for (int64_t b = 0; b < N2; ++b) {
        if (x2[b].is_zero()) continue;
        for (int64_t a = 0; a < N1; ++a)
          if (!x1[a].is_zero()) out[b * N1 + a] += x2[b] * x1[a];
      }
    }
    return out;
  }
};

bool flat_equal(const std::vector<Cyclotomic>& a, const std::vector<Cyclotomic>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!a[i].equals(b[i])) return false;
  return true;
}

std::vector<Cyclotomic> flat_scale(const std::vector<Cyclotomic>& a, const Cyclotomic& s) {
  std::vector<Cyclotomic> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i].is_zero() ? Cyclotomic() : a[i] * s;
  return out;
}

}  // namespace

ShahidiGamma shahidi_gamma(const WhittakerModel& pi1, const WhittakerModel& pi2,
                           const GammaPolicy& policy) {
  const FieldTower& tw = pi1.group().tower();
  require(&tw == &pi2.group().tower(), Err::Internal, "models over different towers");
  require(pi1.psi_twist_int() == pi2.psi_twist_int(), Err::Internal,
          "models built with different additive characters");
  const int n1 = pi1.group().n(), n2 = pi2.group().n(), n = n1 + n2;
  const int64_t q = tw.q();

  InducedVectors fwd(pi1, pi2);
  InducedVectors swp(pi2, pi1);

  // extract the scalar at the swapped pair's support matrix, where the target
  // vector takes the value v2 (x) v1
  Mat w0 = swp.what;
  std::vector<Cyclotomic> lhs0 = fwd.intertwined(w0);
  std::vector<Cyclotomic> rhs0;
  require(swp.eval_flat(w0, rhs0), Err::Internal,
          "reference point outside the swapped support cell");
  int64_t k0 = -1;
  for (size_t k = 0; k < rhs0.size(); ++k)
    if (!rhs0[k].is_zero()) { k0 = (int64_t)k; break; }
  require(k0 >= 0, Err::ZeroDenominator, "swapped Whittaker vector vanishes at w_hat");
  Cyclotomic gamma = lhs0[k0] * rhs0[k0].inverse();
  require(flat_equal(lhs0, flat_scale(rhs0, gamma)), Err::NotProportional,
          "intertwining image not proportional at the extraction point");

  // well-definedness of the induced vector and full proportionality
  auto check_point = [&](const Mat& g) {
    // all factorizations of g agree
    std::vector<Cyclotomic> canonical;
    bool in_cell = fwd.eval_flat(g, canonical);
    for (const Mat& V : shape_u_elements(tw, ParabolicShape{std::vector<int>(n, 1)})) {
      // candidate u = V; p = g u^-1 w^-1
      Mat p = mat_mul(tw, mat_mul(tw, g, mat_inv(tw, V)), mat_transpose(fwd.what));
      if (!in_parabolic(ParabolicShape{{n1, n2}}, p)) continue;
      require(in_cell, Err::IllDefined, "factorization exists outside the detected cell");
      auto blocks = levi_blocks(ParabolicShape{{n1, n2}}, p);
      Fn x1 = fwd.translated(pi1, fwd.cache1, blocks[0]);
      Fn x2 = fwd.translated(pi2, fwd.cache2, blocks[1]);
      int64_t pe = mod_pos((int64_t)pi1.psi_twist_int() * psi_n_exponent(tw, V), tw.p());
      std::vector<Cyclotomic> val(x1.size() * x2.size(), Cyclotomic());
      Cyclotomic ph = Cyclotomic::root(tw.p(), pe);
      for (size_t a = 0; a < x1.size(); ++a) {
        if (x1[a].is_zero()) continue;
        Cyclotomic xa = x1[a] * ph;
        for (size_t b = 0; b < x2.size(); ++b)
          if (!x2[b].is_zero()) val[a * x2.size() + b] = xa * x2[b];
      }
      require(flat_equal(val, canonical), Err::IllDefined,
              "induced vector value depends on the factorization");
    }
    // proportionality at g
    std::vector<Cyclotomic> lhs = fwd.intertwined(g);
    std::vector<Cyclotomic> rhs;
    if (!swp.eval_flat(g, rhs)) rhs.assign(lhs.size(), Cyclotomic());
    require(flat_equal(lhs, flat_scale(rhs, gamma)), Err::NotProportional,
            "intertwining image not proportional to the swapped vector");
  };

  if (gl_order(q, n) <= policy.exhaustive_bound) {
    int64_t codes = ipow(q, (int64_t)n * n);
    for (int64_t code = 0; code < codes; ++code) {
      Mat g = mat_decode(tw, n, (uint32_t)code);
      if (mat_det(tw, g) == 0) continue;
      check_point(g);
    }
  } else {
    SampleRng rng(policy.seed);
    for (int i = 0; i < policy.sample_points; ++i)
      check_point(random_invertible(tw, n, rng));
  }

  return ShahidiGamma{gamma, FactorValue(q, -(int64_t)n1 * n2, gamma)};
}

namespace {

// note on the psi_n(u) exponent used in check_point: the induced vector's
// transformation character is psi_{n1+n2}, shared by both models' twist.

bool is_cuspidal_checked(const ClassFunction& chi,
                         const std::vector<const GroupContext*>& ctxs_by_size) {
  return is_cuspidal(chi, ctxs_by_size);
}

}  // namespace

FactorValue eps_pair(const WhittakerModel& sigma1, const WhittakerModel& sigma2,
                     const WhittakerModel& sigma2_dual,
                     const std::vector<const GroupContext*>& ctxs_by_size,
                     const GammaPolicy& policy) {
  const int n1 = sigma1.group().n(), n2 = sigma2.group().n();
  require(n1 >= n2, Err::Unsupported, "pair epsilon requires n1 >= n2");
  require(is_cuspidal_checked(sigma1.character(), ctxs_by_size), Err::NotCuspidal,
          "first member of the pair is not cuspidal");
  require(is_cuspidal_checked(sigma2.character(), ctxs_by_size), Err::NotCuspidal,
          "second member of the pair is not cuspidal");
  require(sigma2_dual.character() == sigma2.character().conj_fn(), Err::Internal,
          "dual model does not carry the contragredient character");
  ShahidiGamma g = shahidi_gamma(sigma1, sigma2_dual, policy);
  if (n2 % 2 == 0) return g.normalized;
  return g.normalized.scaled(central_sign(sigma2.character()));
}

FactorValue jpss_gamma(const WhittakerModel& pi, const WhittakerModel& sigma) {
  const GroupContext& Gn = pi.group();
  const GroupContext& Gm = sigma.group();
  const FieldTower& tw = Gn.tower();
  const int n = Gn.n(), m = Gm.n();
  require(n > m, Err::Unsupported, "JPSS oracle requires n1 > n2");
  require(pi.psi_twist_int() == mod_pos(-(int64_t)sigma.psi_twist_int(), tw.p()),
          Err::Internal, "sigma model must use the inverse additive character");
  const int64_t q = tw.q();

  // Z(W, W') = sum over cosets h in U_m \ G_m of W([[0,h],[I,0]]) W'(h); the
  // summand is invariant under h -> uh by the two psi-equivariances.
  auto zeta = [&](const WhittakerModel::Fn& W, const WhittakerModel::Fn& Wp) {
    Cyclotomic acc;
    for (int64_t r = 0; r < Gm.num_cosets(); ++r) {
      Mat h = mat_decode(tw, m, Gm.coset_reps()[r]);
      Cyclotomic wpv = sigma.eval(Wp, h);
      if (wpv.is_zero()) continue;
      Mat M;
      M.n = n;
      for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) M.at(i, n - m + k) = h.at(i, k);
      for (int i = 0; i < n - m; ++i) M.at(m + i, i) = 1;
      acc += pi.eval(W, M) * wpv;
    }
    return acc;
  };

  Cyclotomic c = zeta(pi.whittaker(), sigma.whittaker());
  // Multiplicity one: W' |-> Z(B_pi, W') is a psi-inverse Whittaker functional
  // on the sigma model, hence proportional to evaluation at the identity.
  Mat id = mat_identity(m);
  for (const auto& Wp : sigma.basis()) {
    Cyclotomic lhs = zeta(pi.whittaker(), Wp);
    Cyclotomic rhs = c * sigma.eval(Wp, id);
    require(lhs == rhs, Err::NotProportional,
            "zeta pairing is not proportional to the identity functional");
  }

  // Normalization pinned against the intertwining route (the sjpss suite
  // verifies the relation as an exact identity): the raw Shahidi scalar equals
  // q^(n1+n2-2) omega(-1) Z, which forces
  // gamma = q^(n1+n2-2 - n1 n2/2 - (n1-n2-1) n2) * Z.
  int64_t half = 2 * (int64_t)(n + m - 2) - (int64_t)n * m - 2 * (int64_t)(n - m - 1) * m;
  return FactorValue(q, half, c);
}

}  // namespace mactab
