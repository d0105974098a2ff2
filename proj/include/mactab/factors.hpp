#pragma once

#include <cstdint>
#include <vector>

#include "mactab/char_table.hpp"
#include "mactab/wd_side.hpp"

namespace mactab {

// Scalar of the Fourier operator acting in pi: q^(-n^2/2) (dim pi)^-1
// sum_g psi(Tr g) chi(g).
FactorValue w_scalar(const ClassFunction& chi, const AddChar& psi);
// eps(pi, psi) = w(pi^vee, psi).
FactorValue eps_zeta(const ClassFunction& chi, const AddChar& psi);

// Realization of an irreducible Whittaker-type character inside the
// Gelfand-Graev space: functions on U_n \ G with psi_n-equivariance, acted on
// by right translation.  The distinguished Whittaker vector is the two-sided
// equivariant function normalized to 1 at the identity.
class WhittakerModel {
 public:
  using Fn = std::vector<Cyclotomic>;  // one value per U-coset

  static WhittakerModel build(const GroupContext& G, const ClassFunction& chi,
                              const AddChar& psi);

  const GroupContext& group() const { return *G_; }
  const ClassFunction& character() const { return *chi_; }
  const AddChar& psi() const { return psi_; }
  int psi_twist_int() const { return twist_int_; }
  int dim() const { return (int)basis_.size(); }
  int64_t ambient_dim() const { return G_->num_cosets(); }
  const std::vector<Fn>& basis() const { return basis_; }
  const Fn& whittaker() const { return whittaker_; }

  Cyclotomic eval(const Fn& fn, const Mat& g) const;
  Fn translate(const Fn& fn, const Mat& a) const;

 private:
  const GroupContext* G_ = nullptr;
  const ClassFunction* chi_ = nullptr;
  AddChar psi_;
  int twist_int_ = 1;  // psi twist as an integer in [1, p)
  std::vector<Fn> basis_;
  Fn whittaker_;
};

// g = p * w_hat(n2,n1) * u with p in P(n1,n2) and u upper unitriangular;
// returns false when g is outside the support cell, else a canonical
// factorization.
bool cell_factor(const FieldTower& tw, int n1, int n2, const Mat& g, Mat* p_out,
                 Mat* u_out);

struct GammaPolicy {
  int64_t exhaustive_bound = 25000;  // full-group assertions below this order
  int sample_points = 48;            // sampled assertions above it
  uint64_t seed = 0x6d61637461ull;
};

struct ShahidiGamma {
  Cyclotomic raw;          // the proportionality scalar of the intertwining operator
  FactorValue normalized;  // q^(-n1 n2 / 2) times raw
};

// The scalar with A(v_{pi1,pi2,psi}) = gamma * v_{pi2,pi1,psi}; proportionality
// and well-definedness of the induced Whittaker vector are asserted across the
// whole group below the exhaustive bound and on seeded samples above it.
ShahidiGamma shahidi_gamma(const WhittakerModel& pi1, const WhittakerModel& pi2,
                           const GammaPolicy& policy = {});

// eps(sigma1 x sigma2, psi) = omega_{sigma2}(-1)^{n2} gamma^Sh(sigma1 x sigma2^vee, psi).
// sigma2_dual must be the model of the contragredient of sigma2.
FactorValue eps_pair(const WhittakerModel& sigma1, const WhittakerModel& sigma2,
                     const WhittakerModel& sigma2_dual,
                     const std::vector<const GroupContext*>& ctxs_by_size,
                     const GammaPolicy& policy = {});

// Jacquet-Piatetski-Shapiro-Shalika gamma factor for pi cuspidal on GL_n and
// sigma generic on GL_m, n > m, from the Whittaker-model zeta pairing
//   Z(W, W') = sum over U_m \ G_m of W([[0, h],[I_{n-m}, 0]]) W'(h)
// evaluated on the distinguished vectors; sigma's model must be built with the
// inverse additive character.  The pairing against an arbitrary W' is a
// psi-Whittaker functional, so by multiplicity one Z(B_pi, W') is proportional
// to W'(1); that identity is asserted over the whole sigma basis.
FactorValue jpss_gamma(const WhittakerModel& pi, const WhittakerModel& sigma);

}  // namespace mactab
