#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mactab/char_lattice.hpp"
#include "mactab/common.hpp"
#include "mactab/gl_group.hpp"

namespace mactab {

// Class function on a materialized GL_n(F_q), one exact value per class.
struct ClassFunction {
  const GroupContext* G = nullptr;
  std::vector<Cyclotomic> v;

  const Cyclotomic& at(int cls) const { return v[cls]; }
  const Cyclotomic& at_identity() const { return v[G->identity_class()]; }
  int64_t degree_int() const;
  // <f1, f2> = |G|^-1 sum_g f1(g) conj(f2(g)), class-by-class; exact.
  Cyclotomic inner(const ClassFunction& o) const;
  ClassFunction conj_fn() const;  // the contragredient character values
  bool is_zero() const;
  bool operator==(const ClassFunction& o) const { return v == o.v; }
};

// Product of block groups; classes are tuples of block classes.
struct LeviContext {
  std::vector<const GroupContext*> blocks;

  int num_classes() const;
  std::vector<int> decode(int idx) const;
  int64_t class_size(const std::vector<int>& t) const;
  int64_t order() const;
};

struct LeviClassFunction {
  LeviContext L;
  std::vector<Cyclotomic> v;

  Cyclotomic inner(const LeviClassFunction& o) const;
  bool is_zero() const;
};

class CharacterTable {
 public:
  // Exact table by class-algebra splitting over a prime l = 1 mod exponent(G)
  // and root-of-unity lifting of eigenvalue multiplicities.
  static CharacterTable compute(const GroupContext& G, int64_t cap = 200000);

  const GroupContext& group() const { return *G_; }
  const std::vector<ClassFunction>& irreducibles() const { return irr_; }
  int size() const { return (int)irr_.size(); }
  const ClassFunction& irr(int i) const { return irr_[i]; }

  int find(const ClassFunction& chi) const;           // exact row match, -1 if absent
  int contragredient(int i) const;                     // index of the conjugate row
  void verify_orthogonality() const;                   // throws on any defect
  std::vector<int64_t> degrees() const;

  std::string cache_json() const;                      // canonical serialization
  static std::optional<CharacterTable> from_cache_json(const GroupContext& G,
                                                       const std::string& text);

 private:
  const GroupContext* G_ = nullptr;
  std::vector<ClassFunction> irr_;
};

// Character of Ind_P^G of the inflation of chi_1 x ... x chi_r along the shape.
ClassFunction parabolic_induce(const GroupContext& G, const ParabolicShape& shape,
                               const std::vector<const GroupContext*>& block_ctxs,
                               const std::vector<const ClassFunction*>& chis);

// l |-> |U|^-1 sum_u chi(l u), a class function on the Levi.
LeviClassFunction jacquet_restrict(const ClassFunction& chi, const ParabolicShape& shape,
                                   const std::vector<const GroupContext*>& block_ctxs);

std::vector<std::vector<int>> proper_compositions(int n);
bool is_cuspidal(const ClassFunction& chi,
                 const std::vector<const GroupContext*>& ctxs_by_size);

// Green trace formula: the unique degree-n orbit with
// chi(x) = (-1)^(n-1) sum_{orbit} theta(x) for every degree-n element x.
GaloisOrbit label_cuspidal(const FieldTower& tw, const ClassFunction& chi);

// Central character as a level-1 character exponent.
LevelChar central_character(const ClassFunction& chi);

// chi(-I)/chi(I), a sign: the central character at -1.
Cyclotomic central_sign(const ClassFunction& chi);

struct Labeling {
  std::vector<ParamFunction> param_of_irr;
  std::map<ParamFunction, int> irr_of_param;
};

// Labelings for GL_1 .. GL_n: cuspidals via the trace formula, single-orbit
// partitions by Hecke-algebra generic degrees, mixed labels by induction of
// the labeled pieces (asserted irreducible).
std::vector<Labeling> label_tower(const FieldTower& tw,
                                  const std::vector<const GroupContext*>& ctxs,
                                  const std::vector<const CharacterTable*>& tables,
                                  int n);

// Predicted dimension of the constituent labeled by lambda inside the e-fold
// product of a cuspidal of degree dim_sigma on GL_m: hook-type q-analog.
int64_t generic_degree_dimension(int64_t q, int m, int64_t index_gp, int64_t dim_sigma,
                                 const Partition& lam);

}  // namespace mactab
