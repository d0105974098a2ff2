#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mactab/char_lattice.hpp"
#include "mactab/common.hpp"
#include "mactab/ff_tower.hpp"

namespace mactab {

// Square matrix over k = F_q, entries stored as level-1 codes.  Sized for the
// desk-scale grid (n <= 4, plus room for induced groups).
struct Mat {
  int n = 0;
  std::array<uint8_t, 36> a{};

  uint8_t& at(int i, int j) { return a[i * n + j]; }
  uint8_t at(int i, int j) const { return a[i * n + j]; }
  bool operator==(const Mat& o) const { return n == o.n && a == o.a; }
};

Mat mat_identity(int n);
Mat mat_mul(const FieldTower& tw, const Mat& x, const Mat& y);
Mat mat_inv(const FieldTower& tw, const Mat& x);  // throws Singular
Mat mat_transpose(const Mat& x);
uint8_t mat_det(const FieldTower& tw, const Mat& x);
uint8_t mat_trace(const FieldTower& tw, const Mat& x);
Mat mat_scalar(const FieldTower& tw, int n, uint8_t c);

uint32_t mat_encode(const FieldTower& tw, const Mat& x);
Mat mat_decode(const FieldTower& tw, int n, uint32_t code);

// Monic polynomial over F_q, little-endian level-1 codes including the leading 1.
using PolyFq = std::vector<uint8_t>;
// Conjugacy class data: elementary divisor content, a multiset of
// (monic irreducible != X, partition), canonically sorted.
using ClassLabel = std::vector<std::pair<PolyFq, Partition>>;

bool poly_less(const PolyFq& a, const PolyFq& b);
PolyFq char_poly(const FieldTower& tw, const Mat& g);
std::vector<PolyFq> irreducible_polys(const FieldTower& tw, int degree);
std::vector<std::pair<PolyFq, int>> factor_poly(const FieldTower& tw, const PolyFq& f);

ClassLabel class_label(const FieldTower& tw, const Mat& g);  // throws Singular
std::string class_label_string(const ClassLabel& label);

// psi_n on the upper unitriangular subgroup: the exponent t with value
// zeta_p^t, psi applied to the sum of the superdiagonal entries.
int psi_n_exponent(const FieldTower& tw, const Mat& u);
Cyclotomic psi_n_value(const FieldTower& tw, const Mat& u);

// Multiplication-by-x on k_n viewed as an n-dimensional k-space in the basis
// 1, g_n, ..., g_n^(n-1).
Mat elliptic_embed(const FieldTower& tw, FieldElem x);

// Composition (n_1, ..., n_r) of n with iterators for P, L, U.
struct ParabolicShape {
  std::vector<int> comp;

  int total() const {
    int s = 0;
    for (int c : comp) s += c;
    return s;
  }
  int block_of(int row) const {
    int b = 0, acc = comp[0];
    while (row >= acc) acc += comp[++b];
    return b;
  }
  int block_start(int b) const {
    int s = 0;
    for (int i = 0; i < b; ++i) s += comp[i];
    return s;
  }
};

std::vector<Mat> shape_u_elements(const FieldTower& tw, const ParabolicShape& s);
std::vector<Mat> shape_l_elements(const FieldTower& tw, const ParabolicShape& s);
std::vector<Mat> shape_p_elements(const FieldTower& tw, const ParabolicShape& s);
// Diagonal blocks of p in P(shape); this is the Levi part of p.
std::vector<Mat> levi_blocks(const ParabolicShape& s, const Mat& p);
bool in_parabolic(const ParabolicShape& s, const Mat& p);

// Block antidiagonal permutation matrix with I_{n2} top right, I_{n1} bottom left.
Mat w_hat(int n1, int n2);
// Antidiagonal permutation (longest Weyl element).
Mat w_long(int n);

int64_t gl_order(int64_t q, int n);

// Fully materialized GL_n(F_q): elements, conjugacy classes, class resolver,
// power maps, and the U_n coset structure used by the Gelfand-Graev space.
class GroupContext {
 public:
  static GroupContext build(const FieldTower& tw, int n, int64_t cap = 200000);

  const FieldTower& tower() const { return *tw_; }
  int n() const { return n_; }
  int64_t q() const { return q_; }
  int64_t order() const { return order_; }
  int exponent() const { return exponent_; }

  const std::vector<uint32_t>& elements() const { return elements_; }

  struct ClassInfo {
    ClassLabel label;
    std::string label_str;
    Mat rep;
    int64_t size = 0;
    int64_t centralizer = 0;
    int order = 0;                 // element order
    std::vector<int> power_class;  // class of rep^s, s in [0, order)
    int inverse_class = 0;
    uint8_t trace_code = 0;
  };
  const std::vector<ClassInfo>& classes() const { return classes_; }
  int num_classes() const { return (int)classes_.size(); }
  int identity_class() const { return identity_class_; }

  int class_of_code(uint32_t code) const {
    int32_t c = class_of_[code];
    require(c >= 0, Err::Singular, "class of a singular matrix");
    return c;
  }
  int class_of(const Mat& g) const { return class_of_code(mat_encode(*tw_, g)); }

  // U_n data.
  int64_t u_order() const { return (int64_t)u_elements_.size(); }
  const std::vector<uint32_t>& u_elements() const { return u_elements_; }
  int64_t num_cosets() const { return (int64_t)coset_rep_.size(); }
  const std::vector<uint32_t>& coset_reps() const { return coset_rep_; }
  // g = u * rep(coset); returns (coset index, psi_n exponent of u).
  std::pair<int32_t, int> coset_of_code(uint32_t code) const {
    return {coset_of_[code], coset_psi_[code]};
  }

 private:
  const FieldTower* tw_ = nullptr;
  int n_ = 0;
  int64_t q_ = 0;
  int64_t order_ = 0;
  int exponent_ = 1;
  std::vector<uint32_t> elements_;
  std::vector<int32_t> class_of_;
  std::vector<ClassInfo> classes_;
  int identity_class_ = 0;
  std::vector<uint32_t> u_elements_;
  std::vector<int32_t> coset_of_;
  std::vector<int> coset_psi_;
  std::vector<uint32_t> coset_rep_;
};

}  // namespace mactab
