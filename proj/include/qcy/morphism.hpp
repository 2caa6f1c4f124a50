#pragma once

#include <cstdint>
#include <map>

#include "qcy/algebra.hpp"

namespace qcy {

/*
 * Linear map on the algebra basis certified at construction to be a unital
 * algebra homomorphism (and an automorphism unless explicitly relaxed).
 * Columns of the matrix are images of basis elements.
 */
class AlgebraMorphism {
 public:
  AlgebraMorphism(AlgebraPtr a, Matrix m, bool require_automorphism = true);
  static AlgebraMorphism identity(AlgebraPtr a);
  // Images indexed by quiver ids; missing vertex images default to e_v.
  static AlgebraMorphism from_generator_images(AlgebraPtr a,
                                               const std::map<int, Matrix>& arrow_images,
                                               const std::map<int, Matrix>& vertex_images = {},
                                               bool require_automorphism = true);

  const Matrix& matrix() const { return matrix_; }
  AlgebraPtr algebra() const { return algebra_; }
  bool is_automorphism() const { return automorphism_; }
  bool is_identity() const { return matrix_.is_identity(); }

  Matrix apply(const Matrix& x) const { return matrix_.mul(x); }
  AlgebraMorphism compose(const AlgebraMorphism& g) const;  // (this o g)(x) = this(g(x))
  AlgebraMorphism inverse() const;
  AlgebraMorphism power(int k) const;  // k >= 0
  bool equals(const AlgebraMorphism& g) const { return matrix_.equals(g.matrix_); }

  // Present when every idempotent maps to an idempotent.
  std::optional<std::vector<int>> vertex_permutation() const;

 private:
  AlgebraPtr algebra_;
  Matrix matrix_;
  bool automorphism_;
};

// Nakayama automorphism for a verified Frobenius form:
// eps(a b) = eps(b nu(a)) for all basis pairs.
AlgebraMorphism nakayama_automorphism(const AlgebraPtr& a, const FrobeniusForm& eps);

struct InnerResult {
  enum class Status { Witness, NotInner, Inconclusive } status;
  std::optional<Matrix> witness;  // invertible a with phi(x) = a^{-1} x a
  std::string detail;
};

/*
 * Decides conjugacy by solving a*phi(b_i) = b_i*a exactly and searching the
 * solution space for a unit through its projection to A/rad (a product of
 * one-dimensional blocks for a bound quiver algebra). Exhaustive over the
 * projected space when small; the verdict is then decisive.
 */
InnerResult is_inner(const AlgebraMorphism& phi, uint64_t seed = 1);

enum class CertificateStatus {
  ConfirmedInner,
  ConfirmedInnerModuloSocle,
  ConfirmedByTruncatedPolyCriterion,
  RefutedByLoopTest,
  RefutedByTruncatedPolyCriterion,
  Inconclusive,
};

std::string to_string(CertificateStatus s);

struct StablyInnerVerdict {
  CertificateStatus status = CertificateStatus::Inconclusive;
  std::optional<Matrix> witness;  // inner witness, in the coordinates named by detail
  std::string detail;
  bool confirmed() const {
    return status == CertificateStatus::ConfirmedInner ||
           status == CertificateStatus::ConfirmedInnerModuloSocle ||
           status == CertificateStatus::ConfirmedByTruncatedPolyCriterion;
  }
  bool refuted() const {
    return status == CertificateStatus::RefutedByLoopTest ||
           status == CertificateStatus::RefutedByTruncatedPolyCriterion;
  }
};

// Sufficient condition: phi induces an inner automorphism of A/soc(A).
StablyInnerVerdict is_inner_modulo_socle(const AlgebraMorphism& phi, uint64_t seed = 1);

struct LoopTestResult {
  enum class Status { Pass, Refuted, Skipped } status;
  std::vector<Scalar> vertex_scalars;  // d_v on Pass
  std::string detail;
};

/*
 * Necessary condition when soc^2(A A) lies inside rad^2(A): the arrow
 * coefficients of phi modulo rad^2 must be of the form d_t/d_s, so every
 * cycle product is 1 and loops carry coefficient exactly 1.
 */
LoopTestResult loop_coefficient_test(const AlgebraMorphism& phi);

// Decisive criterion on k[t]/t^n: stably inner iff identity on k[t]/t^s,
// s = ceil(n/2). Throws NotTruncatedPolyError on other algebras.
StablyInnerVerdict stably_inner_truncated_poly(const AlgebraMorphism& phi);

// Certificate ladder: truncated-poly criterion when applicable (decisive),
// then is_inner, inner-modulo-socle, loop test; strongest verdict wins and
// Inconclusive is an honest outcome.
StablyInnerVerdict stably_inner_certificate(const AlgebraMorphism& phi, uint64_t seed = 1);

/*
 * Right ideal given by generators; the span is the exact column space of
 * the left multiplication maps, so closure under right multiplication
 * holds by construction and is re-checkable.
 */
class RightIdeal {
 public:
  RightIdeal(AlgebraPtr a, const std::vector<Matrix>& generators);
  static RightIdeal zero(AlgebraPtr a) { return RightIdeal(a, {}); }
  const Subspace& span() const { return span_; }
  AlgebraPtr algebra() const { return algebra_; }
  bool verify_right_closed() const;

 private:
  AlgebraPtr algebra_;
  Subspace span_;
};

// (0:I) = {a in A : a I = 0}
Subspace left_annihilator(const BoundQuiverAlgebra& a, const RightIdeal& i);
// (J:I) = {a in A : a I <= J}
Subspace transporter(const BoundQuiverAlgebra& a, const RightIdeal& j, const RightIdeal& i);

struct StableHom {
  int dim;
  std::vector<Matrix> representatives;  // elements c; the classes (c . )
};

// Stable homs of cyclic modules: Hom_(A/I, A/J) modulo maps through
// projectives = (J:I) / ((0:I) + J).
StableHom stable_hom_cyclic(const AlgebraPtr& a, const RightIdeal& i, const RightIdeal& j);

}  // namespace qcy
