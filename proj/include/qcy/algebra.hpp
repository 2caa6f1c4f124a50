#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "qcy/matrix.hpp"
#include "qcy/quiver.hpp"

namespace qcy {

enum class Side { Left, Right };

// Sparse element in basis coordinates: sorted (index, coeff), no zeros.
using SparseVec = std::vector<std::pair<int, Scalar>>;

/*
 * Finite-dimensional quotient of a path algebra by the two-sided ideal
 * closure of admissible relations, computed by bounded-length saturation.
 * The basis is the greedy complement of the closure in (length, label-lex)
 * path order, so normal forms and every derived table are deterministic.
 * Multiplication composes right-to-left: in mult(i, j) the path of b_j acts
 * first. Immutable after build.
 */
class BoundQuiverAlgebra {
 public:
  static BoundQuiverAlgebra build(const Quiver& quiver, const std::vector<Relation>& relations,
                                  const Field& field, int length_bound);

  const Quiver& quiver() const { return quiver_; }
  const Field& field() const { return field_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  int loewy_length() const { return loewy_; }
  int length_bound() const { return bound_; }

  const Path& basis_path(int i) const { return basis_[i]; }
  int path_length(int i) const { return basis_[i].length(); }
  std::optional<int> find_basis_index(const Path& p) const;
  // Basis indices of paths with the given source (a basis of A e_v) or
  // target (a basis of e_u A), in basis order.
  std::vector<int> paths_from(int v) const;
  std::vector<int> paths_into(int u) const;
  int idempotent_index(int v) const { return idempotent_index_[v]; }
  const std::vector<int>& idempotent_indices() const { return idempotent_index_; }
  int arrow_index(int a) const { return arrow_index_[a]; }
  std::vector<int> basis_count_by_length() const;

  const SparseVec& mult(int i, int j) const { return mult_[static_cast<size_t>(i) * dim() + j]; }
  SparseVec mul_sparse(const SparseVec& x, const SparseVec& y) const;
  Matrix mul_elements(const Matrix& x, const Matrix& y) const;  // column vectors
  Matrix left_mult_matrix(int i) const;                         // L_{b_i}
  Matrix right_mult_matrix(int i) const;                        // R_{b_i}
  Matrix left_mult_by(const Matrix& x) const;
  Matrix right_mult_by(const Matrix& x) const;

  Matrix one() const;          // column vector of the unit
  Matrix unit(int i) const;    // column vector of b_i
  bool is_invertible(const Matrix& x) const;
  std::optional<Matrix> element_inverse(const Matrix& x) const;

  Subspace radical_power(int m) const;  // span of basis paths of length >= m
  Subspace socle(Side side) const;
  Subspace zero_subspace() const { return Subspace(field_, dim()); }
  Subspace full_subspace() const;

  bool verify_associativity() const;  // all basis triples

  // Normal form of an arbitrary path (arrows in application order); zero
  // when the path dies in the quotient or exceeds the bound.
  Matrix normal_form(const Path& p) const;
  // Element from parsed raw terms; labels resolve to arrows, 'e_<v>' to
  // trivial paths.
  Matrix element_from_terms(const std::vector<RawTerm>& terms) const;

  struct Quotient {
    std::shared_ptr<const BoundQuiverAlgebra> algebra;
    std::vector<int> kept;  // old basis indices that survive
    Matrix projection;      // new_dim x old_dim
  };
  // Quotient by a two-sided ideal inside the radical. The ideal must not
  // meet the span of the idempotents.
  Quotient quotient_by_ideal(const Subspace& ideal) const;

  std::string element_to_string(const Matrix& x) const;

 private:
  BoundQuiverAlgebra(Quiver q, Field f) : quiver_(std::move(q)), field_(f) {}
  void finalize();  // builds indexes and verifies structure

  Quiver quiver_;
  Field field_;
  int bound_ = 0;
  int loewy_ = 0;
  std::vector<Path> basis_;
  std::vector<SparseVec> mult_;  // dim*dim table
  std::vector<int> idempotent_index_;
  std::vector<int> arrow_index_;
  std::map<std::pair<int, std::vector<int>>, int> path_ids_;  // (src, arrows) -> enumerated id
  std::vector<SparseVec> path_nf_;                            // per enumerated path id
  int num_paths_ = 0;
};

using AlgebraPtr = std::shared_ptr<const BoundQuiverAlgebra>;

/*
 * Linear functional on the basis, extended linearly. Frobenius when the
 * Gram matrix (i,j) -> eps(b_i b_j) is invertible.
 */
struct FrobeniusForm {
  Matrix values;  // 1 x dim
};

Matrix gram_matrix(const BoundQuiverAlgebra& a, const FrobeniusForm& eps);
// Returns the Gram matrix; throws DegenerateFormError when singular.
Matrix verify_frobenius(const BoundQuiverAlgebra& a, const FrobeniusForm& eps);
bool is_symmetric_form(const BoundQuiverAlgebra& a, const FrobeniusForm& eps);

// Fallback search for some nondegenerate form: deterministic candidates
// first, then seeded random functionals. nullopt if none found.
std::optional<FrobeniusForm> find_frobenius_form(const BoundQuiverAlgebra& a, uint64_t seed,
                                                 int attempts = 200);

}  // namespace qcy
