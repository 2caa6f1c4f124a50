#pragma once

#include <optional>
#include <vector>

#include "qcy/field.hpp"

namespace qcy {

struct MatrixRref;
struct KernelBasis;

/*
 * Dense matrix over an exact field. Entries live in one of two backends
 * (machine residues for F_p, GMP rationals for Q) selected by the field;
 * all algorithms are exact. Immutable use is the norm: operations return
 * fresh matrices.
 */
class Matrix {
 public:
  Matrix(Field f, int rows, int cols);  // zero matrix
  static Matrix identity(const Field& f, int n);
  static Matrix from_int_rows(const Field& f, const std::vector<std::vector<long long>>& rows);

  const Field& field() const { return field_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Scalar get(int i, int j) const;
  void set(int i, int j, const Scalar& v);
  void set_int(int i, int j, long long v);
  void add_to(int i, int j, const Scalar& v);

  Matrix mul(const Matrix& o) const;
  Matrix add(const Matrix& o) const;
  Matrix sub(const Matrix& o) const;
  Matrix neg() const;
  Matrix scale(const Scalar& c) const;
  Matrix transpose() const;

  bool equals(const Matrix& o) const;
  bool is_zero() const;
  bool is_identity() const;

  Matrix hstack(const Matrix& o) const;
  Matrix vstack(const Matrix& o) const;
  Matrix select_columns(const std::vector<int>& idx) const;
  Matrix select_rows(const std::vector<int>& idx) const;
  Matrix column(int j) const;
  Matrix row(int i) const;

  MatrixRref rref() const;
  int rank() const;
  int nullity() const { return cols_ - rank(); }
  // Columns form a nullspace basis; restricted to the free coordinates the
  // basis is the identity, so coordinates in the kernel can be read off.
  Matrix kernel() const;
  KernelBasis kernel_with_free() const;
  // Particular solution X with this*X == b (per column), or nullopt.
  std::optional<Matrix> solve(const Matrix& b) const;
  std::optional<Matrix> inverse() const;

  bool operator==(const Matrix& o) const { return equals(o); }

 private:
  friend class Subspace;
  Field field_;
  int rows_, cols_;
  std::vector<long long> fp_;
  std::vector<mpq_class> rat_;
};

struct MatrixRref {
  Matrix reduced;
  std::vector<int> pivots;  // pivot columns in row order
};

struct KernelBasis {
  Matrix basis;
  std::vector<int> free;  // coordinate rows where the basis is the identity
};

// Affine solution set of m*x = b: one particular solution plus a kernel basis.
struct AffineSolution {
  Matrix particular;  // cols(m) x 1
  Matrix kernel;      // cols(m) x nullity(m)
};
std::optional<AffineSolution> solve_affine(const Matrix& m, const Matrix& b);

/*
 * Row space kept in reduced echelon form with sorted pivots. Insertion is
 * incremental; the non-pivot coordinates give the deterministic greedy
 * complement used for normal forms and quotient bases.
 */
class Subspace {
 public:
  Subspace(Field f, int ambient);

  bool insert(const Matrix& v);  // 1 x ambient row; returns true if dim grew
  void insert_rows(const Matrix& m);
  void insert_cols(const Matrix& m);

  bool contains(const Matrix& v) const;
  Matrix reduce(const Matrix& v) const;  // residue of v modulo the subspace

  int dim() const { return static_cast<int>(pivots_.size()); }
  int ambient() const { return ambient_; }
  const Field& field() const { return field_; }
  const std::vector<int>& pivots() const { return pivots_; }
  std::vector<int> free_indices() const;

  Matrix basis() const;  // dim x ambient, rref rows
  bool contains_subspace(const Subspace& o) const;
  bool same_space(const Subspace& o) const;
  static Subspace sum(const Subspace& a, const Subspace& b);

  // Residue coordinates at the free indices: the image of v in the quotient
  // by this subspace w.r.t. the complement basis.
  Matrix quotient_coords(const Matrix& v) const;

 private:
  Field field_;
  int ambient_;
  std::vector<int> pivots_;  // sorted ascending; row k has pivot pivots_[k]
  std::vector<long long> fp_;
  std::vector<mpq_class> rat_;
};

}  // namespace qcy
