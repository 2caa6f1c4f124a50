#include "qcy/matrix.hpp"

#include <algorithm>
#include <cassert>

namespace qcy {

namespace {

struct FpOps {
  long long p;
  using T = long long;
  T zero() const { return 0; }
  T one() const { return 1; }
  bool is_zero(const T& a) const { return a == 0; }
  T add(const T& a, const T& b) const { return (a + b) % p; }
  T sub(const T& a, const T& b) const {
    long long r = (a - b) % p;
    return r < 0 ? r + p : r;
  }
  T mul(const T& a, const T& b) const { return a * b % p; }
  T neg(const T& a) const { return a == 0 ? 0 : p - a; }
  T inv(const T& a) const {
    long long t = 0, nt = 1, r = p, nr = a;
    while (nr != 0) {
      long long q = r / nr;
      long long tmp = t - q * nt;
      t = nt;
      nt = tmp;
      tmp = r - q * nr;
      r = nr;
      nr = tmp;
    }
    if (r != 1) throw FieldError("not invertible");
    return t < 0 ? t + p : t;
  }
};

struct RatOps {
  using T = mpq_class;
  T zero() const { return mpq_class(0); }
  T one() const { return mpq_class(1); }
  bool is_zero(const T& a) const { return a == 0; }
  T add(const T& a, const T& b) const { return a + b; }
  T sub(const T& a, const T& b) const { return a - b; }
  T mul(const T& a, const T& b) const { return a * b; }
  T neg(const T& a) const { return -a; }
  T inv(const T& a) const {
    if (a == 0) throw FieldError("not invertible");
    return 1 / a;
  }
};

template <class Ops>
std::vector<int> rref_core(const Ops& op, std::vector<typename Ops::T>& a, int rows, int cols) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int sel = -1;
    for (int i = r; i < rows; ++i) {
      if (!op.is_zero(a[static_cast<size_t>(i) * cols + c])) {
        sel = i;
        break;
      }
    }
    if (sel < 0) continue;
    if (sel != r) {
      for (int j = c; j < cols; ++j)
        std::swap(a[static_cast<size_t>(r) * cols + j], a[static_cast<size_t>(sel) * cols + j]);
    }
    auto pinv = op.inv(a[static_cast<size_t>(r) * cols + c]);
    for (int j = c; j < cols; ++j) {
      auto& x = a[static_cast<size_t>(r) * cols + j];
      x = op.mul(x, pinv);
    }
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      auto f = a[static_cast<size_t>(i) * cols + c];
      if (op.is_zero(f)) continue;
      for (int j = c; j < cols; ++j) {
        auto& x = a[static_cast<size_t>(i) * cols + j];
        x = op.sub(x, op.mul(f, a[static_cast<size_t>(r) * cols + j]));
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class Ops>
void mul_core(const Ops& op, const std::vector<typename Ops::T>& a,
              const std::vector<typename Ops::T>& b, std::vector<typename Ops::T>& out, int n,
              int m, int k) {
  // out (n x k) = a (n x m) * b (m x k), ikj order
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const auto& f = a[static_cast<size_t>(i) * m + j];
      if (op.is_zero(f)) continue;
      const size_t brow = static_cast<size_t>(j) * k;
      const size_t orow = static_cast<size_t>(i) * k;
      for (int t = 0; t < k; ++t) out[orow + t] = op.add(out[orow + t], op.mul(f, b[brow + t]));
    }
  }
}

}  // namespace

Matrix::Matrix(Field f, int rows, int cols) : field_(f), rows_(rows), cols_(cols) {
  const size_t n = static_cast<size_t>(rows) * cols;
  if (field_.is_rationals())
    rat_.assign(n, mpq_class(0));
  else
    fp_.assign(n, 0);
}

Matrix Matrix::identity(const Field& f, int n) {
  Matrix m(f, n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, f.one());
  return m;
}

Matrix Matrix::from_int_rows(const Field& f, const std::vector<std::vector<long long>>& rows) {
  int r = static_cast<int>(rows.size());
  int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
  Matrix m(f, r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c) throw FieldError("ragged row list");
    for (int j = 0; j < c; ++j) m.set_int(i, j, rows[i][j]);
  }
  return m;
}

Scalar Matrix::get(int i, int j) const {
  const size_t k = static_cast<size_t>(i) * cols_ + j;
  return field_.is_rationals() ? Scalar(rat_[k]) : Scalar(fp_[k]);
}

void Matrix::set(int i, int j, const Scalar& v) {
  const size_t k = static_cast<size_t>(i) * cols_ + j;
  if (field_.is_rationals())
    rat_[k] = v.rational();
  else
    fp_[k] = v.residue();
}

void Matrix::set_int(int i, int j, long long v) { set(i, j, field_.from_int(v)); }

void Matrix::add_to(int i, int j, const Scalar& v) { set(i, j, field_.add(get(i, j), v)); }

Matrix Matrix::mul(const Matrix& o) const {
  if (cols_ != o.rows_ || field_ != o.field_) throw FieldError("shape mismatch in mul");
  Matrix out(field_, rows_, o.cols_);
  if (field_.is_rationals())
    mul_core(RatOps{}, rat_, o.rat_, out.rat_, rows_, cols_, o.cols_);
  else
    mul_core(FpOps{field_.characteristic()}, fp_, o.fp_, out.fp_, rows_, cols_, o.cols_);
  return out;
}

Matrix Matrix::add(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_ || field_ != o.field_)
    throw FieldError("shape mismatch in add");
  Matrix out = *this;
  if (field_.is_rationals()) {
    for (size_t k = 0; k < rat_.size(); ++k) out.rat_[k] += o.rat_[k];
  } else {
    const long long p = field_.characteristic();
    for (size_t k = 0; k < fp_.size(); ++k) out.fp_[k] = (fp_[k] + o.fp_[k]) % p;
  }
  return out;
}

Matrix Matrix::sub(const Matrix& o) const { return add(o.neg()); }

Matrix Matrix::neg() const {
  Matrix out = *this;
  if (field_.is_rationals()) {
    for (auto& x : out.rat_) x = -x;
  } else {
    const long long p = field_.characteristic();
    for (auto& x : out.fp_) x = x == 0 ? 0 : p - x;
  }
  return out;
}

Matrix Matrix::scale(const Scalar& c) const {
  Matrix out = *this;
  if (field_.is_rationals()) {
    for (auto& x : out.rat_) x *= c.rational();
  } else {
    const long long p = field_.characteristic();
    for (auto& x : out.fp_) x = x * c.residue() % p;
  }
  return out;
}

Matrix Matrix::transpose() const {
  Matrix out(field_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.set(j, i, get(i, j));
  return out;
}

bool Matrix::equals(const Matrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && field_ == o.field_ && fp_ == o.fp_ &&
         rat_ == o.rat_;
}

bool Matrix::is_zero() const {
  if (field_.is_rationals())
    return std::all_of(rat_.begin(), rat_.end(), [](const mpq_class& x) { return x == 0; });
  return std::all_of(fp_.begin(), fp_.end(), [](long long x) { return x == 0; });
}

bool Matrix::is_identity() const {
  return rows_ == cols_ && equals(identity(field_, rows_));
}

Matrix Matrix::hstack(const Matrix& o) const {
  if (rows_ != o.rows_ || field_ != o.field_) throw FieldError("shape mismatch in hstack");
  Matrix out(field_, rows_, cols_ + o.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) out.set(i, j, get(i, j));
    for (int j = 0; j < o.cols_; ++j) out.set(i, cols_ + j, o.get(i, j));
  }
  return out;
}

Matrix Matrix::vstack(const Matrix& o) const {
  if (cols_ != o.cols_ || field_ != o.field_) throw FieldError("shape mismatch in vstack");
  Matrix out(field_, rows_ + o.rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.set(i, j, get(i, j));
  for (int i = 0; i < o.rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.set(rows_ + i, j, o.get(i, j));
  return out;
}

Matrix Matrix::select_columns(const std::vector<int>& idx) const {
  Matrix out(field_, rows_, static_cast<int>(idx.size()));
  for (int i = 0; i < rows_; ++i)
    for (size_t j = 0; j < idx.size(); ++j) out.set(i, static_cast<int>(j), get(i, idx[j]));
  return out;
}

Matrix Matrix::select_rows(const std::vector<int>& idx) const {
  Matrix out(field_, static_cast<int>(idx.size()), cols_);
  for (size_t i = 0; i < idx.size(); ++i)
    for (int j = 0; j < cols_; ++j) out.set(static_cast<int>(i), j, get(idx[i], j));
  return out;
}

Matrix Matrix::column(int j) const { return select_columns({j}); }
Matrix Matrix::row(int i) const { return select_rows({i}); }

MatrixRref Matrix::rref() const {
  Matrix red = *this;
  std::vector<int> piv;
  if (field_.is_rationals())
    piv = rref_core(RatOps{}, red.rat_, rows_, cols_);
  else
    piv = rref_core(FpOps{field_.characteristic()}, red.fp_, rows_, cols_);
  return MatrixRref{std::move(red), std::move(piv)};
}

int Matrix::rank() const { return static_cast<int>(rref().pivots.size()); }

Matrix Matrix::kernel() const { return kernel_with_free().basis; }

KernelBasis Matrix::kernel_with_free() const {
  MatrixRref r = rref();
  std::vector<int> free;
  {
    std::vector<char> isp(cols_, 0);
    for (int c : r.pivots) isp[c] = 1;
    for (int c = 0; c < cols_; ++c)
      if (!isp[c]) free.push_back(c);
  }
  Matrix out(field_, cols_, static_cast<int>(free.size()));
  for (size_t t = 0; t < free.size(); ++t) {
    out.set(free[t], static_cast<int>(t), field_.one());
    for (size_t k = 0; k < r.pivots.size(); ++k) {
      Scalar v = r.reduced.get(static_cast<int>(k), free[t]);
      if (!field_.is_zero(v)) out.set(r.pivots[k], static_cast<int>(t), field_.neg(v));
    }
  }
  return KernelBasis{std::move(out), std::move(free)};
}

std::optional<Matrix> Matrix::solve(const Matrix& b) const {
  if (b.rows_ != rows_ || b.field_ != field_) throw FieldError("shape mismatch in solve");
  Matrix aug = hstack(b);
  MatrixRref r = aug.rref();
  for (int c : r.pivots)
    if (c >= cols_) return std::nullopt;  // inconsistent for some right-hand side
  Matrix x(field_, cols_, b.cols_);
  for (size_t k = 0; k < r.pivots.size(); ++k)
    for (int t = 0; t < b.cols_; ++t)
      x.set(r.pivots[k], t, r.reduced.get(static_cast<int>(k), cols_ + t));
  return x;
}

std::optional<Matrix> Matrix::inverse() const {
  if (rows_ != cols_) return std::nullopt;
  auto x = solve(identity(field_, rows_));
  if (!x) return std::nullopt;
  if (!mul(*x).is_identity()) return std::nullopt;  // rank deficient
  return x;
}

std::optional<AffineSolution> solve_affine(const Matrix& m, const Matrix& b) {
  auto x = m.solve(b);
  if (!x) return std::nullopt;
  return AffineSolution{*x, m.kernel()};
}

// ---------------------------------------------------------------------------
// Subspace

namespace {

template <class Ops>
struct EchelonOps {
  using T = typename Ops::T;

  // Reduce v (length n) by the echelon rows; v is modified in place.
  static void reduce(const Ops& op, const std::vector<T>& rows, const std::vector<int>& pivots,
                     int n, std::vector<T>& v) {
    for (size_t k = 0; k < pivots.size(); ++k) {
      const T& f = v[pivots[k]];
      if (op.is_zero(f)) continue;
      const size_t off = k * n;
      T fc = f;  // v[pivots[k]] changes below
      for (int j = pivots[k]; j < n; ++j) v[j] = op.sub(v[j], op.mul(fc, rows[off + j]));
    }
  }

  // Insert v assuming it is already reduced. Returns pivot column or -1.
  static int insert_reduced(const Ops& op, std::vector<T>& rows, std::vector<int>& pivots, int n,
                            std::vector<T> v) {
    int c = -1;
    for (int j = 0; j < n; ++j) {
      if (!op.is_zero(v[j])) {
        c = j;
        break;
      }
    }
    if (c < 0) return -1;
    T pinv = op.inv(v[c]);
    for (int j = c; j < n; ++j) v[j] = op.mul(v[j], pinv);
    // eliminate the new pivot column from existing rows
    for (size_t k = 0; k < pivots.size(); ++k) {
      const size_t off = k * n;
      const T f = rows[off + c];
      if (op.is_zero(f)) continue;
      for (int j = c; j < n; ++j) rows[off + j] = op.sub(rows[off + j], op.mul(f, v[j]));
    }
    const size_t pos = std::lower_bound(pivots.begin(), pivots.end(), c) - pivots.begin();
    pivots.insert(pivots.begin() + pos, c);
    rows.insert(rows.begin() + pos * n, v.begin(), v.end());
    return c;
  }
};

}  // namespace

Subspace::Subspace(Field f, int ambient) : field_(f), ambient_(ambient) {}

bool Subspace::insert(const Matrix& v) {
  if (v.rows() != 1 || v.cols() != ambient_ || v.field() != field_)
    throw FieldError("subspace insert shape mismatch");
  if (field_.is_rationals()) {
    std::vector<mpq_class> row(ambient_);
    for (int j = 0; j < ambient_; ++j) row[j] = v.get(0, j).rational();
    RatOps op;
    EchelonOps<RatOps>::reduce(op, rat_, pivots_, ambient_, row);
    return EchelonOps<RatOps>::insert_reduced(op, rat_, pivots_, ambient_, std::move(row)) >= 0;
  }
  std::vector<long long> row(ambient_);
  for (int j = 0; j < ambient_; ++j) row[j] = v.get(0, j).residue();
  FpOps op{field_.characteristic()};
  EchelonOps<FpOps>::reduce(op, fp_, pivots_, ambient_, row);
  return EchelonOps<FpOps>::insert_reduced(op, fp_, pivots_, ambient_, std::move(row)) >= 0;
}

void Subspace::insert_rows(const Matrix& m) {
  for (int i = 0; i < m.rows(); ++i) insert(m.row(i));
}

void Subspace::insert_cols(const Matrix& m) {
  for (int j = 0; j < m.cols(); ++j) insert(m.column(j).transpose());
}

Matrix Subspace::reduce(const Matrix& v) const {
  if (v.rows() != 1 || v.cols() != ambient_ || v.field() != field_)
    throw FieldError("subspace reduce shape mismatch");
  Matrix out = v;
  if (field_.is_rationals()) {
    std::vector<mpq_class> row(ambient_);
    for (int j = 0; j < ambient_; ++j) row[j] = v.get(0, j).rational();
    EchelonOps<RatOps>::reduce(RatOps{}, rat_, pivots_, ambient_, row);
    for (int j = 0; j < ambient_; ++j) out.set(0, j, Scalar(row[j]));
  } else {
    std::vector<long long> row(ambient_);
    for (int j = 0; j < ambient_; ++j) row[j] = v.get(0, j).residue();
    EchelonOps<FpOps>::reduce(FpOps{field_.characteristic()}, fp_, pivots_, ambient_, row);
    for (int j = 0; j < ambient_; ++j) out.set(0, j, Scalar(row[j]));
  }
  return out;
}

bool Subspace::contains(const Matrix& v) const { return reduce(v).is_zero(); }

std::vector<int> Subspace::free_indices() const {
  std::vector<char> isp(ambient_, 0);
  for (int c : pivots_) isp[c] = 1;
  std::vector<int> out;
  for (int c = 0; c < ambient_; ++c)
    if (!isp[c]) out.push_back(c);
  return out;
}

Matrix Subspace::basis() const {
  Matrix out(field_, dim(), ambient_);
  for (int k = 0; k < dim(); ++k) {
    const size_t off = static_cast<size_t>(k) * ambient_;
    for (int j = 0; j < ambient_; ++j) {
      if (field_.is_rationals())
        out.set(k, j, Scalar(rat_[off + j]));
      else
        out.set(k, j, Scalar(fp_[off + j]));
    }
  }
  return out;
}

bool Subspace::contains_subspace(const Subspace& o) const {
  if (o.ambient() != ambient_) throw FieldError("ambient mismatch");
  Matrix b = o.basis();
  for (int i = 0; i < b.rows(); ++i)
    if (!contains(b.row(i))) return false;
  return true;
}

bool Subspace::same_space(const Subspace& o) const {
  // rref bases are canonical
  return pivots_ == o.pivots_ && fp_ == o.fp_ && rat_ == o.rat_;
}

Subspace Subspace::sum(const Subspace& a, const Subspace& b) {
  Subspace out = a;
  out.insert_rows(b.basis());
  return out;
}

Matrix Subspace::quotient_coords(const Matrix& v) const {
  Matrix res = reduce(v);
  std::vector<int> free = free_indices();
  Matrix out(field_, 1, static_cast<int>(free.size()));
  for (size_t t = 0; t < free.size(); ++t) out.set(0, static_cast<int>(t), res.get(0, free[t]));
  return out;
}

}  // namespace qcy
