#include "qcy/algebra.hpp"

#include <algorithm>
#include <deque>

namespace qcy {

namespace {

constexpr size_t kPathCap = 2000000;  // guards runaway enumeration

void sv_add_into(const Field& f, SparseVec& acc, const SparseVec& x, const Scalar& c) {
  if (f.is_zero(c)) return;
  SparseVec out;
  out.reserve(acc.size() + x.size());
  size_t i = 0, j = 0;
  while (i < acc.size() || j < x.size()) {
    if (j == x.size() || (i < acc.size() && acc[i].first < x[j].first)) {
      out.push_back(acc[i++]);
    } else if (i == acc.size() || x[j].first < acc[i].first) {
      out.emplace_back(x[j].first, f.mul(x[j].second, c));
      ++j;
    } else {
      Scalar s = f.add(acc[i].second, f.mul(x[j].second, c));
      if (!f.is_zero(s)) out.emplace_back(acc[i].first, s);
      ++i;
      ++j;
    }
  }
  acc = std::move(out);
}

}  // namespace

BoundQuiverAlgebra BoundQuiverAlgebra::build(const Quiver& quiver,
                                             const std::vector<Relation>& relations,
                                             const Field& field, int length_bound) {
  if (length_bound < 2) throw BadParametersError("length_bound must be >= 2");
  for (const Relation& r : relations) {
    if (r.terms.empty()) throw NotAdmissibleError("relation with no terms");
    const Path& p0 = r.terms.front().path;
    int maxlen = 0;
    for (const RelationTerm& t : r.terms) {
      if (t.path.length() < 2)
        throw NotAdmissibleError("relation term of length < 2: not admissible");
      if (t.path.source != p0.source || t.path.target != p0.target)
        throw NotAdmissibleError("relation terms are not parallel");
      maxlen = std::max(maxlen, t.path.length());
    }
    if (maxlen > length_bound)
      throw BoundTooSmallError("relation term longer than the bound", maxlen + 2);
  }

  BoundQuiverAlgebra A(quiver, field);
  A.bound_ = length_bound;

  // Enumerate every path of length <= bound, sorted by (length, labels, src).
  std::vector<Path> paths;
  for (int v = 0; v < quiver.num_vertices(); ++v) paths.push_back(Path::trivial(v));
  {
    std::vector<std::vector<int>> out_arrows(quiver.num_vertices());
    for (int a = 0; a < quiver.num_arrows(); ++a) out_arrows[quiver.arrow(a).src].push_back(a);
    size_t level_begin = 0;
    for (int len = 1; len <= length_bound; ++len) {
      size_t level_end = paths.size();
      for (size_t k = level_begin; k < level_end; ++k) {
        for (int a : out_arrows[paths[k].target]) {
          Path ext = paths[k];
          ext.arrows.push_back(a);
          ext.target = quiver.arrow(a).tgt;
          paths.push_back(std::move(ext));
          if (paths.size() > kPathCap) throw ResourceLimitError("path enumeration cap exceeded");
        }
      }
      level_begin = level_end;
    }
  }
  std::sort(paths.begin(), paths.end(),
            [&](const Path& a, const Path& b) { return path_less(quiver, a, b); });
  const int n_paths = static_cast<int>(paths.size());
  A.num_paths_ = n_paths;
  for (int i = 0; i < n_paths; ++i)
    A.path_ids_[{paths[i].source, paths[i].arrows}] = i;

  auto pid = [&](const Path& p) -> int {
    auto it = A.path_ids_.find({p.source, p.arrows});
    return it == A.path_ids_.end() ? -1 : it->second;
  };

  // Two-sided ideal closure by saturation with arrows on both sides;
  // products that leave the bounded window are dropped (they die against
  // the "every path of full length lies in the closure" certificate).
  Subspace closure(field, n_paths);
  std::deque<Matrix> work;
  for (const Relation& r : relations) {
    Matrix v(field, 1, n_paths);
    for (const RelationTerm& t : r.terms) {
      int id = pid(t.path);
      if (id < 0) throw BadParametersError("relation path uses arrows outside the quiver");
      v.add_to(0, id, t.coeff);
    }
    work.push_back(std::move(v));
  }
  while (!work.empty()) {
    Matrix v = std::move(work.front());
    work.pop_front();
    Matrix reduced = closure.reduce(v);
    if (!closure.insert(reduced)) continue;
    for (int a = 0; a < quiver.num_arrows(); ++a) {
      Matrix left(field, 1, n_paths);   // arrow * x : extend at the target
      Matrix right(field, 1, n_paths);  // x * arrow : extend at the source
      bool any_l = false, any_r = false;
      for (int id = 0; id < n_paths; ++id) {
        Scalar c = reduced.get(0, id);
        if (field.is_zero(c)) continue;
        const Path& p = paths[id];
        if (p.length() + 1 <= length_bound) {
          if (p.target == quiver.arrow(a).src) {
            Path ext = p;
            ext.arrows.push_back(a);
            ext.target = quiver.arrow(a).tgt;
            left.add_to(0, pid(ext), c);
            any_l = true;
          }
          if (quiver.arrow(a).tgt == p.source) {
            Path ext;
            ext.source = quiver.arrow(a).src;
            ext.target = p.target;
            ext.arrows.push_back(a);
            ext.arrows.insert(ext.arrows.end(), p.arrows.begin(), p.arrows.end());
            right.add_to(0, pid(ext), c);
            any_r = true;
          }
        }
      }
      if (any_l) work.push_back(std::move(left));
      if (any_r) work.push_back(std::move(right));
    }
  }

  // Certificate that the quotient is an algebra with rad^bound = 0.
  for (int id = 0; id < n_paths; ++id) {
    if (paths[id].length() != length_bound) continue;
    Matrix v(field, 1, n_paths);
    v.set(0, id, field.one());
    if (!closure.contains(v))
      throw BoundTooSmallError(
          "path of maximal length survives the closure: " + path_to_string(quiver, paths[id]),
          2 * length_bound);
  }

  // Greedy complement in path order.
  std::vector<int> free = closure.free_indices();
  std::vector<int> basis_of_path(n_paths, -1);
  for (size_t k = 0; k < free.size(); ++k) {
    A.basis_.push_back(paths[free[k]]);
    basis_of_path[free[k]] = static_cast<int>(k);
  }
  const int dim = A.dim();

  // Normal forms of every enumerated path.
  A.path_nf_.assign(n_paths, SparseVec{});
  for (int id = 0; id < n_paths; ++id) {
    if (basis_of_path[id] >= 0) {
      A.path_nf_[id] = {{basis_of_path[id], field.one()}};
      continue;
    }
    Matrix v(field, 1, n_paths);
    v.set(0, id, field.one());
    Matrix res = closure.reduce(v);  // residue, supported on free columns
    SparseVec nf;
    for (size_t k = 0; k < free.size(); ++k) {
      Scalar c = res.get(0, free[k]);
      if (!field.is_zero(c)) nf.emplace_back(static_cast<int>(k), c);
    }
    A.path_nf_[id] = std::move(nf);
  }

  // Multiplication table b_i * b_j (the path of b_j acts first).
  A.mult_.assign(static_cast<size_t>(dim) * dim, SparseVec{});
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      auto prod = path_product(quiver, A.basis_[i], A.basis_[j]);
      if (!prod) continue;
      if (prod->length() > length_bound) continue;  // inside rad^bound = 0
      A.mult_[static_cast<size_t>(i) * dim + j] = A.path_nf_[pid(*prod)];
    }
  }

  A.finalize();
  return A;
}

void BoundQuiverAlgebra::finalize() {
  const int dim = this->dim();
  idempotent_index_.assign(quiver_.num_vertices(), -1);
  arrow_index_.assign(quiver_.num_arrows(), -1);
  loewy_ = 0;
  for (int i = 0; i < dim; ++i) {
    const Path& p = basis_[i];
    loewy_ = std::max(loewy_, p.length() + 1);
    if (p.length() == 0) idempotent_index_[p.source] = i;
    if (p.length() == 1) arrow_index_[p.arrows[0]] = i;
  }
  for (int v = 0; v < quiver_.num_vertices(); ++v)
    if (idempotent_index_[v] < 0)
      throw InconsistencyError("trivial path died in the quotient (ideal not admissible)");
  // arrows may die when quotienting by ideals outside rad^2 (e.g. by the
  // socle of a radical-square-zero algebra); arrow_index_ stays -1 then
  if (!verify_associativity())
    throw InconsistencyError("multiplication table is not associative");
  // e_v e_w = delta e_v and sum e_v = 1 hold structurally for path bases;
  // spot-check the idempotent block anyway.
  for (int v = 0; v < quiver_.num_vertices(); ++v) {
    for (int w = 0; w < quiver_.num_vertices(); ++w) {
      const SparseVec& pr = mult(idempotent_index_[v], idempotent_index_[w]);
      if (v == w) {
        if (pr.size() != 1 || pr[0].first != idempotent_index_[v] || !field_.is_one(pr[0].second))
          throw InconsistencyError("idempotent structure broken");
      } else if (!pr.empty()) {
        throw InconsistencyError("idempotents not orthogonal");
      }
    }
  }
}

std::optional<int> BoundQuiverAlgebra::find_basis_index(const Path& p) const {
  for (int i = 0; i < dim(); ++i)
    if (basis_[i] == p) return i;
  return std::nullopt;
}

std::vector<int> BoundQuiverAlgebra::paths_from(int v) const {
  std::vector<int> out;
  for (int i = 0; i < dim(); ++i)
    if (basis_[i].source == v) out.push_back(i);
  return out;
}

std::vector<int> BoundQuiverAlgebra::paths_into(int u) const {
  std::vector<int> out;
  for (int i = 0; i < dim(); ++i)
    if (basis_[i].target == u) out.push_back(i);
  return out;
}

std::vector<int> BoundQuiverAlgebra::basis_count_by_length() const {
  std::vector<int> out(loewy_, 0);
  for (const Path& p : basis_) ++out[p.length()];
  return out;
}

SparseVec BoundQuiverAlgebra::mul_sparse(const SparseVec& x, const SparseVec& y) const {
  SparseVec acc;
  for (auto& [i, ci] : x)
    for (auto& [j, cj] : y) sv_add_into(field_, acc, mult(i, j), field_.mul(ci, cj));
  return acc;
}

Matrix BoundQuiverAlgebra::mul_elements(const Matrix& x, const Matrix& y) const {
  Matrix out(field_, dim(), 1);
  for (int i = 0; i < dim(); ++i) {
    Scalar ci = x.get(i, 0);
    if (field_.is_zero(ci)) continue;
    for (int j = 0; j < dim(); ++j) {
      Scalar cj = y.get(j, 0);
      if (field_.is_zero(cj)) continue;
      Scalar f = field_.mul(ci, cj);
      for (auto& [k, c] : mult(i, j)) out.add_to(k, 0, field_.mul(f, c));
    }
  }
  return out;
}

Matrix BoundQuiverAlgebra::left_mult_matrix(int i) const {
  Matrix out(field_, dim(), dim());
  for (int j = 0; j < dim(); ++j)
    for (auto& [k, c] : mult(i, j)) out.set(k, j, c);
  return out;
}

Matrix BoundQuiverAlgebra::right_mult_matrix(int i) const {
  Matrix out(field_, dim(), dim());
  for (int j = 0; j < dim(); ++j)
    for (auto& [k, c] : mult(j, i)) out.set(k, j, c);
  return out;
}

Matrix BoundQuiverAlgebra::left_mult_by(const Matrix& x) const {
  Matrix out(field_, dim(), dim());
  for (int i = 0; i < dim(); ++i) {
    Scalar ci = x.get(i, 0);
    if (field_.is_zero(ci)) continue;
    for (int j = 0; j < dim(); ++j)
      for (auto& [k, c] : mult(i, j)) out.add_to(k, j, field_.mul(ci, c));
  }
  return out;
}

Matrix BoundQuiverAlgebra::right_mult_by(const Matrix& x) const {
  Matrix out(field_, dim(), dim());
  for (int i = 0; i < dim(); ++i) {
    Scalar ci = x.get(i, 0);
    if (field_.is_zero(ci)) continue;
    for (int j = 0; j < dim(); ++j)
      for (auto& [k, c] : mult(j, i)) out.add_to(k, j, field_.mul(ci, c));
  }
  return out;
}

Matrix BoundQuiverAlgebra::one() const {
  Matrix out(field_, dim(), 1);
  for (int v : idempotent_index_) out.set(v, 0, field_.one());
  return out;
}

Matrix BoundQuiverAlgebra::unit(int i) const {
  Matrix out(field_, dim(), 1);
  out.set(i, 0, field_.one());
  return out;
}

bool BoundQuiverAlgebra::is_invertible(const Matrix& x) const {
  return static_cast<bool>(element_inverse(x));
}

std::optional<Matrix> BoundQuiverAlgebra::element_inverse(const Matrix& x) const {
  auto sol = left_mult_by(x).solve(one());
  if (!sol) return std::nullopt;
  if (!mul_elements(*sol, x).equals(one())) return std::nullopt;
  return sol;
}

Subspace BoundQuiverAlgebra::radical_power(int m) const {
  Subspace out(field_, dim());
  for (int i = 0; i < dim(); ++i) {
    if (basis_[i].length() >= m) {
      Matrix v(field_, 1, dim());
      v.set(0, i, field_.one());
      out.insert(v);
    }
  }
  return out;
}

Subspace BoundQuiverAlgebra::full_subspace() const { return radical_power(0); }

Subspace BoundQuiverAlgebra::socle(Side side) const {
  // left socle = {x : rad * x = 0}; rad is spanned by the basis classes of
  // length >= 1, so stack all of their action matrices
  Matrix stacked(field_, 0, dim());
  for (int i = 0; i < dim(); ++i) {
    if (basis_[i].length() < 1) continue;
    stacked = stacked.vstack(side == Side::Left ? left_mult_matrix(i) : right_mult_matrix(i));
  }
  Subspace out(field_, dim());
  if (stacked.rows() == 0) return radical_power(0);  // semisimple
  out.insert_cols(stacked.kernel());
  return out;
}

bool BoundQuiverAlgebra::verify_associativity() const {
  const int n = dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const SparseVec& ij = mult(i, j);
      for (int k = 0; k < n; ++k) {
        const SparseVec& jk = mult(j, k);
        SparseVec lhs;
        for (auto& [t, c] : ij) sv_add_into(field_, lhs, mult(t, k), c);
        SparseVec rhs;
        for (auto& [t, c] : jk) sv_add_into(field_, rhs, mult(i, t), c);
        if (lhs != rhs) return false;
      }
    }
  return true;
}

Matrix BoundQuiverAlgebra::normal_form(const Path& p) const {
  Matrix out(field_, dim(), 1);
  if (p.length() > bound_) return out;
  auto it = path_ids_.find({p.source, p.arrows});
  if (it == path_ids_.end()) return out;
  for (auto& [k, c] : path_nf_[it->second]) out.set(k, 0, c);
  return out;
}

Matrix BoundQuiverAlgebra::element_from_terms(const std::vector<RawTerm>& terms) const {
  Matrix out(field_, dim(), 1);
  for (const RawTerm& t : terms) {
    Scalar c = t.coeff.empty() ? field_.one() : field_.parse(t.coeff);
    if (t.negated) c = field_.neg(c);
    Path p;
    if (t.labels.size() == 1 && t.labels[0].rfind("e_", 0) == 0) {
      p = Path::trivial(quiver_.vertex(t.labels[0].substr(2)));
    } else {
      std::vector<int> ids;
      for (auto it = t.labels.rbegin(); it != t.labels.rend(); ++it) {
        if (it->empty()) throw BadParametersError("zero power is not a path");
        ids.push_back(quiver_.arrow_id(*it));
      }
      p = make_path(quiver_, ids);
    }
    out = out.add(normal_form(p).scale(c));
  }
  return out;
}

BoundQuiverAlgebra::Quotient BoundQuiverAlgebra::quotient_by_ideal(const Subspace& ideal) const {
  const int n = dim();
  if (ideal.ambient() != n) throw BadParametersError("ideal has wrong ambient dimension");
  // two-sidedness re-check against every radical basis class
  Matrix b = ideal.basis();
  for (int r = 0; r < b.rows(); ++r) {
    Matrix x = b.row(r).transpose();
    for (int i = 0; i < n; ++i) {
      if (basis_[i].length() < 1) continue;
      if (!ideal.contains(left_mult_matrix(i).mul(x).transpose()) ||
          !ideal.contains(right_mult_matrix(i).mul(x).transpose()))
        throw BadParametersError("subspace is not a two-sided ideal");
    }
  }
  for (int v = 0; v < quiver_.num_vertices(); ++v) {
    Matrix ev(field_, 1, n);
    ev.set(0, idempotent_index_[v], field_.one());
    if (ideal.contains(ev)) throw BadParametersError("ideal meets an idempotent");
  }

  std::vector<int> kept = ideal.free_indices();
  auto out = std::shared_ptr<BoundQuiverAlgebra>(new BoundQuiverAlgebra(quiver_, field_));
  out->bound_ = bound_;
  out->num_paths_ = 0;  // quotient algebras do not carry the path table
  const int q = static_cast<int>(kept.size());
  for (int k : kept) out->basis_.push_back(basis_[k]);
  out->mult_.assign(static_cast<size_t>(q) * q, SparseVec{});
  Matrix proj(field_, q, n);
  for (int j = 0; j < n; ++j) {
    Matrix v(field_, 1, n);
    v.set(0, j, field_.one());
    Matrix qc = ideal.quotient_coords(v);
    for (int t = 0; t < q; ++t) proj.set(t, j, qc.get(0, t));
  }
  for (int i = 0; i < q; ++i) {
    for (int j = 0; j < q; ++j) {
      SparseVec full = mult(kept[i], kept[j]);
      Matrix v(field_, 1, n);
      for (auto& [k, c] : full) v.set(0, k, c);
      Matrix qc = ideal.quotient_coords(v);
      SparseVec red;
      for (int t = 0; t < q; ++t) {
        Scalar c = qc.get(0, t);
        if (!field_.is_zero(c)) red.emplace_back(t, c);
      }
      out->mult_[static_cast<size_t>(i) * q + j] = std::move(red);
    }
  }
  out->finalize();
  return Quotient{out, std::move(kept), std::move(proj)};
}

std::string BoundQuiverAlgebra::element_to_string(const Matrix& x) const {
  std::string out;
  for (int i = 0; i < dim(); ++i) {
    Scalar c = x.get(i, 0);
    if (field_.is_zero(c)) continue;
    if (!out.empty()) out += " + ";
    if (!field_.is_one(c)) out += field_.to_string(c) + "*";
    out += path_to_string(quiver_, basis_[i]);
  }
  return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------------------
// Frobenius forms

Matrix gram_matrix(const BoundQuiverAlgebra& a, const FrobeniusForm& eps) {
  const int n = a.dim();
  if (eps.values.rows() != 1 || eps.values.cols() != n)
    throw BadParametersError("form has wrong shape");
  Matrix g(a.field(), n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Scalar s = a.field().zero();
      for (auto& [k, c] : a.mult(i, j)) s = a.field().add(s, a.field().mul(c, eps.values.get(0, k)));
      g.set(i, j, s);
    }
  return g;
}

Matrix verify_frobenius(const BoundQuiverAlgebra& a, const FrobeniusForm& eps) {
  Matrix g = gram_matrix(a, eps);
  if (g.rank() != a.dim()) throw DegenerateFormError("Gram matrix is singular");
  return g;
}

bool is_symmetric_form(const BoundQuiverAlgebra& a, const FrobeniusForm& eps) {
  Matrix g = gram_matrix(a, eps);
  return g.equals(g.transpose());
}

std::optional<FrobeniusForm> find_frobenius_form(const BoundQuiverAlgebra& a, uint64_t seed,
                                                 int attempts) {
  const Field& f = a.field();
  const int n = a.dim();
  auto nondegenerate = [&](const FrobeniusForm& e) { return gram_matrix(a, e).rank() == n; };
  // socle indicators first: every Frobenius form is nonzero on each socle block
  {
    FrobeniusForm e{Matrix(f, 1, n)};
    for (int i = 0; i < n; ++i)
      if (a.path_length(i) == a.loewy_length() - 1) e.values.set(0, i, f.one());
    if (nondegenerate(e)) return e;
  }
  {
    FrobeniusForm e{Matrix(f, 1, n)};
    for (int i = 0; i < n; ++i) e.values.set(0, i, f.one());
    if (nondegenerate(e)) return e;
  }
  std::mt19937_64 rng(seed);
  for (int t = 0; t < attempts; ++t) {
    FrobeniusForm e{Matrix(f, 1, n)};
    for (int i = 0; i < n; ++i) e.values.set(0, i, f.random(rng));
    if (nondegenerate(e)) return e;
  }
  return std::nullopt;
}

}  // namespace qcy
