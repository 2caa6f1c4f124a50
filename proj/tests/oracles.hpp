#pragma once

// Test-only independent oracles. These deliberately avoid the library code
// paths they are checking: stable hom dimensions come from explicit module
// intertwiner systems, classifier values from direct interval scans.

#include "qcy/classify.hpp"
#include "qcy/morphism.hpp"

namespace qcy::oracle {

// dim Hom_bar(A/I, A/J) for A = k[t]/t^n computed from module actions:
// intertwiners H with H t_I = t_J H, minus those factoring through A ->> A/J.
inline int stable_hom_truncated(const AlgebraPtr& a, const Subspace& ideal_i,
                                const Subspace& ideal_j) {
  const Field& f = a->field();
  auto quotient_action = [&](const Subspace& ideal) {
    int qd = a->dim() - ideal.dim();
    Matrix qmat(f, qd, a->dim());
    for (int j = 0; j < a->dim(); ++j) {
      Matrix qc = ideal.quotient_coords(a->unit(j).transpose());
      for (int r = 0; r < qd; ++r) qmat.set(r, j, qc.get(0, r));
    }
    std::vector<int> free = ideal.free_indices();
    Matrix act(f, qd, qd);
    Matrix rt = a->right_mult_matrix(1);  // right multiplication by t
    for (int c = 0; c < qd; ++c) {
      Matrix img = qmat.mul(rt.mul(a->unit(free[c])));
      for (int r = 0; r < qd; ++r) act.set(r, c, img.get(r, 0));
    }
    return std::pair<Matrix, Matrix>(act, qmat);
  };
  auto [ti, qi] = quotient_action(ideal_i);
  auto [tj, qj] = quotient_action(ideal_j);
  const int di = ti.rows(), dj = tj.rows();

  Matrix sys(f, 0, di * dj);
  for (int rr = 0; rr < dj; ++rr)
    for (int cc = 0; cc < di; ++cc) {
      Matrix row(f, 1, di * dj);
      for (int k = 0; k < di; ++k) row.add_to(0, rr * di + k, ti.get(k, cc));
      for (int k = 0; k < dj; ++k) row.add_to(0, k * di + cc, f.neg(tj.get(rr, k)));
      sys = sys.vstack(row);
    }
  int hom_dim = sys.cols() - sys.rank();

  Matrix ta = a->right_mult_matrix(1);
  Matrix sys2(f, 0, di * a->dim());
  for (int rr = 0; rr < a->dim(); ++rr)
    for (int cc = 0; cc < di; ++cc) {
      Matrix row(f, 1, di * a->dim());
      for (int k = 0; k < di; ++k) row.add_to(0, rr * di + k, ti.get(k, cc));
      for (int k = 0; k < a->dim(); ++k) row.add_to(0, k * di + cc, f.neg(ta.get(rr, k)));
      sys2 = sys2.vstack(row);
    }
  Matrix lifts = sys2.kernel();
  Subspace projected(f, di * dj);
  for (int c = 0; c < lifts.cols(); ++c) {
    Matrix h(f, a->dim(), di);
    for (int rr = 0; rr < a->dim(); ++rr)
      for (int cc = 0; cc < di; ++cc) h.set(rr, cc, lifts.get(rr * di + cc, c));
    Matrix comp = qj.mul(h);
    Matrix flat(f, 1, di * dj);
    for (int rr = 0; rr < dj; ++rr)
      for (int cc = 0; cc < di; ++cc) flat.set(0, rr * di + cc, comp.get(rr, cc));
    projected.insert(flat);
  }
  return hom_dim - projected.dim();
}

// Direct interval scan of a congruence row, independent of the Euclid path.
inline std::optional<long long> scan_congruence(long long a, long long b, long long modulus,
                                                long long lo, long long hi, bool lo_strict,
                                                bool hi_strict) {
  for (long long l = lo + (lo_strict ? 1 : 0); l <= hi - (hi_strict ? 1 : 0); ++l) {
    long long v = a * l - b;
    if (((v % modulus) + modulus) % modulus == 0) return l;
  }
  return std::nullopt;
}

// The congruence table rows evaluated by exhaustive scan only. Covers the
// rows with congruence conditions; returns nullopt for "infinite".
inline std::optional<long long> scan_row_value(const AsashibaType& t, long long p) {
  auto gcd2 = [](long long x, long long y) { return std::gcd(x, y); };
  if (!t.standard) return 4LL * (t.index / 3) - 3;
  if (t.torsion == 3) return std::nullopt;
  if (t.torsion == 2) {
    long long r = t.frequency.num / t.frequency.den;
    if (t.tree == TreeClass::A) {
      long long n = (t.index - 1) / 2;
      if (gcd2(r + n + 1, 2 * r) != 1) return std::nullopt;
      auto l = scan_congruence(r + n + 1, 1, 2 * r, 0, 2 * r, true, false);
      return l ? std::optional<long long>(*l * (2 * n + 1) - 1) : std::nullopt;
    }
    if (t.tree == TreeClass::D) {
      long long n = t.index;
      if (r % 2 == 1) {
        if (gcd2(n - 1, r) != 1) return std::nullopt;
        auto l = scan_congruence(2 * n - 2, n - 2, r * (2 * n - 3), 0, r * (2 * n - 3), true, true);
        return l ? std::optional<long long>(2 * *l) : std::nullopt;
      }
      if (gcd2(n - 1, r) != 1 || p != 2) return std::nullopt;
      auto l = scan_congruence(n - 1, 1, 2 * r, 0, 2 * r, true, false);
      return l ? std::optional<long long>(*l * (2 * n - 3) - 1) : std::nullopt;
    }
    if (gcd2(6, r) != 1) return std::nullopt;
    auto l = scan_congruence(12, 5, 11 * r, 0, 11 * r, true, true);
    return l ? std::optional<long long>(2 * *l) : std::nullopt;
  }
  // torsion 1 rows, keyed on r = frequency * m_Delta
  long long m = m_delta(t.tree, t.index);
  long long r = t.frequency.num * m / t.frequency.den;
  bool row1 = (t.tree == TreeClass::A && t.index == 1) ||
              (t.tree == TreeClass::D && t.index % 2 == 0) ||
              (t.tree == TreeClass::E && (t.index == 7 || t.index == 8));
  if (row1) {
    if (gcd2((m + 1) / 2, r) != 1) return std::nullopt;
    if (r % 2 == 0 || p == 2) {
      auto l = scan_congruence((m + 1) / 2, (m + 1) / 2 - 1, r, 0, r, true, false);
      return l ? std::optional<long long>(*l) : std::nullopt;
    }
    auto l = scan_congruence(m + 1, -1, r, 0, r, false, true);
    return l ? std::optional<long long>(1 + 2 * *l) : std::nullopt;
  }
  if (gcd2(m + 1, r) != 1) return std::nullopt;
  auto l = scan_congruence(m + 1, -1, r, 0, r, false, true);
  return l ? std::optional<long long>(1 + 2 * *l) : std::nullopt;
}

}  // namespace qcy::oracle
