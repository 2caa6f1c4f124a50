#include "qcy/classify.hpp"

#include <numeric>

namespace qcy {

bool CongruenceProblem::admits(long long l) const {
  if (lo_strict ? l <= lo : l < lo) return false;
  if (hi_strict ? l >= hi : l > hi) return false;
  long long v = (a % modulus) * (l % modulus) - b;
  return ((v % modulus) + modulus) % modulus == 0;
}

std::string CongruenceProblem::to_string() const {
  return std::to_string(modulus) + " | " + std::to_string(a) + "*l - " + std::to_string(b) +
         ", l in " + (lo_strict ? "(" : "[") + std::to_string(lo) + ", " + std::to_string(hi) +
         (hi_strict ? ")" : "]");
}

std::optional<long long> solve_min_congruence(const CongruenceProblem& p) {
  const long long m = p.modulus;
  if (m <= 0) throw BadParametersError("modulus must be positive");
  long long a = ((p.a % m) + m) % m;
  long long b = ((p.b % m) + m) % m;
  long long lo = p.lo + (p.lo_strict ? 1 : 0);
  long long hi = p.hi - (p.hi_strict ? 1 : 0);
  if (lo > hi) return std::nullopt;
  const long long g = std::gcd(a, m);
  if (b % g != 0) return std::nullopt;
  const long long m1 = m / g;
  long long l0;
  if (m1 == 1) {
    l0 = 0;  // every integer solves a*l = b mod m
  } else {
    // invert a/g modulo m1 by extended Euclid
    long long a1 = (a / g) % m1, b1 = (b / g) % m1;
    long long t = 0, nt = 1, r = m1, nr = a1;
    while (nr != 0) {
      long long q = r / nr;
      long long tmp = t - q * nt;
      t = nt;
      nt = tmp;
      tmp = r - q * nr;
      r = nr;
      nr = tmp;
    }
    if (r != 1) return std::nullopt;
    l0 = ((t % m1 + m1) % m1) * (b1 % m1) % m1;
  }
  // least solution >= lo in the residue class l0 mod m1
  long long l = ((l0 % m1) + m1) % m1;
  if (l < lo) l += ((lo - l + m1 - 1) / m1) * m1;
  if (l > hi) return std::nullopt;
  return l;
}

namespace {

void audit_congruence(CYResult& res) {
  if (!res.finite || !res.congruence || !res.solution_l) return;
  const CongruenceProblem& c = *res.congruence;
  res.checks.emplace_back("congruence re-substitution", c.admits(*res.solution_l));
  bool minimal = true;
  long long lo = c.lo + (c.lo_strict ? 1 : 0);
  if (c.hi - lo <= 2000000) {
    for (long long l = lo; l < *res.solution_l; ++l)
      if (c.admits(l)) minimal = false;
  }
  res.checks.emplace_back("minimality over the stated range", minimal);
}

CYResult finite_result(std::string row, const CongruenceProblem& c, long long value,
                       long long l) {
  CYResult res;
  res.finite = true;
  res.value = value;
  res.row = std::move(row);
  res.solution_l = l;
  res.congruence = c;
  audit_congruence(res);
  return res;
}

CYResult infinite_result(std::string row, std::string reason) {
  CYResult res;
  res.finite = false;
  res.row = std::move(row);
  res.checks.emplace_back("infinite branch: " + reason, true);
  return res;
}

CYResult torsion1_rows(const AsashibaType& t, long long p, const std::string& tag) {
  const long long m = m_delta(t.tree, t.index);
  const long long r = t.frequency.num * m / t.frequency.den;
  const bool row1 = (t.tree == TreeClass::A && t.index == 1) ||
                    (t.tree == TreeClass::D && t.index % 2 == 0) ||
                    (t.tree == TreeClass::E && (t.index == 7 || t.index == 8));
  CYResult res;
  if (row1) {
    const long long half = (m + 1) / 2;
    if (std::gcd(half, r) != 1) {
      res = infinite_result("t1-row1", "gcd((m+1)/2, r) != 1");
    } else if (r % 2 == 0 || p == 2) {
      CongruenceProblem c{half, half - 1, r, 0, r, true, false};
      auto l = solve_min_congruence(c);
      if (!l) throw InconsistencyError("row-1 congruence unsolvable despite gcd = 1");
      res = finite_result("t1-row1", c, *l, *l);
    } else {
      CongruenceProblem c{m + 1, -1, r, 0, r, false, true};
      auto l = solve_min_congruence(c);
      if (!l) throw InconsistencyError("row-1 congruence unsolvable despite gcd = 1");
      res = finite_result("t1-row1", c, 1 + 2 * *l, *l);
    }
  } else {
    if (std::gcd(m + 1, r) != 1) {
      res = infinite_result("t1-row2", "gcd(m+1, r) != 1");
    } else {
      CongruenceProblem c{m + 1, -1, r, 0, r, false, true};
      auto l = solve_min_congruence(c);
      if (!l) throw InconsistencyError("row-2 congruence unsolvable despite gcd = 1");
      res = finite_result("t1-row2", c, 1 + 2 * *l, *l);
    }
  }
  if (tag == "D3n-t1")
    res.flags.push_back("assumed-normalization: frequency r/3 mapped to r(2n-1)/m_Delta form");
  return res;
}

}  // namespace

CYResult scydim(const AsashibaType& t, long long char_p) {
  const std::string tag = validate_asashiba(t);  // throws on inadmissible types
  if (!t.standard) {
    const int n = t.index / 3;
    CYResult res;
    res.finite = true;
    res.value = 4LL * n - 3;
    res.row = "nonstandard";
    res.checks.emplace_back("formula 4n-3", true);
    return res;
  }
  switch (t.torsion) {
    case 1:
      return torsion1_rows(t, char_p, tag);
    case 2: {
      const long long r = t.frequency.num / t.frequency.den;
      if (t.tree == TreeClass::A) {
        const long long n = (t.index - 1) / 2;
        if (std::gcd(r + n + 1, 2 * r) != 1)
          return infinite_result("A-t2", "gcd(r+n+1, 2r) != 1");
        CongruenceProblem c{r + n + 1, 1, 2 * r, 0, 2 * r, true, false};
        auto l = solve_min_congruence(c);
        if (!l) throw InconsistencyError("A-t2 congruence unsolvable despite gcd = 1");
        return finite_result("A-t2", c, *l * (2 * n + 1) - 1, *l);
      }
      if (t.tree == TreeClass::D) {
        const long long n = t.index;
        if (r % 2 == 1) {
          if (std::gcd(n - 1, r) != 1) return infinite_result("D-t2-odd-r", "gcd(n-1, r) != 1");
          CongruenceProblem c{2 * n - 2, n - 2, r * (2 * n - 3), 0, r * (2 * n - 3), true, true};
          auto l = solve_min_congruence(c);
          if (!l) throw InconsistencyError("D-t2 odd congruence unsolvable despite gcd = 1");
          return finite_result("D-t2-odd-r", c, 2 * *l, *l);
        }
        if (std::gcd(n - 1, r) != 1) return infinite_result("D-t2-even-r", "gcd(n-1, r) != 1");
        if (char_p != 2) return infinite_result("D-t2-even-r", "characteristic != 2");
        CongruenceProblem c{n - 1, 1, 2 * r, 0, 2 * r, true, false};
        auto l = solve_min_congruence(c);
        if (!l) throw InconsistencyError("D-t2 even congruence unsolvable despite gcd = 1");
        return finite_result("D-t2-even-r", c, *l * (2 * n - 3) - 1, *l);
      }
      // (E_6, r, 2)
      if (std::gcd(6LL, r) != 1) return infinite_result("E6-t2", "gcd(6, r) != 1");
      CongruenceProblem c{12, 5, 11 * r, 0, 11 * r, true, true};
      auto l = solve_min_congruence(c);
      if (!l) throw InconsistencyError("E6-t2 congruence unsolvable despite gcd = 1");
      return finite_result("E6-t2", c, 2 * *l, *l);
    }
    case 3:
      return infinite_result("D4-t3", "row is infinite unconditionally");
  }
  throw BadParametersError("unsupported torsion");
}

std::vector<SweepCell> sweep(const std::string& pattern, int n_lo, int n_hi, int r_lo, int r_hi,
                             const std::vector<long long>& chars) {
  std::vector<SweepCell> out;
  auto push = [&](const AsashibaType& t, long long p) {
    try {
      CYResult res = scydim(t, p);
      out.push_back({t, p, std::move(res)});
    } catch (const BadParametersError&) {
      // inadmissible cell: skip
    }
  };
  for (long long p : chars) {
    for (int n = n_lo; n <= n_hi; ++n) {
      for (int r = r_lo; r <= r_hi; ++r) {
        if (pattern == "A:t=2")
          push({TreeClass::A, 2 * n + 1, {r, 1}, 2, true}, p);
        else if (pattern == "D:t=2")
          push({TreeClass::D, n, {r, 1}, 2, true}, p);
        else if (pattern == "E6:t=2" && n == n_lo)
          push({TreeClass::E, 6, {r, 1}, 2, true}, p);
        else if (pattern == "D4:t=3" && n == n_lo)
          push({TreeClass::D, 4, {r, 1}, 3, true}, p);
        else if (pattern == "nonstd" && r == r_lo)
          push({TreeClass::D, 3 * n, {1, 3}, 1, false}, p);
        else if (pattern == "A:t=1")
          push({TreeClass::A, n, {r, n}, 1, true}, p);
        else if (pattern == "D:t=1")
          push({TreeClass::D, n, {r, 1}, 1, true}, p);
        else if (pattern == "D3:t=1")
          push({TreeClass::D, 3 * n, {r, 3}, 1, true}, p);
        else if (pattern == "E:t=1")
          push({TreeClass::E, n, {r, 1}, 1, true}, p);
      }
    }
  }
  return out;
}

}  // namespace qcy
