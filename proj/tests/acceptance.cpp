// Acceptance gate: every release-blocking claim as one pass/fail line.
// Exits nonzero if any gate fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qcy/pipeline.hpp"

using namespace qcy;

namespace {

int g_failures = 0;

void gate(int num, const std::string& name, const std::function<void()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = true;
  try {
    body();
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                  .count();
  std::printf("[%s] criterion %d: %s (%.0f ms)%s%s\n", ok ? "PASS" : "FAIL", num, name.c_str(),
              ms, detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++g_failures;
}

void require(bool cond, const std::string& what) {
  if (!cond) throw std::runtime_error(what);
}

AlgebraPtr trunc(int n, const Field& f) {
  return construct_family(FamilySpec{FamilyKind::TruncatedPoly, n, 0}, f).algebra;
}

AlgebraMorphism trunc_morphism(const AlgebraPtr& a, const std::vector<long long>& coeffs) {
  Matrix img(a->field(), a->dim(), 1);
  for (size_t i = 0; i < coeffs.size() && static_cast<int>(i) + 1 < a->dim(); ++i)
    img.set_int(static_cast<int>(i) + 1, 0, coeffs[i]);
  return AlgebraMorphism::from_generator_images(a, {{0, img}});
}

void criterion1_table_exactness() {
  CYResult d6 = scydim(parse_type_shorthand("D6:nonstd"), 2);
  require(d6.finite && d6.value == 5, "D6:nonstd must be 5");
  CYResult d9 = scydim(parse_type_shorthand("D9:nonstd"), 2);
  require(d9.finite && d9.value == 9, "D9:nonstd must be 9");
  for (int k = 1; k <= 10; ++k) {
    CYResult r = scydim(AsashibaType{TreeClass::D, 4, {k, 1}, 3, true}, 0);
    require(!r.finite, "(D4, r, 3) must be infinite at r = " + std::to_string(k));
  }
}

void criterion2_congruence_rows() {
  // frozen oracle values, re-derived by interval scan before comparison
  struct Pin {
    AsashibaType t;
    long long p;
    std::optional<long long> want;
  };
  std::vector<Pin> pins{
      {{TreeClass::A, 5, {2, 1}, 2, true}, 0, 4},
      {{TreeClass::D, 4, {2, 1}, 2, true}, 2, 14},
      {{TreeClass::D, 4, {2, 1}, 2, true}, 0, std::nullopt},
      {{TreeClass::D, 4, {2, 1}, 2, true}, 3, std::nullopt},
      {{TreeClass::E, 6, {1, 1}, 2, true}, 0, 10},
      {{TreeClass::D, 5, {3, 1}, 2, true}, 0, 6},
  };
  for (const Pin& pin : pins) {
    auto scan = oracle::scan_row_value(pin.t, pin.p);
    require(scan == pin.want, "scan oracle drifted from the frozen value for " +
                                  pin.t.to_string());
    CYResult r = scydim(pin.t, pin.p);
    require(r.finite == pin.want.has_value() && (!r.finite || r.value == *pin.want),
            "classifier disagrees at " + pin.t.to_string());
  }
  // full sweep of the congruence rows against the scan oracle
  int cells = 0;
  for (const std::string& pat : {std::string("A:t=2"), std::string("D:t=2"),
                                 std::string("E6:t=2")}) {
    for (const SweepCell& c : sweep(pat, 1, 5, 1, 8, {0, 2, 3})) {
      auto scan = oracle::scan_row_value(c.type, c.char_p);
      require(c.result.finite == scan.has_value(),
              "finiteness mismatch at " + c.type.to_string());
      if (scan) require(c.result.value == *scan, "value mismatch at " + c.type.to_string());
      require(c.result.all_checks_pass(), "self-checks failed at " + c.type.to_string());
      ++cells;
    }
  }
  // A:t=2 gives 5x8x3, D:t=2 gives 2x8x3 (n >= 4), E6:t=2 gives 8x3
  require(cells == 192, "sweep did not cover the expected grid");
}

void criterion3_bruteforce_agreement() {
  Field f2 = Field::fp(2);
  {
    FamilyBundle b = construct_family(parse_family_shorthand("trunc:2"), f2);
    VerifyOptions opt;
    opt.max_degree = 2;
    VerifyOutcome o = run_verify(b, 2, opt);
    require(o.brute_dim && *o.brute_dim == 0,
            "trunc:2 must confirm dimension 0 by syzygy + twist + inner certificate");
    require(o.rows[0].verdict && o.rows[0].verdict->status == CertificateStatus::ConfirmedInner,
            "trunc:2 degree 0 must be ConfirmedInner");
  }
  {
    FamilyBundle b = construct_family(parse_family_shorthand("A5:r=2:t=2"), f2);
    VerifyOptions opt;
    opt.max_degree = 6;
    opt.dim_cap = 20000;
    VerifyOutcome o = run_verify(b, 2, opt);
    require(o.brute_dim && *o.brute_dim == 4, "A5:r=2:t=2 must confirm dimension 4");
    const VerifyDegreeRow& row = o.rows[4];
    require(row.twist.status == TwistRecognition::Status::Twist, "Omega^5 must be a twist");
    // the recognized twist is sigma up to an inner automorphism
    InnerResult devi = is_inner(row.twist.phi->compose(b.sigma.inverse()));
    require(devi.status == InnerResult::Status::Witness, "recognized twist must be sigma up to inner");
    require(row.verdict && row.verdict->status == CertificateStatus::ConfirmedInner,
            "nu sigma must carry an inner witness");
    require(o.classifier && o.classifier->finite && o.classifier->value == 4 && o.consistent,
            "classifier must agree on 4");
  }
}

void criterion4_resolution_shapes() {
  Field f2 = Field::fp(2);
  for (const char* sh : {"A5:r=2:t=2", "D4:r=2:t=2", "D6:nonstd"}) {
    FamilyBundle b = construct_family(parse_family_shorthand(sh), f2);
    Bimodule cur = regular_bimodule(b.algebra);
    for (int t = 0; t <= b.period + 2; ++t) {
      SyzygyStep step = syzygy_step(cur, 20000);
      require(step.pattern == expected_resolution_term(b, t),
              std::string(sh) + ": cover pattern of Omega^" + std::to_string(t) +
                  " differs from the closed form");
      cur = std::move(step.kernel);
    }
  }
}

void criterion5_periodicity() {
  Field f2 = Field::fp(2);
  FamilyBundle b = construct_family(parse_family_shorthand("D6:nonstd"), f2);
  Bimodule omega6 = syzygy_power(b.algebra, 6, 20000);
  require(omega6.dim() == b.algebra->dim(), "Omega^6 must have the dimension of A");
  TwistRecognition tr = recognize_twist(omega6, 20240501);
  require(tr.status == TwistRecognition::Status::Twist, "Omega^6 must be recognized as a twist");
  require(is_inner(*tr.phi).status == InnerResult::Status::Witness,
          "the Omega^6 twist must be inner");
}

void criterion6_truncated_poly_suite() {
  Field f2 = Field::fp(2);
  for (int n = 2; n <= 8; ++n) {
    AlgebraPtr a = trunc(n, f2);
    const int s = (n + 1) / 2;
    const int free_coeffs = n - 2;  // a_2 .. a_{n-1}
    for (int mask = 0; mask < (1 << free_coeffs); ++mask) {
      std::vector<long long> coeffs(n - 1, 0);
      coeffs[0] = 1;
      for (int i = 0; i < free_coeffs; ++i) coeffs[i + 1] = (mask >> i) & 1;
      AlgebraMorphism phi = trunc_morphism(a, coeffs);
      bool want = true;
      for (int i = 2; i <= s - 1; ++i)
        if (coeffs[i - 1] != 0) want = false;
      StablyInnerVerdict crit = stably_inner_truncated_poly(phi);
      require(crit.confirmed() == want,
              "criterion verdict differs from the coefficient condition at n = " +
                  std::to_string(n) + ", mask = " + std::to_string(mask));
      StablyInnerVerdict ms = is_inner_modulo_socle(phi);
      if (ms.confirmed())
        require(crit.confirmed(), "inner-mod-socle must imply criterion-positive");
    }
    if (n >= 4 && n - 2 >= s) {
      std::vector<long long> coeffs(n - 1, 0);
      coeffs[0] = 1;
      coeffs[n - 3] = 1;  // t -> t + t^{n-2}
      AlgebraMorphism phi = trunc_morphism(a, coeffs);
      require(stably_inner_truncated_poly(phi).confirmed() &&
                  !is_inner_modulo_socle(phi).confirmed(),
              "strict inclusion witness failed at n = " + std::to_string(n));
    }
  }
}

void criterion7_stable_hom_oracle() {
  for (int n = 2; n <= 6; ++n) {
    Field f = Field::fp(2);
    AlgebraPtr a = trunc(n, f);
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) {
        auto gen = [&](int k) {
          std::vector<Matrix> g;
          if (k < n) g.push_back(a->unit(k));
          return g;
        };
        RightIdeal I(a, gen(i)), J(a, gen(j));
        int got = stable_hom_cyclic(a, I, J).dim;
        int want = oracle::stable_hom_truncated(a, I.span(), J.span());
        require(got == want, "stable hom mismatch at n=" + std::to_string(n) + " I=(t^" +
                                 std::to_string(i) + ") J=(t^" + std::to_string(j) + ")");
      }
  }
}

void criterion8_frobenius_nakayama() {
  std::vector<std::pair<std::string, long long>> instances{
      {"A5:r=2:t=2", 2}, {"A5:r=2:t=2", 3}, {"D4:r=2:t=2", 2}, {"D4:r=2:t=2", 3},
      {"D6:nonstd", 2},  {"trunc:4", 0},    {"trunc:5", 3},
  };
  for (auto& [sh, p] : instances) {
    Field f = p == 0 ? Field::rationals() : Field::fp(p);
    FamilyBundle b = construct_family(parse_family_shorthand(sh), f);
    const BoundQuiverAlgebra& a = *b.algebra;
    AlgebraMorphism nu = nakayama_automorphism(b.algebra, b.eps);
    for (int i = 0; i < a.dim(); ++i)
      for (int j = 0; j < a.dim(); ++j) {
        Scalar lhs = f.zero();
        for (auto& [k, c] : a.mult(i, j)) lhs = f.add(lhs, f.mul(c, b.eps.values.get(0, k)));
        Matrix prod = a.mul_elements(a.unit(j), nu.matrix().column(i));
        Scalar rhs = f.zero();
        for (int k = 0; k < a.dim(); ++k)
          rhs = f.add(rhs, f.mul(prod.get(k, 0), b.eps.values.get(0, k)));
        require(f.equal(lhs, rhs), sh + ": eps(ab) != eps(b nu(a))");
      }
    if (is_symmetric_form(a, b.eps))
      require(nu.is_identity(), sh + ": symmetric form must give the identity Nakayama");
  }
  // the closed-form A-family Nakayama action with signs, over F_3
  Field f3 = Field::fp(3);
  FamilyBundle b = construct_family(parse_family_shorthand("A5:r=2:t=2"), f3);
  const BoundQuiverAlgebra& a = *b.algebra;
  AlgebraMorphism nu = nakayama_automorphism(b.algebra, b.eps);
  auto perm = nu.vertex_permutation();
  require(perm.has_value(), "nu must permute idempotents");
  require((*perm)[b.vertex_index.at("1")] == b.vertex_index.at("2") &&
              (*perm)[b.vertex_index.at("h2,1")] == b.vertex_index.at("h1,1"),
          "nu must shift vertex indices down by one");
  auto arrow_col = [&](const std::string& lbl) {
    return nu.matrix().column(a.arrow_index(a.quiver().arrow_id(lbl)));
  };
  auto unit_of = [&](const std::string& lbl) {
    return a.unit(a.arrow_index(a.quiver().arrow_id(lbl)));
  };
  // j = 0 arrows: minus exactly on the window [0, r-1] mod 2r = {4, 1}
  require(arrow_col("a1,0").equals(unit_of("a4,0").neg()), "nu sign at a1,0");
  require(arrow_col("a2,0").equals(unit_of("a1,0")), "nu sign at a2,0");
  require(arrow_col("a3,0").equals(unit_of("a2,0")), "nu sign at a3,0");
  require(arrow_col("a4,0").equals(unit_of("a3,0").neg()), "nu sign at a4,0");
  // j = n arrows: minus exactly on the window [-1, r-2] mod 2r = {3, 4}
  require(arrow_col("a1,2").equals(unit_of("a4,2")), "nu sign at a1,2");
  require(arrow_col("a2,2").equals(unit_of("a1,2")), "nu sign at a2,2");
  require(arrow_col("a3,2").equals(unit_of("a2,2").neg()), "nu sign at a3,2");
  require(arrow_col("a4,2").equals(unit_of("a3,2").neg()), "nu sign at a4,2");
}

void criterion9_property_suites() {
  // exactlin invariants
  std::mt19937_64 rng(20240501);
  for (long long p : {2LL, 3LL, 0LL}) {
    Field f = p == 0 ? Field::rationals() : Field::fp(p);
    for (int t = 0; t < 2000; ++t) {
      Scalar x = f.random(rng), y = f.random(rng), z = f.random(rng);
      require(f.equal(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z))),
              "distributivity failed");
      if (!f.is_zero(x)) require(f.is_one(f.mul(x, f.inv(x))), "inverse failed");
    }
    for (int t = 0; t < 25; ++t) {
      Matrix m(f, 5, 7);
      for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 7; ++j) m.set(i, j, f.random(rng));
      require(m.rank() + m.kernel().cols() == m.cols(), "rank-nullity failed");
      require(m.mul(m.kernel()).is_zero(), "kernel not annihilated");
      Matrix x(f, 7, 1);
      for (int i = 0; i < 7; ++i) x.set(i, 0, f.random(rng));
      auto sol = m.solve(m.mul(x));
      require(sol && m.mul(*sol).equals(m.mul(x)), "solve round trip failed");
    }
  }
  // algebra associativity and bimodule axioms on a family instance
  Field f2 = Field::fp(2);
  FamilyBundle nonstd = construct_family(parse_family_shorthand("D6:nonstd"), f2);
  require(nonstd.algebra->verify_associativity(), "associativity failed");
  require(regular_bimodule(nonstd.algebra).verify_actions(true),
          "bimodule action axioms failed");
  // cover minimality is re-checked inside projective_cover; exercise it
  SyzygyStep st = syzygy_step(regular_bimodule(nonstd.algebra));
  require(st.kernel.verify_actions(true), "syzygy action axioms failed");
  // recognize_twist round trip on 50 random inner-twisted instances
  int done = 0;
  for (int n = 2; n <= 5 && done < 50; ++n) {
    for (long long p : {2LL, 3LL}) {
      Field f = Field::fp(p);
      AlgebraPtr a = trunc(n, f);
      for (int t = 0; t < 7 && done < 50; ++t) {
        std::vector<long long> coeffs(n - 1, 0);
        for (int i = 0; i < n - 1; ++i) coeffs[i] = rng() % p;
        if (coeffs[0] == 0) coeffs[0] = 1;
        AlgebraMorphism psi = trunc_morphism(a, coeffs);
        TwistRecognition tr = recognize_twist(twisted_bimodule(a, psi), rng());
        require(tr.status == TwistRecognition::Status::Twist, "round trip failed to recognize");
        require(is_inner(psi.compose(tr.phi->inverse())).status == InnerResult::Status::Witness,
                "twist recovered only up to a non-inner discrepancy");
        ++done;
      }
    }
  }
  require(done == 50, "expected 50 round-trip instances");
}

}  // namespace

int main() {
  gate(1, "table exactness on the nonstandard and (D4, r, 3) rows", criterion1_table_exactness);
  gate(2, "congruence rows against the exhaustive-scan oracle", criterion2_congruence_rows);
  gate(3, "brute-force / classifier agreement on trunc:2 and A5:r=2:t=2",
       criterion3_bruteforce_agreement);
  gate(4, "resolution shapes match the closed forms for one quasi-period + 2",
       criterion4_resolution_shapes);
  gate(5, "nonstandard periodicity: Omega^6 is an inner twist of A", criterion5_periodicity);
  gate(6, "truncated polynomial criterion suite over F_2, n in [2, 8]",
       criterion6_truncated_poly_suite);
  gate(7, "stable hom formula equals the module-theoretic oracle, n <= 6",
       criterion7_stable_hom_oracle);
  gate(8, "Frobenius/Nakayama identities, including the signed formulas over F_3",
       criterion8_frobenius_nakayama);
  gate(9, "standalone property suites (exact linear algebra, actions, round trips)",
       criterion9_property_suites);
  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
