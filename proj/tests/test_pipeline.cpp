#include <doctest.h>

#include "qcy/pipeline.hpp"

using namespace qcy;

namespace {

VerifyOutcome verify_family(const std::string& shorthand, long long p, int max_degree) {
  Field f = p == 0 ? Field::rationals() : Field::fp(p);
  FamilyBundle b = construct_family(parse_family_shorthand(shorthand), f);
  VerifyOptions opt;
  opt.max_degree = max_degree;
  return run_verify(b, p, opt);
}

}  // namespace

TEST_CASE("cross-oracle: brute-force confirmations match the classifier") {
  // rows whose closed-form patterns are out of reach (odd parities) are
  // still cross-checked through twist recognition and certificates
  SUBCASE("odd r: (D_5, 3, 2) gives 6 both ways") {
    VerifyOutcome o = verify_family("D5:r=3:t=2", 2, 6);
    REQUIRE(o.brute_dim);
    CHECK(*o.brute_dim == 6);
    REQUIRE(o.classifier);
    CHECK(o.classifier->value == 6);
    CHECK(o.consistent);
    // no closed-form comparison is available for odd r
    for (const VerifyDegreeRow& r : o.rows) CHECK(!r.pattern_matches.has_value());
  }
  SUBCASE("odd n: (A_7, 1, 2) gives 6 both ways") {
    VerifyOutcome o = verify_family("A7:r=1:t=2", 2, 6);
    REQUIRE(o.brute_dim);
    CHECK(*o.brute_dim == 6);
    REQUIRE(o.classifier);
    CHECK(o.classifier->value == 6);
    CHECK(o.consistent);
  }
  SUBCASE("no confirmed degree below the classifier value is ever refuted") {
    VerifyOutcome o = verify_family("D6:nonstd", 2, 8);
    REQUIRE(o.classifier);
    for (const VerifyDegreeRow& r : o.rows) {
      if (r.degree < o.classifier->value && r.verdict) CHECK(!r.verdict->confirmed());
      if (r.degree == o.classifier->value && r.verdict) CHECK(!r.verdict->refuted());
    }
  }
}

TEST_CASE("the reference family adjudicates without a classifier") {
  VerifyOutcome o = verify_family("trunc:3", 2, 4);
  CHECK(!o.classifier);
  CHECK(o.consistent);
  CHECK(o.adjudication.find("not applicable") != std::string::npos);
  // k[t]/t^3 over F_2: Omega^2 is the regular bimodule up to inner twist,
  // so the brute force certifies dimension 1 here
  REQUIRE(o.brute_dim);
  CHECK(*o.brute_dim == 1);
  CHECK(o.rows[0].syzygy_dim == 6);
  CHECK(o.rows[1].syzygy_dim == 3);
}

TEST_CASE("torsion-1 table rows agree with brute force on truncated algebras") {
  // k[t]/t^n carries the type (A_{n-1}, 1/(n-1), 1); for n >= 3 the table
  // and the resolution walk both give dimension 1 in every characteristic
  for (int n = 3; n <= 5; ++n) {
    for (long long p : {2LL, 3LL}) {
      VerifyOutcome o = verify_family("trunc:" + std::to_string(n), p, 3);
      REQUIRE(o.brute_dim);
      CHECK(*o.brute_dim == 1);
      AsashibaType t{TreeClass::A, n - 1, {1, n - 1}, 1, true};
      CYResult cls = scydim(t, p);
      REQUIRE(cls.finite);
      CHECK(cls.value == *o.brute_dim);
    }
  }
  // the one corner where the table row and the syzygy computation part ways:
  // for k[t]/t^2 every automorphism is stably inner and Omega^1 is already a
  // twist of A, so the engine proves dimension 0, while row 1 yields 1; the
  // verify pipeline therefore never maps trunc families onto a table type
  VerifyOutcome o = verify_family("trunc:2", 2, 2);
  REQUIRE(o.brute_dim);
  CHECK(*o.brute_dim == 0);
  CYResult corner = scydim({TreeClass::A, 1, {1, 1}, 1, true}, 2);
  REQUIRE(corner.finite);
  CHECK(corner.value == 1);
  CHECK(!o.classifier);  // adjudication stays with the certified route
}

TEST_CASE("verify audits cover the Frobenius identities and socle equality") {
  VerifyOutcome o = verify_family("D4:r=2:t=2", 2, 5);
  bool saw_eps = false, saw_socle = false, all_ok = true;
  for (auto& [name, ok] : o.audits) {
    all_ok = all_ok && ok;
    saw_eps = saw_eps || name.find("eps(ab)") != std::string::npos;
    saw_socle = saw_socle || name.find("socle") != std::string::npos;
  }
  CHECK(all_ok);
  CHECK(saw_eps);
  CHECK(saw_socle);
}
