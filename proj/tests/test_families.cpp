#include <doctest.h>

#include "qcy/families.hpp"
#include "qcy/pipeline.hpp"

using namespace qcy;

namespace {

CoverPattern pattern_of(const FamilyBundle& b, std::vector<std::pair<std::string, std::string>> vu) {
  CoverPattern out;
  for (auto& [v, u] : vu) out.add(b.vertex_index.at(v), b.vertex_index.at(u));
  return out;
}

}  // namespace

TEST_CASE("family shorthand parsing") {
  FamilySpec a5 = parse_family_shorthand("A5:r=2:t=2");
  CHECK(a5.kind == FamilyKind::AOddTorsion2);
  CHECK(a5.n == 2);
  CHECK(a5.r == 2);
  CHECK(a5.shorthand() == "A5:r=2:t=2");
  CHECK(parse_family_shorthand("D6:nonstd").kind == FamilyKind::NonstandardD3n);
  CHECK(parse_family_shorthand("trunc:4").n == 4);
  CHECK_THROWS_AS(parse_family_shorthand("A4:r=1:t=2"), BadParametersError);  // even index
  CHECK_THROWS_AS(parse_family_shorthand("D7:nonstd"), BadParametersError);
  CHECK_THROWS_AS(parse_family_shorthand("trunc:1"), BadParametersError);
  CHECK_THROWS_AS(parse_family_shorthand("E6:r=1:t=2"), UnsupportedTypeError);
}

TEST_CASE("the A-family instance (A_5, r=2, t=2)") {
  Field f3 = Field::fp(3);
  FamilyBundle b = construct_family(parse_family_shorthand("A5:r=2:t=2"), f3);
  const BoundQuiverAlgebra& a = *b.algebra;
  CHECK(a.quiver().num_vertices() == 10);  // 8 hat vertices, 2 plain
  CHECK(a.quiver().num_arrows() == 12);
  CHECK(a.dim() == 44);  // frozen computed dimension
  CHECK(b.period == 5);
  CHECK(b.sigma.is_automorphism());
  REQUIRE(b.sigma.vertex_permutation());

  SUBCASE("sigma has finite order dividing 2r times the sign order") {
    // hat shift r+n+1 = 5 acts as +1 mod 2r = 4, and the sign windows cover
    // each orbit evenly, so the signs cancel after one full cycle
    AlgebraMorphism power = b.sigma;
    int order = 1;
    while (!power.is_identity() && order < 50) {
      power = power.compose(b.sigma);
      ++order;
    }
    CHECK(order == 4);
    CHECK(2 * 2 * 2 % order == 0);
  }

  SUBCASE("the closed-form Nakayama action holds over F_3, signs included") {
    AlgebraMorphism nu = nakayama_automorphism(b.algebra, b.eps);
    auto perm = nu.vertex_permutation();
    REQUIRE(perm);
    const Quiver& q = a.quiver();
    // nu(e_i) = e_{i-1}, nu(e_{hat i, j}) = e_{hat i-1, j}
    CHECK((*perm)[b.vertex_index.at("1")] == b.vertex_index.at("2"));
    CHECK((*perm)[b.vertex_index.at("2")] == b.vertex_index.at("1"));
    CHECK((*perm)[b.vertex_index.at("h1,1")] == b.vertex_index.at("h4,1"));
    CHECK((*perm)[b.vertex_index.at("h3,2")] == b.vertex_index.at("h2,2"));
    // sign pattern on the j = 0 arrows: minus exactly for i in [0, r-1] mod 2r,
    // canonically i in {1, 4}
    const Field& f = a.field();
    for (int i = 1; i <= 4; ++i) {
      std::string src = "a" + std::to_string(i) + ",0";
      std::string dst = "a" + std::to_string(i == 1 ? 4 : i - 1) + ",0";
      Matrix img = nu.matrix().column(a.arrow_index(q.arrow_id(src)));
      Matrix expect = a.unit(a.arrow_index(q.arrow_id(dst)));
      bool minus = i == 1 || i == 4;
      CHECK(img.equals(minus ? expect.neg() : expect));
      CHECK(!f.is_zero(img.get(a.arrow_index(q.arrow_id(dst)), 0)));
    }
    // j = n arrows: minus exactly for i in [-1, r-2] mod 2r = {3, 4} shifted:
    // canonical window {4, 1} - wait, [-1, 0] mod 4 is {3, 4}; r - 2 = 0
    for (int i = 1; i <= 4; ++i) {
      std::string src = "a" + std::to_string(i) + ",2";
      std::string dst = "a" + std::to_string(i == 1 ? 4 : i - 1) + ",2";
      Matrix img = nu.matrix().column(a.arrow_index(q.arrow_id(src)));
      Matrix expect = a.unit(a.arrow_index(q.arrow_id(dst)));
      bool minus = i == 3 || i == 4;
      CHECK(img.equals(minus ? expect.neg() : expect));
    }
  }
}

TEST_CASE("expected resolution terms") {
  Field f2 = Field::fp(2);
  SUBCASE("degree 0 is the diagonal for every family") {
    for (const char* sh : {"A5:r=2:t=2", "D4:r=2:t=2", "D6:nonstd", "trunc:3"}) {
      FamilyBundle b = construct_family(parse_family_shorthand(sh), f2);
      CoverPattern want;
      for (int v = 0; v < b.algebra->quiver().num_vertices(); ++v) want.add(v, v);
      CHECK(expected_resolution_term(b, 0) == want);
    }
  }
  SUBCASE("(A_5, 2, 2) degree 2 matches the closed form") {
    FamilyBundle b = construct_family(parse_family_shorthand("A5:r=2:t=2"), f2);
    CoverPattern want = pattern_of(
        b, {{"2", "1"},
            {"1", "2"},  // P_{[i+1][i]}, i = 1, 2 with wrap
            {"h2,2", "h1,1"},
            {"h3,2", "h2,1"},
            {"h4,2", "h3,1"},
            {"h1,2", "h4,1"},  // P_{[hat i+1, 2][hat i, 1]}
            {"h4,1", "h1,2"},
            {"h1,1", "h2,2"},
            {"h2,1", "h3,2"},
            {"h3,1", "h4,2"}});  // P_{[hat i+3, 1][hat i, 2]}
    CHECK(expected_resolution_term(b, 2) == want);
  }
  SUBCASE("nonstandard n = 2 degree 1 is T_1") {
    FamilyBundle b = construct_family(parse_family_shorthand("D6:nonstd"), f2);
    CoverPattern want = pattern_of(b, {{"1", "0"}, {"0", "1"}, {"0", "0"}});
    CHECK(expected_resolution_term(b, 1) == want);
  }
  SUBCASE("quasi-periodicity: term(d + period) is the sigma shift of term(d)") {
    FamilyBundle b = construct_family(parse_family_shorthand("A5:r=2:t=2"), f2);
    for (int d = 0; d <= 5; ++d) {
      CoverPattern lhs = expected_resolution_term(b, d + b.period);
      CoverPattern base = expected_resolution_term(b, d);
      auto perm = b.sigma.vertex_permutation();
      REQUIRE(perm);
      CoverPattern shifted;
      for (auto& [k, c] : base.mult) shifted.add((*perm)[k.first], k.second, c);
      CHECK(lhs == shifted);
    }
  }
  SUBCASE("nonstandard terms repeat with period 4n-2") {
    FamilyBundle b = construct_family(parse_family_shorthand("D9:nonstd"), f2);
    for (int d = 0; d <= 11; ++d)
      CHECK(expected_resolution_term(b, d + 4 * 3 - 2) == expected_resolution_term(b, d));
  }
  SUBCASE("parity hypotheses are enforced") {
    FamilyBundle odd_n = construct_family(parse_family_shorthand("A7:r=2:t=2"), f2);
    CHECK_THROWS_AS(expected_resolution_term(odd_n, 1), UnsupportedTypeError);
    FamilyBundle odd_r = construct_family(parse_family_shorthand("D4:r=3:t=2"), f2);
    CHECK_THROWS_AS(expected_resolution_term(odd_r, 1), UnsupportedTypeError);
  }
}

TEST_CASE("nonstandard family requires characteristic 2") {
  CHECK_THROWS_AS(construct_family(parse_family_shorthand("D6:nonstd"), Field::fp(3)),
                  WrongCharacteristicError);
  CHECK_THROWS_AS(construct_family(parse_family_shorthand("D6:nonstd"), Field::rationals()),
                  WrongCharacteristicError);
}

TEST_CASE("nonstandard bundle: symmetric form, identity Nakayama, sigma order") {
  Field f2 = Field::fp(2);
  FamilyBundle b = construct_family(parse_family_shorthand("D6:nonstd"), f2);
  CHECK(b.algebra->dim() == 10);  // frozen computed dimension
  CHECK(is_symmetric_form(*b.algebra, b.eps));
  CHECK(nakayama_automorphism(b.algebra, b.eps).is_identity());
  CHECK(b.sigma.compose(b.sigma).is_identity());  // beta + beta^2 + beta^3 squares to id
  CHECK(!b.sigma.is_identity());
  CHECK(b.period == 6);

  SUBCASE("the defining relation identities hold in normal form") {
    const BoundQuiverAlgebra& a = *b.algebra;
    const Quiver& q = a.quiver();
    int bid = q.arrow_id("b"), a0 = q.arrow_id("a0"), a1 = q.arrow_id("a1");
    // beta^2 = nu_0 = alpha_1 alpha_0
    CHECK(a.normal_form(make_path(q, {bid, bid}))
              .equals(a.normal_form(make_path(q, {a0, a1}))));
    // the deformed relation identifies the two 1 -> 1 channels, both nonzero
    Matrix lhs = a.normal_form(make_path(q, {a1, a0}));
    Matrix rhs = a.normal_form(make_path(q, {a1, bid, a0}));
    CHECK(lhs.equals(rhs));
    CHECK(!lhs.is_zero());
    // socle equality, the self-injectivity witness
    CHECK(a.socle(Side::Left).same_space(a.socle(Side::Right)));
  }
}

TEST_CASE("D-family bundle basics") {
  Field f2 = Field::fp(2);
  FamilyBundle b = construct_family(parse_family_shorthand("D4:r=2:t=2"), f2);
  CHECK(b.algebra->quiver().num_vertices() == 8);
  CHECK(b.algebra->dim() == 36);  // frozen computed dimension
  CHECK(b.period == 5);
  CHECK(b.sigma.is_automorphism());
  SUBCASE("nu sigma^l fixes every idempotent for the minimal l") {
    // gcd(n-1, r) = 1, l = 3 solves 2r | l(n-1) - 1
    AlgebraMorphism nu = nakayama_automorphism(b.algebra, b.eps);
    AlgebraMorphism target = nu.compose(b.sigma.power(3));
    auto perm = target.vertex_permutation();
    REQUIRE(perm);
    for (int v = 0; v < 8; ++v) CHECK((*perm)[v] == v);
  }
}

TEST_CASE("the D-family nu sigma^l sign formula over F_3") {
  // r even is required for the closed resolution forms but the construction
  // itself works in any characteristic; the closed-form sign rule for
  // nu sigma^l(gamma) is (-1)^{l + p_l(i)}
  Field f3 = Field::fp(3);
  FamilyBundle b = construct_family(parse_family_shorthand("D4:r=2:t=2"), f3);
  const BoundQuiverAlgebra& a = *b.algebra;
  AlgebraMorphism nu = nakayama_automorphism(b.algebra, b.eps);
  AlgebraMorphism t = nu.compose(b.sigma.power(3));  // l = 3
  auto p_l = [&](int i) {  // card{s in [0, l-1] : r | i + s(n-1)}
    int count = 0;
    for (int s = 0; s < 3; ++s)
      if (((i + s * 3) % 2 + 2) % 2 == 0) ++count;
    return count;
  };
  for (int i = 1; i <= 4; ++i) {
    int g = a.arrow_index(a.quiver().arrow_id("g" + std::to_string(i)));
    Matrix img = t.matrix().column(g);
    bool minus = (3 + p_l(i)) % 2 == 1;
    Matrix expect = a.unit(g);
    CHECK(img.equals(minus ? expect.neg() : expect));
  }
}

TEST_CASE("witness element for the A-family") {
  SUBCASE("characteristic 2 collapses all signs to 1") {
    Field f2 = Field::fp(2);
    FamilyBundle b = construct_family(parse_family_shorthand("A5:r=2:t=2"), f2);
    Matrix a = witness_inner_element(b, 1);
    CHECK(a.equals(b.algebra->one()));
  }
  SUBCASE("l = 1 over F_3: signs assembled from p_l and conjugation verified") {
    Field f3 = Field::fp(3);
    FamilyBundle b = construct_family(parse_family_shorthand("A5:r=2:t=2"), f3);
    Matrix a = witness_inner_element(b, 1);  // verified inside
    // p_1 gives sign -1 at plain vertex 1 and +1 at plain vertex 2
    const BoundQuiverAlgebra& A = *b.algebra;
    CHECK(f3.equal(a.get(A.idempotent_index(b.vertex_index.at("1")), 0), f3.from_int(-1)));
    CHECK(f3.equal(a.get(A.idempotent_index(b.vertex_index.at("2")), 0), f3.one()));
    auto inv = A.element_inverse(a);
    REQUIRE(inv);
    CHECK(A.mul_elements(a, *inv).equals(A.one()));
  }
  SUBCASE("bad parameters are rejected") {
    Field f2 = Field::fp(2);
    FamilyBundle b = construct_family(parse_family_shorthand("A5:r=2:t=2"), f2);
    CHECK_THROWS_AS(witness_inner_element(b, 2), BadParametersError);  // 4 does not divide 2*5-1
    FamilyBundle t = construct_family(parse_family_shorthand("trunc:3"), f2);
    CHECK_THROWS_AS(witness_inner_element(t, 1), BadParametersError);
  }
}

TEST_CASE("nu sigma^l acts by the closed-form signs over F_3") {
  Field f3 = Field::fp(3);
  FamilyBundle b = construct_family(parse_family_shorthand("A5:r=2:t=2"), f3);
  const BoundQuiverAlgebra& a = *b.algebra;
  AlgebraMorphism t = nakayama_automorphism(b.algebra, b.eps).compose(b.sigma);  // l = 1
  auto perm = t.vertex_permutation();
  REQUIRE(perm);
  for (int v = 0; v < 10; ++v) CHECK((*perm)[v] == v);  // fixes every idempotent
  // p_1(q) counts s in {0, 1} with 4 | q + 5s: nonzero exactly at q = 0, 3 mod 4
  auto p1 = [](int q) { return (q % 4 + 4) % 4 == 0 || (q % 4 + 4) % 4 == 3 ? 1 : 0; };
  for (int i = 1; i <= 4; ++i) {
    auto col = [&](const std::string& lbl) {
      return t.matrix().column(a.arrow_index(a.quiver().arrow_id(lbl)));
    };
    auto unit = [&](const std::string& lbl) {
      return a.unit(a.arrow_index(a.quiver().arrow_id(lbl)));
    };
    std::string ai = std::to_string(i);
    CHECK(col("a" + ai + ",1").equals(unit("a" + ai + ",1")));  // middle arrows fixed
    bool minus0 = (p1(i - 1) + p1(i)) % 2 == 1;
    CHECK(col("a" + ai + ",0").equals(minus0 ? unit("a" + ai + ",0").neg()
                                             : unit("a" + ai + ",0")));
    bool minus2 = (p1(i) + p1(i + 1)) % 2 == 1;
    CHECK(col("a" + ai + ",2").equals(minus2 ? unit("a" + ai + ",2").neg()
                                             : unit("a" + ai + ",2")));
  }
}

TEST_CASE("is_inner finds a witness for nu sigma^l, matching the closed form") {
  Field f3 = Field::fp(3);
  FamilyBundle b = construct_family(parse_family_shorthand("A5:r=2:t=2"), f3);
  AlgebraMorphism nu = nakayama_automorphism(b.algebra, b.eps);
  AlgebraMorphism target = nu.compose(b.sigma);  // l = 1
  InnerResult r = is_inner(target);
  REQUIRE(r.status == InnerResult::Status::Witness);
  // the closed-form witness conjugates identically (checked in its builder)
  CHECK_NOTHROW(witness_inner_element(b, 1));
}

TEST_CASE("type shorthand parsing and validation") {
  AsashibaType t = parse_type_shorthand("A5:r=2:t=2");
  CHECK(t.tree == TreeClass::A);
  CHECK(t.index == 5);
  CHECK(t.torsion == 2);
  CHECK(parse_type_shorthand("D6:nonstd").standard == false);
  CHECK(parse_type_shorthand("A5:r=3:t=1").frequency == Fraction{3, 5});
  CHECK(parse_type_shorthand("D6:f=2/3:t=1").frequency == Fraction{2, 3});
  CHECK_THROWS_AS(parse_type_shorthand("D3:r=1:t=2"), BadParametersError);   // D needs n >= 4
  CHECK_THROWS_AS(parse_type_shorthand("E7:r=1:t=2"), BadParametersError);   // no (E7, r, 2)
  CHECK_THROWS_AS(parse_type_shorthand("D4:f=1/2:t=1"), BadParametersError); // not admissible
}
