#include <doctest.h>

#include <numeric>
#include <random>

#include "qcy/classify.hpp"

using namespace qcy;

namespace {

// independent oracle: scan the stated interval and test divisibility directly
std::optional<long long> scan_min(const CongruenceProblem& c) {
  long long lo = c.lo + (c.lo_strict ? 1 : 0);
  long long hi = c.hi - (c.hi_strict ? 1 : 0);
  for (long long l = lo; l <= hi; ++l) {
    long long v = c.a * l - c.b;
    if (((v % c.modulus) + c.modulus) % c.modulus == 0) return l;
  }
  return std::nullopt;
}

AsashibaType a_t2(int n, int r) { return {TreeClass::A, 2 * n + 1, {r, 1}, 2, true}; }
AsashibaType d_t2(int n, int r) { return {TreeClass::D, n, {r, 1}, 2, true}; }

}  // namespace

TEST_CASE("m_delta values") {
  CHECK(m_delta(TreeClass::A, 5) == 5);
  CHECK(m_delta(TreeClass::D, 4) == 5);
  CHECK(m_delta(TreeClass::E, 6) == 11);
  CHECK(m_delta(TreeClass::E, 7) == 17);
  CHECK(m_delta(TreeClass::E, 8) == 29);
  CHECK_THROWS_AS(m_delta(TreeClass::E, 9), BadParametersError);
}

TEST_CASE("solve_min_congruence examples") {
  SUBCASE("12 l = 5 mod 11 in [0, 11) gives l = 5") {
    CongruenceProblem c{12, 5, 11, 0, 11, false, true};
    CHECK(solve_min_congruence(c) == 5);
  }
  SUBCASE("4 l = 1 mod 2 has no solution") {
    CongruenceProblem c{4, 1, 2, 0, 100, false, false};
    CHECK(!solve_min_congruence(c));
  }
  SUBCASE("l = 0 mod 7 in (0, 7] gives l = 7") {
    CongruenceProblem c{1, 0, 7, 0, 7, true, false};
    CHECK(solve_min_congruence(c) == 7);
  }
}

TEST_CASE("solve_min_congruence agrees with exhaustive scan") {
  std::mt19937_64 rng(314);
  for (int t = 0; t < 10000; ++t) {
    CongruenceProblem c;
    c.modulus = 1 + static_cast<long long>(rng() % 10000);
    c.a = static_cast<long long>(rng() % (2 * c.modulus));
    c.b = static_cast<long long>(rng() % (2 * c.modulus));
    c.lo = static_cast<long long>(rng() % 20);
    c.hi = c.lo + static_cast<long long>(rng() % (2 * c.modulus));
    c.lo_strict = rng() % 2;
    c.hi_strict = rng() % 2;
    CHECK(solve_min_congruence(c) == scan_min(c));
  }
}

TEST_CASE("classifier values pinned by the table") {
  SUBCASE("nonstandard formula 4n-3") {
    CYResult r6 = scydim(parse_type_shorthand("D6:nonstd"), 2);
    CHECK(r6.finite);
    CHECK(r6.value == 5);
    CYResult r9 = scydim(parse_type_shorthand("D9:nonstd"), 2);
    CHECK(r9.value == 9);
  }
  SUBCASE("(D_4, r, 3) is infinite for every r") {
    for (int r = 1; r <= 10; ++r) {
      CYResult res = scydim({TreeClass::D, 4, {r, 1}, 3, true}, 0);
      CHECK(!res.finite);
    }
  }
  SUBCASE("(A_5, 2, 2) gives 4") {
    CYResult r = scydim(a_t2(2, 2), 0);
    REQUIRE(r.finite);
    CHECK(r.value == 4);
    CHECK(r.solution_l == 1);
  }
  SUBCASE("(A_5, 1, 2) is infinite: gcd(4, 2) = 2") {
    CHECK(!scydim(a_t2(2, 1), 0).finite);
  }
  SUBCASE("(D_4, 2, 2) distinguishes characteristic 2") {
    CYResult p2 = scydim(d_t2(4, 2), 2);
    REQUIRE(p2.finite);
    CHECK(p2.value == 14);
    CHECK(!scydim(d_t2(4, 2), 0).finite);
    CHECK(!scydim(d_t2(4, 2), 3).finite);
  }
  SUBCASE("(D_5, 3, 2): odd r row gives 6") {
    CYResult r = scydim(d_t2(5, 3), 0);
    REQUIRE(r.finite);
    CHECK(r.value == 6);
  }
  SUBCASE("(E_6, 1, 2) gives 10") {
    CYResult r = scydim({TreeClass::E, 6, {1, 1}, 2, true}, 0);
    REQUIRE(r.finite);
    CHECK(r.value == 10);
    CHECK(r.solution_l == 5);
  }
  SUBCASE("(E_6, 2, 2) is infinite: gcd(6, 2) = 2") {
    CHECK(!scydim({TreeClass::E, 6, {2, 1}, 2, true}, 0).finite);
  }
}

TEST_CASE("torsion-1 rows") {
  SUBCASE("k[t]/t^3 shape: (A_2, 1/2, 1) gives 1") {
    CYResult r = scydim({TreeClass::A, 2, {1, 2}, 1, true}, 0);
    REQUIRE(r.finite);
    CHECK(r.value == 1);
    CHECK(r.row == "t1-row2");
  }
  SUBCASE("row 1 characteristic branch switches the answer shape") {
    // (D_4, 1, 1): normalized r = 5, odd; gcd(3, 5) = 1
    AsashibaType t{TreeClass::D, 4, {1, 1}, 1, true};
    CYResult p0 = scydim(t, 0);
    CYResult p2 = scydim(t, 2);
    REQUIRE(p0.finite);
    REQUIRE(p2.finite);
    CHECK(p0.value == 9);  // 1 + 2l with 5 | 6l + 1
    CHECK(p0.value % 2 == 1);
    CHECK(p2.value == 4);  // l with 5 | 3(l-1) + 1
  }
  SUBCASE("row 1 infinite branch") {
    // (D_4, 3, 1): normalized r = 15, gcd((m+1)/2, r) = gcd(3, 15) = 3
    AsashibaType t{TreeClass::D, 4, {3, 1}, 1, true};
    CHECK(!scydim(t, 0).finite);
  }
  SUBCASE("standard D_{3n} third-frequency types carry the normalization flag") {
    AsashibaType t{TreeClass::D, 6, {1, 3}, 1, true};  // m = 9, r = 3
    CYResult r = scydim(t, 0);
    REQUIRE(!r.flags.empty());
    CHECK(r.flags[0].find("assumed-normalization") != std::string::npos);
  }
}

TEST_CASE("every finite classifier result re-verifies and is minimal") {
  std::vector<std::string> patterns{"A:t=2", "D:t=2", "E6:t=2", "D4:t=3", "nonstd",
                                    "A:t=1", "D:t=1", "D3:t=1"};
  auto audit = [](const std::vector<SweepCell>& cells) {
    for (const SweepCell& cell : cells) {
      CHECK(cell.result.all_checks_pass());
      if (cell.result.finite && cell.result.congruence)
        CHECK(scan_min(*cell.result.congruence) == cell.result.solution_l);
    }
    return cells.size();
  };
  for (const std::string& pat : patterns) audit(sweep(pat, 1, 5, 1, 8, {0, 2, 3}));
  // the exceptional trees live at indices 6..8
  CHECK(audit(sweep("E:t=1", 6, 8, 1, 8, {0, 2, 3})) == 72);
}

TEST_CASE("finiteness is characterized by the gcd conditions") {
  for (int n = 1; n <= 5; ++n)
    for (int r = 1; r <= 8; ++r)
      for (long long p : {0LL, 2LL, 3LL}) {
        CHECK(scydim(a_t2(n, r), p).finite == (std::gcd(static_cast<long long>(r + n + 1), static_cast<long long>(2 * r)) == 1));
        if (n + 4 >= 4) {
          bool want = std::gcd(n + 3, r) == 1 && (r % 2 == 1 || p == 2);
          CHECK(scydim(d_t2(n + 4, r), p).finite == want);
        }
      }
}

TEST_CASE("sweep grids") {
  SUBCASE("the A-family grid has the expected size") {
    auto cells = sweep("A:t=2", 1, 4, 1, 6, {0, 2, 3});
    CHECK(cells.size() == 72);
  }
  SUBCASE("empty ranges give empty tables") {
    CHECK(sweep("A:t=2", 2, 1, 1, 6, {0}).empty());
  }
  SUBCASE("third-frequency cells reduce to integral shapes when 3 | r") {
    auto cells = sweep("D3:t=1", 2, 2, 1, 6, {0});
    CHECK(cells.size() == 6);
    for (const SweepCell& c : cells) {
      bool flagged = !c.result.flags.empty();
      CHECK(flagged == (c.type.frequency.num % 3 != 0));
    }
  }
}

TEST_CASE("classifier rejects inadmissible types") {
  CHECK_THROWS_AS(scydim({TreeClass::E, 9, {1, 1}, 1, true}, 0), BadParametersError);
  CHECK_THROWS_AS(scydim({TreeClass::A, 4, {1, 1}, 2, true}, 0), BadParametersError);
  CHECK_THROWS_AS(scydim({TreeClass::D, 4, {1, 1}, 5, true}, 0), BadParametersError);
}
