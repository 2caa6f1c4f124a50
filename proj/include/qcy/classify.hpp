#pragma once

#include <optional>
#include <vector>

#include "qcy/asashiba.hpp"

namespace qcy {

/*
 * Find the least l in the stated interval with modulus | a*l - b. Interval
 * bounds are carried verbatim (strict or not) because the table rows use
 * different conventions.
 */
struct CongruenceProblem {
  long long a = 0;
  long long b = 0;
  long long modulus = 1;
  long long lo = 0;
  long long hi = 0;
  bool lo_strict = false;
  bool hi_strict = false;

  bool admits(long long l) const;
  std::string to_string() const;
};

std::optional<long long> solve_min_congruence(const CongruenceProblem& p);

struct CYResult {
  bool finite = false;
  long long value = -1;  // meaningful when finite
  std::string row;       // table row identifier
  std::optional<long long> solution_l;
  std::optional<CongruenceProblem> congruence;
  std::vector<std::string> flags;
  std::vector<std::pair<std::string, bool>> checks;

  bool all_checks_pass() const {
    for (auto& [n, ok] : checks)
      if (!ok) return false;
    return true;
  }
};

// The classification table: (type, characteristic) -> stable Calabi-Yau
// dimension by gcd tests and minimal congruence solutions. char_p = 0 means
// the rationals and counts as "p != 2" wherever a row distinguishes p.
CYResult scydim(const AsashibaType& t, long long char_p);

struct SweepCell {
  AsashibaType type;
  long long char_p;
  CYResult result;
};

// Grid evaluation over a row pattern: "A:t=2", "D:t=2", "E6:t=2", "D4:t=3",
// "nonstd", "A:t=1", "D:t=1", "D3:t=1", "E:t=1". Cells whose parameters are
// inadmissible are skipped.
std::vector<SweepCell> sweep(const std::string& pattern, int n_lo, int n_hi, int r_lo, int r_hi,
                             const std::vector<long long>& chars);

}  // namespace qcy
