#pragma once

#include <string>

#include "qcy/errors.hpp"

namespace qcy {

enum class TreeClass { A, D, E };

struct Fraction {
  long long num = 0;
  long long den = 1;
  bool operator==(const Fraction& o) const { return num * o.den == o.num * den; }
};

/*
 * Derived-equivalence type (tree class, frequency, torsion) of a
 * self-injective algebra of finite representation type. Validation admits
 * exactly the nine shapes of the classification.
 */
struct AsashibaType {
  TreeClass tree = TreeClass::A;
  int index = 1;  // n in A_n / D_n / E_n
  Fraction frequency;
  int torsion = 1;
  bool standard = true;

  std::string to_string() const;
};

// m_Delta: n, 2n-3, 11, 17, 29 for A_n, D_n, E_6, E_7, E_8.
long long m_delta(TreeClass tree, int index);

// Throws BadParametersError unless the type is one of the nine admissible
// shapes; returns a short shape tag ("A-t1", "A-t2", ...).
std::string validate_asashiba(const AsashibaType& t);

// Type shorthand: A5:r=2:t=2, D6:r=1:t=2, D6:nonstd, E6:r=1:t=2,
// A5:f=3/5:t=1, D6:f=2/3:t=1, D4:r=7:t=3.
AsashibaType parse_type_shorthand(const std::string& text);

}  // namespace qcy
