#pragma once

#include "qcy/asashiba.hpp"
#include "qcy/bimodule.hpp"

namespace qcy {

enum class FamilyKind {
  AOddTorsion2,    // (A_{2n+1}, r, 2)
  DTorsion2,       // (D_n, r, 2)
  NonstandardD3n,  // nonstandard (D_{3n}, 1/3, 1), characteristic 2
  TruncatedPoly,   // k[t]/t^n
};

struct FamilySpec {
  FamilyKind kind;
  int n = 0;
  int r = 0;  // unused for nonstandard and truncated

  std::optional<AsashibaType> type() const;  // none for k[t]/t^n
  std::string shorthand() const;
};

// Family shorthand: A<2n+1>:r=<r>:t=2 | D<n>:r=<r>:t=2 | D<3n>:nonstd | trunc:<n>
FamilySpec parse_family_shorthand(const std::string& text);

/*
 * A constructed family instance: the bound quiver algebra with the
 * automorphism sigma, the Frobenius form, the resolution quasi-period and
 * the named-vertex dictionary.
 */
struct FamilyBundle {
  FamilySpec spec;
  AlgebraPtr algebra;
  AlgebraMorphism sigma;
  FrobeniusForm eps;
  int period = 0;
  std::map<std::string, int> vertex_index;
  std::vector<std::string> notes;  // normalization flags surfaced in reports
};

FamilyBundle construct_family(const FamilySpec& spec, const Field& field);

// Closed-form resolution term Q_degree as a multiset of vertex pairs, with
// sigma applied to first indices beyond one quasi-period. Refuses family
// parities for which the closed forms are not stated.
CoverPattern expected_resolution_term(const FamilyBundle& b, int degree);

// The explicit invertible element conjugating to nu o sigma^l for the
// (A_{2n+1}, r, 2) family; verified before returning.
Matrix witness_inner_element(const FamilyBundle& b, int l);

}  // namespace qcy
