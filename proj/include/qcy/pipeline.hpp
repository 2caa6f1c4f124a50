#pragma once

#include "qcy/classify.hpp"
#include "qcy/families.hpp"
#include "qcy/report.hpp"

namespace qcy {

struct VerifyOptions {
  int max_degree = 6;
  long long dim_cap = 20000;
  uint64_t seed = 20240501;
};

struct VerifyDegreeRow {
  int degree;           // this row is about Omega^{degree+1}
  CoverPattern pattern;  // cover pattern of Omega^degree
  std::optional<bool> pattern_matches;  // against the closed-form term
  int cover_dim = 0;
  int syzygy_dim = 0;
  TwistRecognition twist{TwistRecognition::Status::NotATwist, std::nullopt, ""};
  std::optional<StablyInnerVerdict> verdict;
};

struct VerifyOutcome {
  FamilySpec spec;
  std::vector<VerifyDegreeRow> rows;
  std::optional<int> brute_dim;  // least degree with a confirmed certificate
  std::optional<CYResult> classifier;
  std::string adjudication;
  bool consistent = true;
  std::vector<std::pair<std::string, bool>> audits;
};

/*
 * Construction + Frobenius/Nakayama audits + brute-force resolution walk
 * with closed-form pattern comparison + classifier adjudication. Shared by
 * the command line tool and the acceptance suite.
 */
VerifyOutcome run_verify(const FamilyBundle& bundle, long long char_p, const VerifyOptions& opt);

// Readable generator images, e.g. "e_1 -> e_4; a1,0 -> -a4,0".
std::string morphism_on_generators(const AlgebraMorphism& phi);

Json cover_pattern_json(const CoverPattern& p, const Quiver& q);
Json verify_outcome_json(const VerifyOutcome& o, const FamilyBundle& b);
Json cy_result_json(const CYResult& r);

}  // namespace qcy
