#include "qcy/pipeline.hpp"

namespace qcy {

std::string morphism_on_generators(const AlgebraMorphism& phi) {
  const BoundQuiverAlgebra& a = *phi.algebra();
  const Quiver& q = a.quiver();
  std::string out;
  for (int v = 0; v < q.num_vertices(); ++v) {
    Matrix img = phi.matrix().column(a.idempotent_index(v));
    if (img.equals(a.unit(a.idempotent_index(v)))) continue;  // fixed points are noise
    if (!out.empty()) out += "; ";
    out += "e_" + q.vertex_label(v) + " -> " + a.element_to_string(img);
  }
  for (int ar = 0; ar < q.num_arrows(); ++ar) {
    Matrix img = phi.matrix().column(a.arrow_index(ar));
    if (img.equals(a.unit(a.arrow_index(ar)))) continue;
    if (!out.empty()) out += "; ";
    out += q.arrow(ar).label + " -> " + a.element_to_string(img);
  }
  return out.empty() ? "identity on generators" : out;
}

VerifyOutcome run_verify(const FamilyBundle& bundle, long long char_p, const VerifyOptions& opt) {
  VerifyOutcome out;
  out.spec = bundle.spec;
  const AlgebraPtr& a = bundle.algebra;
  const Field& f = a->field();

  // Frobenius / Nakayama audits
  AlgebraMorphism nu = nakayama_automorphism(a, bundle.eps);
  {
    bool identity_ok = true;
    for (int i = 0; i < a->dim() && identity_ok; ++i)
      for (int j = 0; j < a->dim(); ++j) {
        // eps(b_i b_j) = eps(b_j nu(b_i))
        Scalar lhs = f.zero(), rhs = f.zero();
        for (auto& [k, c] : a->mult(i, j)) lhs = f.add(lhs, f.mul(c, bundle.eps.values.get(0, k)));
        Matrix nui = nu.matrix().column(i);
        Matrix prod = a->mul_elements(a->unit(j), nui);
        for (int k = 0; k < a->dim(); ++k)
          rhs = f.add(rhs, f.mul(prod.get(k, 0), bundle.eps.values.get(0, k)));
        if (!f.equal(lhs, rhs)) {
          identity_ok = false;
          break;
        }
      }
    out.audits.emplace_back("eps(ab) = eps(b nu(a)) on all basis pairs", identity_ok);
  }
  out.audits.emplace_back("nu permutes the vertex idempotents",
                          nu.vertex_permutation().has_value());
  out.audits.emplace_back("left socle equals right socle",
                          a->socle(Side::Left).same_space(a->socle(Side::Right)));
  if (is_symmetric_form(*a, bundle.eps))
    out.audits.emplace_back("symmetric form gives identity Nakayama", nu.is_identity());

  // resolution walk
  Bimodule cur = regular_bimodule(a);
  for (int m = 0; m <= opt.max_degree; ++m) {
    SyzygyStep step = [&] {
      try {
        return syzygy_step(cur, opt.dim_cap);
      } catch (const ResourceLimitError& e) {
        throw ResourceLimitError(std::string(e.what()) + " at resolution degree " +
                                 std::to_string(m));
      }
    }();
    VerifyDegreeRow row;
    row.degree = m;
    row.pattern = step.pattern;
    row.cover_dim = step.cover_dim;
    row.syzygy_dim = step.kernel.dim();
    try {
      CoverPattern expected = expected_resolution_term(bundle, m);
      row.pattern_matches = expected == step.pattern;
      out.audits.emplace_back(
          "cover pattern of Omega^" + std::to_string(m) + " matches the closed form",
          *row.pattern_matches);
    } catch (const UnsupportedTypeError&) {
      row.pattern_matches = std::nullopt;
    }
    row.twist = recognize_twist(step.kernel, opt.seed);
    if (row.twist.status == TwistRecognition::Status::Twist) {
      AlgebraMorphism target = nu.compose(*row.twist.phi);
      row.verdict = stably_inner_certificate(target, opt.seed);
      if (row.verdict->confirmed() && !out.brute_dim) out.brute_dim = m;
    }
    out.rows.push_back(std::move(row));
    cur = std::move(step.kernel);
  }

  // classifier adjudication
  auto type = bundle.spec.type();
  if (!type) {
    out.adjudication = out.brute_dim
                           ? "brute force proves stable Calabi-Yau dimension " +
                                 std::to_string(*out.brute_dim) +
                                 "; classifier not applicable to the reference family k[t]/t^n"
                           : "no dimension confirmed up to the explored degree; classifier not "
                             "applicable to the reference family k[t]/t^n";
    return out;
  }
  out.classifier = scydim(*type, char_p);
  const CYResult& cls = *out.classifier;

  auto uncertified_before = [&](int upto) {
    std::vector<int> ds;
    for (const VerifyDegreeRow& r : out.rows) {
      if (r.degree >= upto) break;
      if (r.verdict && !r.verdict->confirmed() && !r.verdict->refuted()) ds.push_back(r.degree);
    }
    return ds;
  };

  if (cls.finite) {
    for (const VerifyDegreeRow& r : out.rows)
      if (r.verdict && r.verdict->refuted() && r.degree == cls.value) {
        out.consistent = false;
        out.adjudication = "contradiction: classifier value " + std::to_string(cls.value) +
                           " is refuted by the certificate at that degree";
        return out;
      }
    if (out.brute_dim) {
      if (*out.brute_dim == cls.value) {
        auto open = uncertified_before(*out.brute_dim);
        out.adjudication = open.empty()
                               ? "agreement: brute force and classifier both give " +
                                     std::to_string(cls.value)
                               : "agreement: both give " + std::to_string(cls.value) +
                                     "; earlier twist degrees left Inconclusive are adjudicated "
                                     "not stably inner by the classifier";
      } else if (*out.brute_dim < cls.value) {
        out.consistent = false;
        out.adjudication = "contradiction: brute force confirms " +
                           std::to_string(*out.brute_dim) + " but the classifier gives " +
                           std::to_string(cls.value);
      } else {
        // a confirmed degree above the classifier value without a confirmed
        // smaller one is consistent only if the smaller degree was not refuted
        out.adjudication = "classifier gives " + std::to_string(cls.value) +
                           "; first certified degree is " + std::to_string(*out.brute_dim) +
                           " (smaller degrees uncertified)";
      }
    } else if (cls.value > opt.max_degree) {
      out.adjudication = "classifier gives " + std::to_string(cls.value) +
                         ", beyond the explored degree range (consistent)";
    } else {
      const VerifyDegreeRow& r = out.rows[cls.value];
      if (r.twist.status == TwistRecognition::Status::Twist) {
        out.adjudication = "classifier gives " + std::to_string(cls.value) +
                           "; twist found there but the certificate stayed Inconclusive "
                           "(consistent, classifier adjudicates)";
      } else if (r.twist.status == TwistRecognition::Status::SearchFailed) {
        out.adjudication = "classifier gives " + std::to_string(cls.value) +
                           "; twist search failed at that degree (no contradiction claimed)";
      } else {
        out.consistent = false;
        out.adjudication = "contradiction: classifier gives " + std::to_string(cls.value) +
                           " but Omega^" + std::to_string(cls.value + 1) + " is not a twist";
      }
    }
  } else {
    if (out.brute_dim) {
      out.consistent = false;
      out.adjudication = "contradiction: classifier gives infinity but degree " +
                         std::to_string(*out.brute_dim) + " was confirmed";
    } else {
      out.adjudication = "classifier gives infinity; no degree was confirmed (consistent)";
    }
  }
  return out;
}

Json cover_pattern_json(const CoverPattern& p, const Quiver& q) {
  Json arr = Json::array();
  for (auto& [k, c] : p.mult)
    arr.push_back(Json::array({q.vertex_label(k.first), q.vertex_label(k.second), c}));
  return arr;
}

Json cy_result_json(const CYResult& r) {
  Json j;
  j["result"] = r.finite ? Json(r.value) : Json("infinity");
  j["row"] = r.row;
  if (r.solution_l) j["l"] = *r.solution_l;
  if (r.congruence) j["congruence"] = r.congruence->to_string();
  if (!r.flags.empty()) j["flags"] = r.flags;
  Json checks = Json::array();
  for (auto& [n, ok] : r.checks) checks.push_back(Json{{"check", n}, {"ok", ok}});
  j["checks"] = checks;
  return j;
}

Json verify_outcome_json(const VerifyOutcome& o, const FamilyBundle& b) {
  const Quiver& q = b.algebra->quiver();
  Json j;
  j["family"] = o.spec.shorthand();
  j["algebra_dim"] = b.algebra->dim();
  j["period"] = b.period;
  if (!b.notes.empty()) j["notes"] = b.notes;
  Json rows = Json::array();
  for (const VerifyDegreeRow& r : o.rows) {
    Json rj;
    rj["degree"] = r.degree;
    rj["cover_pattern"] = cover_pattern_json(r.pattern, q);
    rj["cover_dim"] = r.cover_dim;
    rj["syzygy_dim"] = r.syzygy_dim;
    if (r.pattern_matches) rj["pattern_matches_closed_form"] = *r.pattern_matches;
    switch (r.twist.status) {
      case TwistRecognition::Status::Twist: {
        rj["twist"] = morphism_on_generators(*r.twist.phi);
        const Matrix& m = r.twist.phi->matrix();
        Json rows_json = Json::array();
        for (int i = 0; i < m.rows(); ++i) {
          Json row = Json::array();
          for (int j = 0; j < m.cols(); ++j)
            row.push_back(m.field().to_string(m.get(i, j)));
          rows_json.push_back(std::move(row));
        }
        rj["twist_matrix"] = std::move(rows_json);
        break;
      }
      case TwistRecognition::Status::NotATwist:
        rj["twist"] = nullptr;
        break;
      case TwistRecognition::Status::SearchFailed:
        rj["twist"] = "search failed: " + r.twist.detail;
        break;
    }
    if (r.verdict) {
      rj["verdict"] = to_string(r.verdict->status);
      if (r.verdict->witness)
        rj["witness"] = b.algebra->element_to_string(*r.verdict->witness);
    }
    rows.push_back(std::move(rj));
  }
  j["resolution"] = rows;
  if (o.brute_dim) j["brute_force_dimension"] = *o.brute_dim;
  if (o.classifier) j["classifier"] = cy_result_json(*o.classifier);
  j["adjudication"] = o.adjudication;
  j["consistent"] = o.consistent;
  return j;
}

}  // namespace qcy
