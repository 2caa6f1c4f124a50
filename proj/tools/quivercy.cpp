#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qcy/pipeline.hpp"

namespace {

using namespace qcy;

struct GlobalOpts {
  long long characteristic = 0;
  bool json = false;
  bool stable_output = false;
  uint64_t seed = 20240501;
  long long dim_cap = 20000;
  int max_degree = 6;
};

Field field_of(const GlobalOpts& g) {
  return g.characteristic == 0 ? Field::rationals() : Field::fp(g.characteristic);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadParametersError("cannot open file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return text;
}

bool looks_like_file(const std::string& input) {
  return input.find('/') != std::string::npos || input.rfind(".alg") != std::string::npos ||
         std::ifstream(input).good();
}

// Either a family bundle (shorthand) or a bare algebra from a description
// file, with the fallback Frobenius search.
struct LoadedAlgebra {
  AlgebraPtr algebra;
  std::optional<FamilyBundle> bundle;
  std::optional<FrobeniusForm> eps;
  std::string source;
};

LoadedAlgebra load_algebra(const std::string& input, const GlobalOpts& g) {
  LoadedAlgebra out;
  if (!looks_like_file(input)) {
    FamilySpec spec = parse_family_shorthand(input);
    FamilyBundle b = construct_family(spec, field_of(g));
    out.algebra = b.algebra;
    out.eps = b.eps;
    out.bundle = std::move(b);
    out.source = "family " + input;
    return out;
  }
  AlgebraDescription d = parse_algebra_description(read_file(input));
  out.algebra = std::make_shared<BoundQuiverAlgebra>(
      BoundQuiverAlgebra::build(d.quiver, d.relations, d.field, d.bound));
  out.eps = find_frobenius_form(*out.algebra, g.seed);
  out.source = "file " + input;
  return out;
}

void emit(RunReport& rep, const GlobalOpts& g, std::chrono::steady_clock::time_point t0) {
  rep.stable_output = g.stable_output;
  rep.seed = g.seed;
  rep.elapsed_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  if (g.json) {
    std::cout << rep.dump();
    return;
  }
  std::cout << "== " << rep.command << " ==\n";
  std::cout << rep.results.dump(2) << "\n";
  for (auto& [name, ok] : rep.audits)
    std::cout << (ok ? "[ok]   " : "[FAIL] ") << name << "\n";
}

int run_construct(const std::string& input, const GlobalOpts& g) {
  auto t0 = std::chrono::steady_clock::now();
  LoadedAlgebra la = load_algebra(input, g);
  const BoundQuiverAlgebra& a = *la.algebra;
  RunReport rep;
  rep.command = "construct " + input;
  rep.field = a.field().describe();
  rep.results["source"] = la.source;
  rep.results["dim"] = a.dim();
  rep.results["loewy_length"] = a.loewy_length();
  rep.results["basis_by_length"] = a.basis_count_by_length();
  rep.results["vertices"] = a.quiver().num_vertices();
  rep.results["arrows"] = a.quiver().num_arrows();
  rep.audit("multiplication associative on all basis triples", a.verify_associativity());
  if (la.eps) {
    Matrix gram = gram_matrix(a, *la.eps);
    bool ok = gram.rank() == a.dim();
    rep.audit("Frobenius form nondegenerate", ok);
    rep.results["frobenius"] = ok ? "verified" : "degenerate";
    rep.results["symmetric"] = is_symmetric_form(a, *la.eps);
    if (ok) {
      AlgebraMorphism nu = nakayama_automorphism(la.algebra, *la.eps);
      rep.results["nakayama"] = morphism_on_generators(nu);
    }
  } else {
    rep.results["frobenius"] = "no nondegenerate form found";
  }
  if (la.bundle && !la.bundle->notes.empty()) rep.results["notes"] = la.bundle->notes;
  emit(rep, g, t0);
  return rep.all_audits_pass() ? 0 : 2;
}

int run_nakayama(const std::string& input, const GlobalOpts& g) {
  auto t0 = std::chrono::steady_clock::now();
  LoadedAlgebra la = load_algebra(input, g);
  if (!la.eps) throw DegenerateFormError("no Frobenius form available for " + input);
  RunReport rep;
  rep.command = "nakayama " + input;
  rep.field = la.algebra->field().describe();
  AlgebraMorphism nu = nakayama_automorphism(la.algebra, *la.eps);
  rep.results["nakayama"] = morphism_on_generators(nu);
  rep.results["identity"] = nu.is_identity();
  rep.audit("nu permutes the vertex idempotents", nu.vertex_permutation().has_value());
  emit(rep, g, t0);
  return rep.all_audits_pass() ? 0 : 2;
}

int run_scydim(const std::string& type_text, const std::string& sweep_pattern,
               const std::string& nrange, const std::string& rrange, const std::string& chars,
               const GlobalOpts& g) {
  auto t0 = std::chrono::steady_clock::now();
  RunReport rep;
  rep.field = std::to_string(g.characteristic);
  auto parse_range = [](const std::string& s, int dflt_lo, int dflt_hi) {
    if (s.empty()) return std::pair<int, int>{dflt_lo, dflt_hi};
    auto colon = s.find(':');
    if (colon == std::string::npos) {
      int v = std::stoi(s);
      return std::pair<int, int>{v, v};
    }
    return std::pair<int, int>{std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
  };
  if (!sweep_pattern.empty()) {
    rep.command = "scydim --sweep " + sweep_pattern;
    auto [nlo, nhi] = parse_range(nrange, 1, 4);
    auto [rlo, rhi] = parse_range(rrange, 1, 6);
    std::vector<long long> ps;
    std::string item;
    std::istringstream in(chars.empty() ? std::string("0,2,3") : chars);
    while (std::getline(in, item, ',')) ps.push_back(std::stoll(item));
    std::vector<SweepCell> cells = sweep(sweep_pattern, nlo, nhi, rlo, rhi, ps);
    Json grid = Json::array();
    bool all_ok = true;
    for (const SweepCell& c : cells) {
      Json cj = cy_result_json(c.result);
      cj["type"] = c.type.to_string();
      cj["char"] = c.char_p;
      grid.push_back(std::move(cj));
      all_ok = all_ok && c.result.all_checks_pass();
    }
    rep.results["cells"] = grid;
    rep.results["count"] = cells.size();
    rep.audit("every finite entry re-verifies its congruence and minimality", all_ok);
    emit(rep, g, t0);
    return rep.all_audits_pass() ? 0 : 2;
  }
  rep.command = "scydim " + type_text;
  AsashibaType t = parse_type_shorthand(type_text);
  CYResult res = scydim(t, g.characteristic);
  rep.results = cy_result_json(res);
  rep.results["type"] = t.to_string();
  rep.results["char"] = g.characteristic;
  rep.audit("classifier checks", res.all_checks_pass());
  emit(rep, g, t0);
  return rep.all_audits_pass() ? 0 : 2;
}

int run_verify(const std::string& family, const GlobalOpts& g) {
  auto t0 = std::chrono::steady_clock::now();
  FamilySpec spec = parse_family_shorthand(family);
  FamilyBundle b = construct_family(spec, field_of(g));
  VerifyOptions opt;
  opt.max_degree = g.max_degree;
  opt.dim_cap = g.dim_cap;
  opt.seed = g.seed;
  VerifyOutcome o = run_verify(b, g.characteristic, opt);
  RunReport rep;
  rep.command = "verify " + family;
  rep.field = b.algebra->field().describe();
  rep.results = verify_outcome_json(o, b);
  for (auto& [n, ok] : o.audits) rep.audit(n, ok);
  rep.audit("no contradiction between brute force and classifier", o.consistent);
  emit(rep, g, t0);
  return rep.all_audits_pass() ? 0 : 2;
}

int run_stable_hom(const std::string& input, const std::string& igens, const std::string& jgens,
                   const GlobalOpts& g) {
  auto t0 = std::chrono::steady_clock::now();
  LoadedAlgebra la = load_algebra(input, g);
  const AlgebraPtr& a = la.algebra;
  auto ideal_from = [&](const std::string& text) {
    std::vector<Matrix> gens;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
      if (item.find_first_not_of(" \t") == std::string::npos) continue;
      gens.push_back(a->element_from_terms(parse_element_expression(item)));
    }
    return RightIdeal(a, gens);
  };
  RightIdeal I = ideal_from(igens), J = ideal_from(jgens);
  StableHom sh = stable_hom_cyclic(a, I, J);
  RunReport rep;
  rep.command = "stable-hom " + input;
  rep.field = a->field().describe();
  rep.results["dim_I"] = I.span().dim();
  rep.results["dim_J"] = J.span().dim();
  rep.results["stable_hom_dim"] = sh.dim;
  Json reps = Json::array();
  for (const Matrix& c : sh.representatives) reps.push_back(a->element_to_string(c));
  rep.results["representatives"] = reps;
  rep.audit("I closed under right multiplication", I.verify_right_closed());
  rep.audit("J closed under right multiplication", J.verify_right_closed());
  emit(rep, g, t0);
  return rep.all_audits_pass() ? 0 : 2;
}

int run_certify(const std::string& input, const std::string& map_text, const GlobalOpts& g) {
  auto t0 = std::chrono::steady_clock::now();
  LoadedAlgebra la = load_algebra(input, g);
  const AlgebraPtr& a = la.algebra;
  std::map<int, Matrix> arrow_images;
  std::map<int, Matrix> vertex_images;
  for (auto& [gen, expr] : parse_generator_map(map_text)) {
    Matrix img = a->element_from_terms(expr);
    if (gen.rfind("e_", 0) == 0)
      vertex_images.insert_or_assign(a->quiver().vertex(gen.substr(2)), img);
    else
      arrow_images.insert_or_assign(a->quiver().arrow_id(gen), img);
  }
  for (int ar = 0; ar < a->quiver().num_arrows(); ++ar)
    if (!arrow_images.count(ar))
      arrow_images.insert_or_assign(ar, a->unit(a->arrow_index(ar)));  // unnamed arrows stay fixed
  AlgebraMorphism phi = [&] {
    try {
      return AlgebraMorphism::from_generator_images(a, arrow_images, vertex_images);
    } catch (const NotMultiplicativeError& e) {
      throw BadParametersError(std::string("not an algebra morphism: ") + e.what());
    } catch (const NotInvertibleError& e) {
      throw BadParametersError(std::string("not an automorphism: ") + e.what());
    }
  }();
  StablyInnerVerdict v = stably_inner_certificate(phi, g.seed);
  RunReport rep;
  rep.command = "certify " + input;
  rep.field = a->field().describe();
  rep.results["map"] = morphism_on_generators(phi);
  rep.results["verdict"] = to_string(v.status);
  rep.results["detail"] = v.detail;
  if (v.witness) rep.results["witness"] = a->element_to_string(*v.witness);
  rep.audit("certificate computed", true);
  emit(rep, g, t0);
  return rep.all_audits_pass() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-injective bound quiver algebras: construction, stable Calabi-Yau "
               "dimension by classification and by bimodule syzygies, certificates"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOpts g;
  app.add_option("--char,--field", g.characteristic, "field characteristic (0 = rationals)");
  app.add_flag("--json", g.json, "print the full JSON report");
  app.add_flag("--stable-output", g.stable_output, "omit timings for byte-identical reruns");
  app.add_option("--seed", g.seed, "seed for randomized searches");
  app.add_option("--dim-cap", g.dim_cap, "cap on intermediate bimodule dimensions");
  app.add_option("--max-degree", g.max_degree, "highest syzygy degree to explore");

  std::string input, type_text, sweep_pattern, nrange, rrange, chars, igens, jgens, map_text;

  CLI::App* c_construct = app.add_subcommand("construct", "build an algebra and report it");
  c_construct->add_option("input", input, "family shorthand or description file")->required();

  CLI::App* c_nakayama = app.add_subcommand("nakayama", "Nakayama automorphism on generators");
  c_nakayama->add_option("input", input)->required();

  CLI::App* c_scydim = app.add_subcommand("scydim", "stable Calabi-Yau dimension by the table");
  c_scydim->add_option("type", type_text, "type shorthand, e.g. A5:r=2:t=2 or D6:nonstd");
  c_scydim->add_option("--sweep", sweep_pattern, "row pattern, e.g. A:t=2");
  c_scydim->add_option("--n", nrange, "n range lo:hi for sweeps");
  c_scydim->add_option("--r", rrange, "r range lo:hi for sweeps");
  c_scydim->add_option("--chars", chars, "comma list of characteristics for sweeps");

  CLI::App* c_verify = app.add_subcommand(
      "verify", "brute-force resolution walk cross-checked against the classifier");
  c_verify->add_option("family", input, "family shorthand")->required();

  CLI::App* c_sh = app.add_subcommand("stable-hom", "stable homs between cyclic modules");
  c_sh->add_option("input", input)->required();
  c_sh->add_option("--I", igens, "comma list of right-ideal generators")->required();
  c_sh->add_option("--J", jgens, "comma list of right-ideal generators")->required();

  CLI::App* c_cert = app.add_subcommand("certify", "stably-inner certificate for a morphism");
  c_cert->add_option("input", input)->required();
  c_cert->add_option("--map", map_text, "generator images, e.g. \"t -> t + t^3\"")->required();

  try {
    app.parse(argc, argv);
    if (c_construct->parsed()) return run_construct(input, g);
    if (c_nakayama->parsed()) return run_nakayama(input, g);
    if (c_scydim->parsed()) return run_scydim(type_text, sweep_pattern, nrange, rrange, chars, g);
    if (c_verify->parsed()) return run_verify(input, g);
    if (c_sh->parsed()) return run_stable_hom(input, igens, jgens, g);
    if (c_cert->parsed()) return run_certify(input, map_text, g);
    return 1;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 3;
  } catch (const InconsistencyError& e) {
    std::cerr << "mathematical inconsistency: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const BoundTooSmallError& e) {
    std::cerr << "bound too small: " << e.what() << " (retry with bound >= "
              << e.suggested_bound << ")\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
