#include "qcy/families.hpp"

#include <numeric>

namespace qcy {

// ---------------------------------------------------------------------------
// Asashiba types

std::string AsashibaType::to_string() const {
  std::string tc = tree == TreeClass::A ? "A" : tree == TreeClass::D ? "D" : "E";
  std::string f = frequency.den == 1 ? std::to_string(frequency.num)
                                     : std::to_string(frequency.num) + "/" +
                                           std::to_string(frequency.den);
  return "(" + tc + std::to_string(index) + ", " + f + ", " + std::to_string(torsion) + ")" +
         (standard ? "" : " nonstandard");
}

long long m_delta(TreeClass tree, int index) {
  switch (tree) {
    case TreeClass::A:
      return index;
    case TreeClass::D:
      return 2LL * index - 3;
    case TreeClass::E:
      if (index == 6) return 11;
      if (index == 7) return 17;
      if (index == 8) return 29;
      throw BadParametersError("E index must be 6, 7 or 8");
  }
  throw BadParametersError("unknown tree class");
}

std::string validate_asashiba(const AsashibaType& t) {
  const Fraction& f = t.frequency;
  if (f.num <= 0 || f.den <= 0) throw BadParametersError("frequency must be positive");
  auto integral = [&]() { return f.num % f.den == 0; };
  long long r_times_m = f.num * m_delta(t.tree, t.index);
  if (r_times_m % f.den != 0)
    throw BadParametersError("frequency * m_Delta must be a positive integer");
  if (!t.standard) {
    if (t.tree != TreeClass::D || t.index % 3 != 0 || t.index < 6 || t.torsion != 1 ||
        !(f == Fraction{1, 3}))
      throw BadParametersError("nonstandard types are (D_{3n}, 1/3, 1), n >= 2");
    return "D3n-nonstd";
  }
  switch (t.torsion) {
    case 1:
      if (t.tree == TreeClass::A && t.index >= 1 && f.den == t.index) return "A-t1";
      if (t.tree == TreeClass::A && t.index >= 1) {
        // allow any representation whose frequency has r/n form after scaling
        if ((f.num * t.index) % f.den == 0) return "A-t1";
      }
      if (t.tree == TreeClass::D && t.index >= 6 && t.index % 3 == 0 && f.den == 3 &&
          f.num % 3 != 0)
        return "D3n-t1";
      if (t.tree == TreeClass::D && t.index >= 4 && integral()) return "D-t1";
      if (t.tree == TreeClass::E && t.index >= 6 && t.index <= 8 && integral()) return "E-t1";
      break;
    case 2:
      if (!integral()) break;
      if (t.tree == TreeClass::A && t.index >= 3 && t.index % 2 == 1) return "A-t2";
      if (t.tree == TreeClass::D && t.index >= 4) return "D-t2";
      if (t.tree == TreeClass::E && t.index == 6) return "E6-t2";
      break;
    case 3:
      if (t.tree == TreeClass::D && t.index == 4 && integral()) return "D4-t3";
      break;
    default:
      break;
  }
  throw BadParametersError("type is not one of the nine admissible shapes: " + t.to_string());
}

namespace {

struct ShorthandParts {
  char tree;
  int index;
  std::map<std::string, std::string> kv;
  bool nonstd = false;
};

ShorthandParts split_shorthand(const std::string& text) {
  ShorthandParts out;
  std::vector<std::string> parts;
  size_t at = 0;
  while (at <= text.size()) {
    size_t colon = text.find(':', at);
    if (colon == std::string::npos) {
      parts.push_back(text.substr(at));
      break;
    }
    parts.push_back(text.substr(at, colon - at));
    at = colon + 1;
  }
  if (parts.empty() || parts[0].size() < 2) throw BadParametersError("bad shorthand: " + text);
  out.tree = parts[0][0];
  try {
    out.index = std::stoi(parts[0].substr(1));
  } catch (...) {
    throw BadParametersError("bad tree index in: " + text);
  }
  for (size_t k = 1; k < parts.size(); ++k) {
    if (parts[k] == "nonstd") {
      out.nonstd = true;
      continue;
    }
    auto eq = parts[k].find('=');
    if (eq == std::string::npos) throw BadParametersError("bad shorthand field: " + parts[k]);
    out.kv[parts[k].substr(0, eq)] = parts[k].substr(eq + 1);
  }
  return out;
}

}  // namespace

AsashibaType parse_type_shorthand(const std::string& text) {
  ShorthandParts p = split_shorthand(text);
  AsashibaType t;
  t.tree = p.tree == 'A' ? TreeClass::A : p.tree == 'D' ? TreeClass::D : TreeClass::E;
  if (p.tree != 'A' && p.tree != 'D' && p.tree != 'E')
    throw BadParametersError("tree class must be A, D or E: " + text);
  t.index = p.index;
  if (p.nonstd) {
    t.standard = false;
    t.torsion = 1;
    t.frequency = {1, 3};
    validate_asashiba(t);
    return t;
  }
  t.torsion = p.kv.count("t") ? std::stoi(p.kv.at("t")) : 1;
  if (p.kv.count("f")) {
    const std::string& f = p.kv.at("f");
    auto slash = f.find('/');
    t.frequency = slash == std::string::npos
                      ? Fraction{std::stoll(f), 1}
                      : Fraction{std::stoll(f.substr(0, slash)), std::stoll(f.substr(slash + 1))};
  } else if (p.kv.count("r")) {
    long long r = std::stoll(p.kv.at("r"));
    // torsion-1 A-types are listed as (A_n, r/n, 1); the rest carry r itself
    t.frequency = (t.torsion == 1 && t.tree == TreeClass::A) ? Fraction{r, t.index} : Fraction{r, 1};
  } else {
    throw BadParametersError("shorthand needs r= or f=: " + text);
  }
  validate_asashiba(t);
  return t;
}

// ---------------------------------------------------------------------------
// Family specs

std::optional<AsashibaType> FamilySpec::type() const {
  switch (kind) {
    case FamilyKind::AOddTorsion2:
      return AsashibaType{TreeClass::A, 2 * n + 1, {r, 1}, 2, true};
    case FamilyKind::DTorsion2:
      return AsashibaType{TreeClass::D, n, {r, 1}, 2, true};
    case FamilyKind::NonstandardD3n:
      return AsashibaType{TreeClass::D, 3 * n, {1, 3}, 1, false};
    case FamilyKind::TruncatedPoly:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string FamilySpec::shorthand() const {
  switch (kind) {
    case FamilyKind::AOddTorsion2:
      return "A" + std::to_string(2 * n + 1) + ":r=" + std::to_string(r) + ":t=2";
    case FamilyKind::DTorsion2:
      return "D" + std::to_string(n) + ":r=" + std::to_string(r) + ":t=2";
    case FamilyKind::NonstandardD3n:
      return "D" + std::to_string(3 * n) + ":nonstd";
    case FamilyKind::TruncatedPoly:
      return "trunc:" + std::to_string(n);
  }
  return "?";
}

FamilySpec parse_family_shorthand(const std::string& text) {
  if (text.rfind("trunc:", 0) == 0) {
    int n = 0;
    try {
      n = std::stoi(text.substr(6));
    } catch (...) {
      throw BadParametersError("bad trunc shorthand: " + text);
    }
    if (n < 2) throw BadParametersError("trunc:<n> needs n >= 2");
    return FamilySpec{FamilyKind::TruncatedPoly, n, 0};
  }
  ShorthandParts p = split_shorthand(text);
  if (p.nonstd) {
    if (p.tree != 'D' || p.index % 3 != 0 || p.index < 6)
      throw BadParametersError("nonstandard families are D<3n>:nonstd, n >= 2");
    return FamilySpec{FamilyKind::NonstandardD3n, p.index / 3, 0};
  }
  if (!p.kv.count("r") || !p.kv.count("t") || p.kv.at("t") != "2")
    throw BadParametersError("constructible families need :r=<r>:t=2 or :nonstd — got " + text);
  int r = std::stoi(p.kv.at("r"));
  if (r < 1) throw BadParametersError("r must be >= 1");
  if (p.tree == 'A') {
    if (p.index < 3 || p.index % 2 == 0)
      throw BadParametersError("A-family index must be odd and >= 3");
    return FamilySpec{FamilyKind::AOddTorsion2, (p.index - 1) / 2, r};
  }
  if (p.tree == 'D') {
    if (p.index < 4) throw BadParametersError("D-family index must be >= 4");
    return FamilySpec{FamilyKind::DTorsion2, p.index, r};
  }
  throw UnsupportedTypeError("no constructible family for tree class E");
}

// ---------------------------------------------------------------------------
// Construction

namespace {

long long res1(long long x, long long m) {  // canonical residue in [1, m]
  long long r = x % m;
  return r <= 0 ? r + m : r;
}

// whether i is congruent mod m to some integer in [lo, hi]
bool in_window_mod(long long i, long long lo, long long hi, long long m) {
  for (long long t = lo; t <= hi; ++t)
    if (res1(i, m) == res1(t, m)) return true;
  return false;
}

BoundQuiverAlgebra build_with_retry(const Quiver& q, const std::vector<Relation>& rels,
                                    const Field& f, int bound) {
  for (int attempt = 0; attempt < 3; ++attempt) {
    try {
      return BoundQuiverAlgebra::build(q, rels, f, bound);
    } catch (const BoundTooSmallError& e) {
      bound = std::max(e.suggested_bound, 2 * bound);
    }
  }
  return BoundQuiverAlgebra::build(q, rels, f, bound);
}

struct AFamilyNames {
  int n, r;
  std::map<std::string, int>* index;
  const Quiver* q;
  int plain(long long i) const { return q->vertex(std::to_string(res1(i, r))); }
  int hat(long long i, int j) const {
    return q->vertex("h" + std::to_string(res1(i, 2 * r)) + "," + std::to_string(j));
  }
  std::string arrow(long long i, int j) const {
    return "a" + std::to_string(res1(i, 2 * r)) + "," + std::to_string(j);
  }
};

FamilyBundle construct_a_family(const FamilySpec& spec, const Field& field) {
  const int n = spec.n, r = spec.r;
  Quiver q;
  std::map<std::string, int> vindex;
  for (int i = 1; i <= r; ++i) vindex[std::to_string(i)] = q.add_vertex(std::to_string(i));
  for (int i = 1; i <= 2 * r; ++i)
    for (int j = 1; j <= n; ++j) {
      std::string lbl = "h" + std::to_string(i) + "," + std::to_string(j);
      vindex[lbl] = q.add_vertex(lbl);
    }
  AFamilyNames nm{n, r, &vindex, &q};
  for (int i = 1; i <= 2 * r; ++i) {
    q.add_arrow(nm.arrow(i, 0), nm.plain(i), nm.hat(i, 1));
    for (int j = 1; j <= n - 1; ++j) q.add_arrow(nm.arrow(i, j), nm.hat(i, j), nm.hat(i, j + 1));
    q.add_arrow(nm.arrow(i, n), nm.hat(i, n), nm.plain(i + 1));
  }

  std::vector<Relation> rels;
  auto path_of = [&](const std::vector<std::pair<long long, int>>& seq) {
    std::vector<int> ids;
    for (auto& [i, j] : seq) ids.push_back(q.arrow_id(nm.arrow(i, j)));
    return make_path(q, ids);
  };
  const Scalar one = field.one();
  for (int i = 1; i <= 2 * r; ++i)
    rels.push_back(Relation{{{one, path_of({{i, n}, {i + r + 1, 0}})}}});
  for (int i = 1; i <= r; ++i) {
    std::vector<std::pair<long long, int>> t1, t2;
    for (int j = 0; j <= n; ++j) {
      t1.push_back({i, j});
      t2.push_back({i + r, j});
    }
    rels.push_back(Relation{{{one, path_of(t1)}, {one, path_of(t2)}}});
  }
  for (int i = 1; i <= 2 * r; ++i)
    for (int j = 1; j <= n - 1; ++j) {
      std::vector<std::pair<long long, int>> seq;
      for (int k = j; k <= n; ++k) seq.push_back({i, k});
      for (int k = 0; k <= j; ++k) seq.push_back({i + 1, k});
      rels.push_back(Relation{{{one, path_of(seq)}}});
    }

  auto algebra = std::make_shared<BoundQuiverAlgebra>(
      build_with_retry(q, rels, field, n + 4));

  // sigma on generators, with the alternating sign windows
  std::map<int, Matrix> vimg, aimg;
  const Quiver& Q = algebra->quiver();
  for (int i = 1; i <= r; ++i)
    vimg.insert_or_assign(nm.plain(i), algebra->unit(algebra->idempotent_index(nm.plain(i + n + 1))));
  for (int i = 1; i <= 2 * r; ++i)
    for (int j = 1; j <= n; ++j)
      vimg.insert_or_assign(nm.hat(i, j), algebra->unit(algebra->idempotent_index(nm.hat(i + r + n + 1, j))));
  for (int i = 1; i <= 2 * r; ++i) {
    for (int j = 0; j <= n; ++j) {
      bool minus = false;
      if (j == 0) minus = in_window_mod(i, 0, r - 1, 2 * r);
      if (j == n) minus = in_window_mod(i, -1, r - 2, 2 * r);
      Matrix img = algebra->unit(algebra->arrow_index(Q.arrow_id(nm.arrow(i + r + n + 1, j))));
      aimg.insert_or_assign(Q.arrow_id(nm.arrow(i, j)), minus ? img.neg() : img);
    }
  }
  AlgebraMorphism sigma = AlgebraMorphism::from_generator_images(algebra, aimg, vimg);

  // Frobenius form: -1 on full plain-to-plain paths with hat window [-1, r-2],
  // +1 on the other basis paths of length n+1, 0 elsewhere
  FrobeniusForm eps{Matrix(field, 1, algebra->dim())};
  for (int b = 0; b < algebra->dim(); ++b) {
    const Path& p = algebra->basis_path(b);
    if (p.length() != n + 1) continue;
    bool from_plain = p.source < r;  // plain vertices were added first
    if (!from_plain) {
      eps.values.set(0, b, field.one());
      continue;
    }
    // hat index of the channel the path climbs through
    const std::string& lbl = Q.arrow(p.arrows[0]).label;  // "a<i>,0"
    long long hat_i = std::stoll(lbl.substr(1, lbl.find(',') - 1));
    bool minus = in_window_mod(hat_i, -1, r - 2, 2 * r);
    eps.values.set(0, b, minus ? field.neg(field.one()) : field.one());
  }

  FamilyBundle out{spec,       algebra, std::move(sigma), std::move(eps),
                   2 * n + 1,  vindex,  {}};
  out.notes.push_back("index ranges of sigma/eps normalized to canonical residues in [1,2r]");
  return out;
}

struct DFamilyNames {
  int n, r;
  const Quiver* q;
  int pair(long long i, int j) const {
    return q->vertex(std::to_string(res1(i, r)) + "," + std::to_string(j));
  }
  int hat(long long i) const { return q->vertex("h" + std::to_string(res1(i, 2 * r))); }
};

FamilyBundle construct_d_family(const FamilySpec& spec, const Field& field) {
  const int n = spec.n, r = spec.r;
  if (n < 4) throw BadParametersError("D-family needs n >= 4");
  Quiver q;
  std::map<std::string, int> vindex;
  for (int i = 1; i <= r; ++i)
    for (int j = 1; j <= n - 2; ++j) {
      std::string lbl = std::to_string(i) + "," + std::to_string(j);
      vindex[lbl] = q.add_vertex(lbl);
    }
  for (int i = 1; i <= 2 * r; ++i) {
    std::string lbl = "h" + std::to_string(i);
    vindex[lbl] = q.add_vertex(lbl);
  }
  DFamilyNames nm{n, r, &q};
  auto glabel = [&](long long i) { return "g" + std::to_string(res1(i, 2 * r)); };
  auto blabel = [&](long long i) { return "b" + std::to_string(res1(i, 2 * r)); };
  auto alabel = [&](long long i, int j) {
    return "a" + std::to_string(res1(i, r)) + "," + std::to_string(j);
  };
  for (int i = 1; i <= r; ++i)
    for (int j = 1; j <= n - 3; ++j) q.add_arrow(alabel(i, j), nm.pair(i, j), nm.pair(i, j + 1));
  for (int i = 1; i <= 2 * r; ++i) {
    q.add_arrow(glabel(i), nm.pair(i, n - 2), nm.hat(i));
    q.add_arrow(blabel(i), nm.hat(i), nm.pair(i + 1, 1));
  }

  std::vector<Relation> rels;
  const Scalar one = field.one();
  auto path_of = [&](const std::vector<std::string>& labels) {
    std::vector<int> ids;
    for (auto& l : labels) ids.push_back(q.arrow_id(l));
    return make_path(q, ids);
  };
  for (int i = 1; i <= 2 * r; ++i) {
    std::vector<std::string> seq{blabel(i - 1)};
    for (int j = 1; j <= n - 3; ++j) seq.push_back(alabel(i, j));
    seq.push_back(glabel(i + r));
    rels.push_back(Relation{{{one, path_of(seq)}}});
  }
  for (int i = 1; i <= r; ++i)
    rels.push_back(Relation{{{one, path_of({glabel(i), blabel(i)})},
                             {field.neg(one), path_of({glabel(i + r), blabel(i + r)})}}});
  for (int i = 1; i <= r; ++i)
    for (int j = 1; j <= n - 3; ++j) {
      std::vector<std::string> seq;
      for (int k = j; k <= n - 3; ++k) seq.push_back(alabel(i, k));
      seq.push_back(glabel(i));
      seq.push_back(blabel(i));
      for (int k = 1; k <= j; ++k) seq.push_back(alabel(i + 1, k));
      rels.push_back(Relation{{{one, path_of(seq)}}});
    }

  auto algebra = std::make_shared<BoundQuiverAlgebra>(build_with_retry(q, rels, field, n + 2));

  const long long shift = n - 1 + static_cast<long long>(r) * n;
  std::map<int, Matrix> vimg, aimg;
  const Quiver& Q = algebra->quiver();
  for (int i = 1; i <= r; ++i)
    for (int j = 1; j <= n - 2; ++j)
      vimg.insert_or_assign(nm.pair(i, j), algebra->unit(algebra->idempotent_index(nm.pair(i + n - 1, j))));
  for (int i = 1; i <= 2 * r; ++i)
    vimg.insert_or_assign(nm.hat(i), algebra->unit(algebra->idempotent_index(nm.hat(i + shift))));
  for (int i = 1; i <= r; ++i)
    for (int j = 1; j <= n - 3; ++j)
      aimg.insert_or_assign(Q.arrow_id(alabel(i, j)),
                             algebra->unit(algebra->arrow_index(Q.arrow_id(alabel(i + n - 1, j)))));
  for (int i = 1; i <= 2 * r; ++i) {
    aimg.insert_or_assign(Q.arrow_id(blabel(i)),
                           algebra->unit(algebra->arrow_index(Q.arrow_id(blabel(i + shift)))));
    Matrix gi = algebra->unit(algebra->arrow_index(Q.arrow_id(glabel(i + shift))));
    bool plus = i % r == 0;  // i in {r, 2r}
    aimg.insert_or_assign(Q.arrow_id(glabel(i)), plus ? gi : gi.neg());
  }
  AlgebraMorphism sigma = AlgebraMorphism::from_generator_images(algebra, aimg, vimg);

  FrobeniusForm eps{Matrix(field, 1, algebra->dim())};
  for (int b = 0; b < algebra->dim(); ++b)
    if (algebra->path_length(b) == n - 1) eps.values.set(0, b, field.one());

  FamilyBundle out{spec, algebra, std::move(sigma), std::move(eps), 2 * n - 3, vindex, {}};
  out.notes.push_back("index ranges of sigma normalized to canonical residues in [1,2r]");
  return out;
}

FamilyBundle construct_nonstandard(const FamilySpec& spec, const Field& field) {
  if (field.characteristic() != 2)
    throw WrongCharacteristicError("nonstandard algebras exist only in characteristic 2");
  const int n = spec.n;
  if (n < 2) throw BadParametersError("nonstandard family needs n >= 2");
  Quiver q;
  std::map<std::string, int> vindex;
  for (int i = 0; i < n; ++i) vindex[std::to_string(i)] = q.add_vertex(std::to_string(i));
  q.add_arrow("b", 0, 0);
  for (int i = 0; i < n; ++i)
    q.add_arrow("a" + std::to_string(i), i, (i + 1) % n);

  auto a_id = [&](int i) { return q.arrow_id("a" + std::to_string(i)); };
  const int b_id = q.arrow_id("b");
  const Scalar one = field.one();
  std::vector<Relation> rels;
  {
    // alpha_0 alpha_{n-1} + alpha_0 beta alpha_{n-1}
    Relation rel;
    rel.terms.push_back({one, make_path(q, {a_id(n - 1), a_id(0)})});
    rel.terms.push_back({one, make_path(q, {a_id(n - 1), b_id, a_id(0)})});
    rels.push_back(rel);
  }
  {
    // beta^2 - nu_0
    Relation rel;
    rel.terms.push_back({one, make_path(q, {b_id, b_id})});
    std::vector<int> cyc;
    for (int i = 0; i < n; ++i) cyc.push_back(a_id(i));
    rel.terms.push_back({field.neg(one), make_path(q, cyc)});
    rels.push_back(rel);
  }
  // The i -> i+1 paths through the branch vertex, one per inner vertex.
  // These are the minimal relation classes the resolution term Q_2 names;
  // together with the two relations above they make the algebra symmetric.
  for (int i = 1; i <= n - 2; ++i) {
    std::vector<int> seq;
    for (int k = i; k < n; ++k) seq.push_back(a_id(k));   // i -> 0
    for (int k = 0; k <= i; ++k) seq.push_back(a_id(k));  // 0 -> i+1
    rels.push_back(Relation{{{one, make_path(q, seq)}}});
  }

  auto algebra = std::make_shared<BoundQuiverAlgebra>(
      build_with_retry(q, rels, field, std::max(n + 1, 3) + 2));

  std::map<int, Matrix> aimg;
  for (int i = 0; i < n; ++i)
    aimg.insert_or_assign(a_id(i), algebra->unit(algebra->arrow_index(a_id(i))));
  {
    Matrix img = algebra->unit(algebra->arrow_index(b_id));
    img = img.add(algebra->normal_form(make_path(q, {b_id, b_id})));
    img = img.add(algebra->normal_form(make_path(q, {b_id, b_id, b_id})));
    aimg.insert_or_assign(b_id, img);
  }
  AlgebraMorphism sigma = AlgebraMorphism::from_generator_images(algebra, aimg);

  // symmetric Frobenius form: first nondegenerate solution of the symmetry
  // system in deterministic enumeration order
  const Field& f = field;
  const int dim = algebra->dim();
  Matrix sym_sys(f, 0, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      Matrix row(f, 1, dim);
      for (auto& [k, c] : algebra->mult(i, j)) row.add_to(0, k, c);
      for (auto& [k, c] : algebra->mult(j, i)) row.add_to(0, k, f.neg(c));
      if (!row.is_zero()) sym_sys = sym_sys.vstack(row);
    }
  Matrix sym_space = sym_sys.rows() ? sym_sys.kernel() : Matrix::identity(f, dim);
  const int ds = sym_space.cols();
  std::optional<FrobeniusForm> eps;
  {
    const long long p = f.characteristic();
    std::vector<long long> digits(ds, 0);
    long long budget = 1 << 20;
    while (budget-- > 0) {
      int k = 0;
      while (k < ds && ++digits[k] == p) digits[k++] = 0;
      if (k == ds) break;
      Matrix c(f, ds, 1);
      for (int j = 0; j < ds; ++j) c.set(j, 0, f.from_int(digits[j]));
      FrobeniusForm cand{sym_space.mul(c).transpose()};
      if (gram_matrix(*algebra, cand).rank() == dim) {
        eps = cand;
        break;
      }
    }
  }
  if (!eps) throw InconsistencyError("no symmetric nondegenerate form found");

  FamilyBundle out{spec, algebra, std::move(sigma), std::move(*eps), 4 * n - 2, vindex, {}};
  out.notes.push_back("symmetric Frobenius form chosen as first nondegenerate solution");
  return out;
}

FamilyBundle construct_trunc(const FamilySpec& spec, const Field& field) {
  const int n = spec.n;
  Quiver q;
  std::map<std::string, int> vindex;
  vindex["v"] = q.add_vertex("v");
  q.add_arrow("t", 0, 0);
  std::vector<int> seq(n, q.arrow_id("t"));
  std::vector<Relation> rels{Relation{{{field.one(), make_path(q, seq)}}}};
  auto algebra = std::make_shared<BoundQuiverAlgebra>(BoundQuiverAlgebra::build(q, rels, field, n));
  AlgebraMorphism sigma = AlgebraMorphism::identity(algebra);
  FrobeniusForm eps{Matrix(field, 1, algebra->dim())};
  eps.values.set(0, n - 1, field.one());  // basis is 1, t, ..., t^{n-1}
  return FamilyBundle{spec, algebra, std::move(sigma), std::move(eps), 2, vindex, {}};
}

}  // namespace

FamilyBundle construct_family(const FamilySpec& spec, const Field& field) {
  FamilyBundle out = [&] {
    switch (spec.kind) {
      case FamilyKind::AOddTorsion2:
        return construct_a_family(spec, field);
      case FamilyKind::DTorsion2:
        return construct_d_family(spec, field);
      case FamilyKind::NonstandardD3n:
        return construct_nonstandard(spec, field);
      case FamilyKind::TruncatedPoly:
        return construct_trunc(spec, field);
    }
    throw UnsupportedTypeError("unknown family kind");
  }();
  verify_frobenius(*out.algebra, out.eps);
  if (!out.sigma.vertex_permutation())
    throw InconsistencyError("sigma does not permute the vertex idempotents");
  return out;
}

// ---------------------------------------------------------------------------
// Closed-form resolution terms

namespace {

int plain_id_a(const FamilyBundle& b, long long i) {
  return b.vertex_index.at(std::to_string(res1(i, b.spec.r)));
}
int hat_id_a(const FamilyBundle& b, long long i, int j) {
  return b.vertex_index.at("h" + std::to_string(res1(i, 2 * b.spec.r)) + "," + std::to_string(j));
}
int pair_id_d(const FamilyBundle& b, long long i, int j) {
  return b.vertex_index.at(std::to_string(res1(i, b.spec.r)) + "," + std::to_string(j));
}
int hat_id_d(const FamilyBundle& b, long long i) {
  return b.vertex_index.at("h" + std::to_string(res1(i, 2 * b.spec.r)));
}

CoverPattern base_term_a(const FamilyBundle& b, int t) {
  const int n = b.spec.n, r = b.spec.r;
  CoverPattern out;
  if (t % 2 == 0) {
    int m = t / 2;
    for (int i = 1; i <= r; ++i) out.add(plain_id_a(b, i + m), plain_id_a(b, i));
    for (int i = 1; i <= 2 * r; ++i) {
      for (int j = 1; j <= n - m; ++j) out.add(hat_id_a(b, i + m, j + m), hat_id_a(b, i, j));
      for (int j = n - m + 1; j <= n; ++j)
        out.add(hat_id_a(b, i + r + m, j + m - n), hat_id_a(b, i, j));
    }
  } else {
    int m = (t - 1) / 2;
    for (int i = 1; i <= 2 * r; ++i) {
      out.add(hat_id_a(b, i + m, m + 1), plain_id_a(b, i));
      for (int j = 1; j <= n - m - 1; ++j) out.add(hat_id_a(b, i + m, j + m + 1), hat_id_a(b, i, j));
      out.add(plain_id_a(b, i + m + 1), hat_id_a(b, i, n - m));
      for (int j = n - m + 1; j <= n; ++j)
        out.add(hat_id_a(b, i + r + m + 1, j + m - n), hat_id_a(b, i, j));
    }
  }
  return out;
}

CoverPattern base_term_d(const FamilyBundle& b, int t) {
  const int n = b.spec.n, r = b.spec.r;
  CoverPattern out;
  if (t % 2 == 0) {
    int m = t / 2;
    for (int i = 1; i <= r; ++i) {
      for (int j = 1; j <= n - 2 - m; ++j) out.add(pair_id_d(b, i + m, j + m), pair_id_d(b, i, j));
      for (int j = n - 1 - m; j <= n - 2; ++j)
        out.add(pair_id_d(b, i + m, j + m - (n - 2)), pair_id_d(b, i, j));
    }
    for (int i = 1; i <= 2 * r; ++i)
      out.add(hat_id_d(b, i + static_cast<long long>(m) * (r + 1)), hat_id_d(b, i));
  } else {
    int m = (t - 1) / 2;
    for (int i = 1; i <= r; ++i) {
      for (int j = 1; j <= n - 3 - m; ++j)
        out.add(pair_id_d(b, i + m, j + m + 1), pair_id_d(b, i, j));
      for (int j = n - 1 - m; j <= n - 2; ++j)
        out.add(pair_id_d(b, i + m + 1, j + m - (n - 2)), pair_id_d(b, i, j));
    }
    for (int i = 1; i <= 2 * r; ++i) {
      out.add(hat_id_d(b, i + m), pair_id_d(b, i, n - 2 - m));
      out.add(pair_id_d(b, i + m + 1, m + 1), hat_id_d(b, i));
    }
  }
  return out;
}

// nonstandard T_t and T'_t builders (vertices 0..n-1, no wrap needed)
CoverPattern nonstd_T_even(const FamilyBundle& b, int m) {
  const int n = b.spec.n;
  auto vid = [&](int i) { return b.vertex_index.at(std::to_string(i)); };
  CoverPattern out;
  out.add(vid(0), vid(0));
  for (int i = 1; i <= n - 1 - m; ++i) out.add(vid(i + m), vid(i));
  for (int i = n - m; i <= n - 1; ++i) out.add(vid(i + m - (n - 1)), vid(i));
  return out;
}

CoverPattern nonstd_T_odd(const FamilyBundle& b, int m, bool with_p00) {
  const int n = b.spec.n;
  auto vid = [&](int i) { return b.vertex_index.at(std::to_string(i)); };
  CoverPattern out;
  for (int i = 0; i <= n - 2 - m; ++i) out.add(vid(i + m + 1), vid(i));
  for (int i = n - 1 - m; i <= n - 1; ++i) out.add(vid(i + m - (n - 1)), vid(i));
  if (with_p00) out.add(vid(0), vid(0));
  return out;
}

int sigma_vertex_a(const FamilyBundle& b, int v) {
  const Quiver& q = b.algebra->quiver();
  const std::string& lbl = q.vertex_label(v);
  if (lbl[0] == 'h') {
    auto comma = lbl.find(',');
    long long i = std::stoll(lbl.substr(1, comma - 1));
    return hat_id_a(b, i + b.spec.r + b.spec.n + 1, std::stoi(lbl.substr(comma + 1)));
  }
  return plain_id_a(b, std::stoll(lbl) + b.spec.n + 1);
}

int sigma_vertex_d(const FamilyBundle& b, int v) {
  const Quiver& q = b.algebra->quiver();
  const std::string& lbl = q.vertex_label(v);
  if (lbl[0] == 'h')
    return hat_id_d(b, std::stoll(lbl.substr(1)) + b.spec.n - 1 +
                           static_cast<long long>(b.spec.r) * b.spec.n);
  auto comma = lbl.find(',');
  return pair_id_d(b, std::stoll(lbl.substr(0, comma)) + b.spec.n - 1,
                   std::stoi(lbl.substr(comma + 1)));
}

}  // namespace

CoverPattern expected_resolution_term(const FamilyBundle& b, int degree) {
  if (degree < 0) throw BadParametersError("negative degree");
  const int n = b.spec.n;
  switch (b.spec.kind) {
    case FamilyKind::AOddTorsion2: {
      if (n % 2 != 0)
        throw UnsupportedTypeError("closed-form terms for (A_{2n+1}, r, 2) assume n even");
      const int period = 2 * n + 1;
      int l = degree / period, t0 = degree % period;
      CoverPattern base = base_term_a(b, t0);
      CoverPattern out;
      for (auto& [k, c] : base.mult) {
        int v = k.first;
        for (int s = 0; s < l; ++s) v = sigma_vertex_a(b, v);
        out.add(v, k.second, c);
      }
      return out;
    }
    case FamilyKind::DTorsion2: {
      if (b.spec.r % 2 != 0)
        throw UnsupportedTypeError("closed-form terms for (D_n, r, 2) assume r even");
      const int period = 2 * n - 3;
      int l = degree / period, t0 = degree % period;
      CoverPattern base = base_term_d(b, t0);
      CoverPattern out;
      for (auto& [k, c] : base.mult) {
        int v = k.first;
        for (int s = 0; s < l; ++s) v = sigma_vertex_d(b, v);
        out.add(v, k.second, c);
      }
      return out;
    }
    case FamilyKind::NonstandardD3n: {
      const int period = n % 2 == 0 ? 2 * n - 1 : 4 * n - 2;
      int t0 = degree % period;
      if (n % 2 == 0 || t0 <= 2 * n - 2) {
        if (t0 % 2 == 0) return nonstd_T_even(b, t0 / 2);
        // odd terms alternate T and T' with period 4 in the degree
        return nonstd_T_odd(b, (t0 - 1) / 2, t0 % 4 == 1);
      }
      // odd n, second half of the period: the T / T' roles swap
      int u = t0 - (2 * n - 1);
      if (u % 2 == 0) return nonstd_T_even(b, u / 2);
      return nonstd_T_odd(b, (u - 1) / 2, u % 4 == 3);
    }
    case FamilyKind::TruncatedPoly: {
      CoverPattern out;
      out.add(0, 0);
      return out;
    }
  }
  throw UnsupportedTypeError("unknown family kind");
}

Matrix witness_inner_element(const FamilyBundle& b, int l) {
  if (b.spec.kind != FamilyKind::AOddTorsion2)
    throw BadParametersError("witness elements are defined for the (A_{2n+1}, r, 2) family");
  const int n = b.spec.n, r = b.spec.r;
  const long long step = r + n + 1;
  if (std::gcd(step, 2LL * r) != 1)
    throw BadParametersError("gcd(r+n+1, 2r) != 1: no valid l exists");
  if (l <= 0 || (static_cast<long long>(l) * step - 1) % (2 * r) != 0)
    throw BadParametersError("l does not satisfy 2r | l(r+n+1) - 1");

  auto p_l = [&](long long qq) {
    int count = 0;
    for (int s = 0; s <= l; ++s)
      if ((((qq + s * step) % (2 * r)) + 2 * r) % (2 * r) == 0) ++count;
    return count;
  };
  const BoundQuiverAlgebra& A = *b.algebra;
  const Field& f = A.field();
  Matrix a(f, A.dim(), 1);
  for (int i = 1; i <= r; ++i) {
    int expo = 0;
    for (long long qq = i - r + 1; qq <= i; ++qq) expo += p_l(qq);
    Scalar c = expo % 2 == 0 ? f.one() : f.neg(f.one());
    a.add_to(A.idempotent_index(plain_id_a(b, i)), 0, c);
  }
  for (int i = 1; i <= 2 * r; ++i)
    for (int j = 1; j <= n; ++j)
      a.add_to(A.idempotent_index(hat_id_a(b, i, j)), 0, f.one());

  auto ainv = A.element_inverse(a);
  if (!ainv) throw InconsistencyError("witness element is not invertible");
  AlgebraMorphism nu = nakayama_automorphism(b.algebra, b.eps);
  AlgebraMorphism target = nu.compose(b.sigma.power(l));
  for (int i = 0; i < A.dim(); ++i) {
    Matrix conj = A.mul_elements(*ainv, A.mul_elements(A.unit(i), a));
    if (!conj.equals(target.matrix().column(i)))
      throw InconsistencyError("conjugation by the witness does not equal nu sigma^l");
  }
  return a;
}

}  // namespace qcy
