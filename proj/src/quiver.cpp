#include "qcy/quiver.hpp"

#include <sstream>

namespace qcy {

int Quiver::add_vertex(const std::string& label) {
  if (vertex_index_.count(label)) throw BadParametersError("duplicate vertex label: " + label);
  int id = num_vertices();
  vertex_labels_.push_back(label);
  vertex_index_[label] = id;
  return id;
}

int Quiver::add_arrow(const std::string& label, int src, int tgt) {
  if (arrow_index_.count(label)) throw BadParametersError("duplicate arrow label: " + label);
  if (src < 0 || src >= num_vertices() || tgt < 0 || tgt >= num_vertices())
    throw BadParametersError("arrow endpoint not a declared vertex: " + label);
  int id = num_arrows();
  arrows_.push_back(Arrow{label, src, tgt});
  arrow_index_[label] = id;
  return id;
}

int Quiver::add_arrow(const std::string& label, const std::string& src, const std::string& tgt) {
  return add_arrow(label, vertex(src), vertex(tgt));
}

std::optional<int> Quiver::find_vertex(const std::string& label) const {
  auto it = vertex_index_.find(label);
  if (it == vertex_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Quiver::find_arrow(const std::string& label) const {
  auto it = arrow_index_.find(label);
  if (it == arrow_index_.end()) return std::nullopt;
  return it->second;
}

int Quiver::vertex(const std::string& label) const {
  auto v = find_vertex(label);
  if (!v) throw BadParametersError("unknown vertex: " + label);
  return *v;
}

int Quiver::arrow_id(const std::string& label) const {
  auto a = find_arrow(label);
  if (!a) throw BadParametersError("unknown arrow: " + label);
  return *a;
}

Path make_path(const Quiver& q, const std::vector<int>& arrows_in_order, int source_if_empty) {
  if (arrows_in_order.empty()) {
    if (source_if_empty < 0) throw BadParametersError("trivial path needs a vertex");
    return Path::trivial(source_if_empty);
  }
  Path p;
  p.source = q.arrow(arrows_in_order.front()).src;
  int at = p.source;
  for (int a : arrows_in_order) {
    if (q.arrow(a).src != at)
      throw BadParametersError("path arrows do not compose at " + q.arrow(a).label);
    at = q.arrow(a).tgt;
  }
  p.target = at;
  p.arrows = arrows_in_order;
  return p;
}

std::optional<Path> path_product(const Quiver&, const Path& p, const Path& right) {
  if (right.target != p.source) return std::nullopt;
  Path out;
  out.source = right.source;
  out.target = p.target;
  out.arrows = right.arrows;
  out.arrows.insert(out.arrows.end(), p.arrows.begin(), p.arrows.end());
  return out;
}

bool path_less(const Quiver& q, const Path& a, const Path& b) {
  if (a.length() != b.length()) return a.length() < b.length();
  for (int k = 0; k < a.length(); ++k) {
    const std::string& la = q.arrow(a.arrows[k]).label;
    const std::string& lb = q.arrow(b.arrows[k]).label;
    if (la != lb) return la < lb;
  }
  return a.source < b.source;
}

std::string path_to_string(const Quiver& q, const Path& p) {
  if (p.length() == 0) return "e_" + q.vertex_label(p.source);
  std::string out;
  for (int k = p.length() - 1; k >= 0; --k) {
    out += q.arrow(p.arrows[k]).label;
    if (k > 0) out += "*";
  }
  return out;
}

namespace {

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// splits on top-level +/- keeping signs; '*' binds coefficients to terms
std::vector<std::pair<bool, std::string>> split_signed_terms(const std::string& text) {
  std::vector<std::pair<bool, std::string>> parts;
  std::string cur;
  bool neg = false;
  bool any = false;
  for (size_t i = 0; i < text.size(); ++i) {
    char ch = text[i];
    if ((ch == '+' || ch == '-') && any) {
      parts.emplace_back(neg, trim(cur));
      cur.clear();
      neg = ch == '-';
      continue;
    }
    if (ch == '-' && !any && trim(cur).empty()) {
      neg = true;
      continue;
    }
    cur += ch;
    if (!std::isspace(static_cast<unsigned char>(ch))) any = true;
  }
  parts.emplace_back(neg, trim(cur));
  return parts;
}

}  // namespace

std::vector<RawTerm> parse_element_expression(const std::string& text) {
  std::vector<RawTerm> terms;
  for (auto& [neg, body] : split_signed_terms(text)) {
    if (body.empty()) throw BadParametersError("empty term in expression: " + text);
    RawTerm t;
    t.negated = neg;
    std::string rest = body;
    auto star = body.find('*');
    if (star != std::string::npos) {
      std::string head = trim(body.substr(0, star));
      // a coefficient head is numeric (possibly a fraction)
      if (!head.empty() && (std::isdigit(static_cast<unsigned char>(head[0])) ||
                            head[0] == '-' || head[0] == '/')) {
        t.coeff = head;
        rest = body.substr(star + 1);
      }
    }
    for (std::string w : split_ws(rest)) {
      auto caret = w.find('^');
      if (caret == std::string::npos) {
        t.labels.push_back(w);
        continue;
      }
      std::string lbl = w.substr(0, caret);
      int k = 0;
      try {
        k = std::stoi(w.substr(caret + 1));
      } catch (...) {
        throw BadParametersError("bad power in term: " + w);
      }
      if (k < 0) throw BadParametersError("negative power in term: " + w);
      for (int r = 0; r < k; ++r) t.labels.push_back(lbl);
      if (k == 0) t.labels.push_back("");  // x^0 is not a path; reject downstream
    }
    if (t.labels.empty()) throw BadParametersError("term without a path: " + body);
    terms.push_back(std::move(t));
  }
  return terms;
}

std::vector<std::pair<std::string, std::vector<RawTerm>>> parse_generator_map(
    const std::string& text) {
  std::vector<std::pair<std::string, std::vector<RawTerm>>> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    auto pos = item.find("->");
    if (pos == std::string::npos) throw BadParametersError("morphism item needs '->': " + item);
    std::string gen = trim(item.substr(0, pos));
    std::string expr = trim(item.substr(pos + 2));
    if (gen.empty() || expr.empty()) throw BadParametersError("incomplete morphism item: " + item);
    out.emplace_back(gen, parse_element_expression(expr));
  }
  return out;
}

AlgebraDescription parse_algebra_description(const std::string& text) {
  AlgebraDescription d;
  bool field_seen = false;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  std::vector<std::pair<int, std::string>> relation_lines;  // resolved after arrows
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      if (line.rfind("field", 0) == 0) {
        std::string v = trim(line.substr(5));
        d.field = (v == "Q" || v == "q" || v == "0") ? Field::rationals() : Field::fp(std::stoll(v));
        field_seen = true;
      } else if (line.rfind("vertex", 0) == 0) {
        d.quiver.add_vertex(trim(line.substr(6)));
      } else if (line.rfind("arrow", 0) == 0) {
        std::string body = trim(line.substr(5));
        auto colon = body.find(':');
        auto to = body.find("->");
        if (colon == std::string::npos || to == std::string::npos)
          throw BadParametersError("expected 'arrow <label>: <src> -> <tgt>'");
        d.quiver.add_arrow(trim(body.substr(0, colon)),
                           trim(body.substr(colon + 1, to - colon - 1)), trim(body.substr(to + 2)));
      } else if (line.rfind("relation", 0) == 0) {
        auto colon = line.find(':');
        if (colon == std::string::npos) throw BadParametersError("expected 'relation: ...'");
        relation_lines.emplace_back(lineno, trim(line.substr(colon + 1)));
      } else if (line.rfind("bound", 0) == 0) {
        d.bound = std::stoi(trim(line.substr(5)));
      } else {
        throw BadParametersError("unrecognized line: " + line);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  if (!field_seen) throw ParseError("missing 'field' line", lineno);
  for (auto& [ln, body] : relation_lines) {
    try {
      Relation rel;
      for (const RawTerm& rt : parse_element_expression(body)) {
        std::vector<int> ids;
        for (auto it = rt.labels.rbegin(); it != rt.labels.rend(); ++it)
          ids.push_back(d.quiver.arrow_id(*it));  // labels are right-to-left
        Scalar c = rt.coeff.empty() ? d.field.one() : d.field.parse(rt.coeff);
        if (rt.negated) c = d.field.neg(c);
        rel.terms.push_back(RelationTerm{c, make_path(d.quiver, ids)});
      }
      d.relations.push_back(std::move(rel));
    } catch (const std::exception& e) {
      throw ParseError(e.what(), ln);
    }
  }
  if (d.bound < 2) throw ParseError("missing or invalid 'bound' line (need >= 2)", lineno);
  return d;
}

}  // namespace qcy
