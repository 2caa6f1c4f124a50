#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qcy/errors.hpp"
#include "qcy/field.hpp"

namespace qcy {

struct Arrow {
  std::string label;
  int src;
  int tgt;
};

class Quiver {
 public:
  int add_vertex(const std::string& label);
  int add_arrow(const std::string& label, int src, int tgt);
  int add_arrow(const std::string& label, const std::string& src, const std::string& tgt);

  int num_vertices() const { return static_cast<int>(vertex_labels_.size()); }
  int num_arrows() const { return static_cast<int>(arrows_.size()); }
  const std::string& vertex_label(int v) const { return vertex_labels_[v]; }
  const Arrow& arrow(int a) const { return arrows_[a]; }

  std::optional<int> find_vertex(const std::string& label) const;
  std::optional<int> find_arrow(const std::string& label) const;
  int vertex(const std::string& label) const;  // throws on unknown label
  int arrow_id(const std::string& label) const;

 private:
  std::vector<std::string> vertex_labels_;
  std::vector<Arrow> arrows_;
  std::unordered_map<std::string, int> vertex_index_;
  std::unordered_map<std::string, int> arrow_index_;
};

/*
 * A path stores its arrows in application order: arrows[0] acts first.
 * The usual right-to-left product a_k ... a_1 lists the same arrows reversed.
 */
struct Path {
  int source = -1;
  int target = -1;
  std::vector<int> arrows;

  int length() const { return static_cast<int>(arrows.size()); }
  static Path trivial(int v) { return Path{v, v, {}}; }

  bool operator==(const Path& o) const {
    return source == o.source && target == o.target && arrows == o.arrows;
  }
};

// Builds a path from arrow ids in application order; throws BadParameters
// if consecutive arrows do not compose.
Path make_path(const Quiver& q, const std::vector<int>& arrows_in_order, int source_if_empty = -1);

// The algebra product p*q (q acts first); nullopt if tgt(q) != src(p).
std::optional<Path> path_product(const Quiver& q, const Path& p, const Path& right);

// Deterministic path order: length first, then the arrow label sequence
// lexicographically, then the source vertex id.
bool path_less(const Quiver& q, const Path& a, const Path& b);

std::string path_to_string(const Quiver& q, const Path& p);  // paper order, "*"-joined

struct RelationTerm {
  Scalar coeff;
  Path path;
};

// All terms of one relation must be parallel paths of length >= 2.
struct Relation {
  std::vector<RelationTerm> terms;
};

/*
 * Plain-text algebra description, one item per line, '#' comments:
 *   field <p|Q>
 *   vertex <label>
 *   arrow <label>: <src> -> <tgt>
 *   relation: [c*]<a_k ... a_1> [+|- ...]     (paths right-to-left)
 *   bound <L>
 */
struct AlgebraDescription {
  Field field = Field::rationals();
  Quiver quiver;
  std::vector<Relation> relations;
  int bound = 0;
};

AlgebraDescription parse_algebra_description(const std::string& text);

// One additive term of an element expression: optional coefficient and a
// right-to-left label sequence; labels may carry ^k powers.
struct RawTerm {
  std::string coeff;                // "" means 1 (sign folded in by caller)
  bool negated = false;
  std::vector<std::string> labels;  // paper order (rightmost acts first)
};

// Parses "c*a2 a1 + b^2 - ..." into raw terms (no algebra semantics).
std::vector<RawTerm> parse_element_expression(const std::string& text);

// Parses "t -> t + t^3; u -> u" into (generator label, expression) pairs.
std::vector<std::pair<std::string, std::vector<RawTerm>>> parse_generator_map(
    const std::string& text);

}  // namespace qcy
