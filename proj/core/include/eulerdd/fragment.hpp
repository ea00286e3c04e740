#pragma once

#include <string>
#include <vector>

#include "eulerdd/boolfun.hpp"
#include "eulerdd/transform.hpp"

namespace eulerdd {

/// A circuit skeleton whose internal nodes are only NOT and OR gates and
/// whose leaves are numbered holes, to be filled with Boolean functions.
struct Template {
  enum class Kind { kHole, kNot, kOr };
  struct Node {
    Kind kind;
    int hole = -1;              // kHole only
    std::vector<int> children;  // kNot: one child; kOr: two or more
  };

  std::vector<Node> nodes;  // children precede parents
  int root = -1;
  int hole_count = 0;

  int add_hole(int hole);
  int add_not(int child);
  int add_or(std::vector<int> children);
};

/// Evaluates the hybrid circuit obtained by substituting leaves[i] for
/// hole i, pointwise over all valuations.
BoolFun instantiate(const Template& tmpl, const std::vector<BoolFun>& leaves);

/// The function captured by every template node under the instantiation,
/// indexed like Template::nodes.
std::vector<BoolFun> template_node_values(const Template& tmpl,
                                          const std::vector<BoolFun>& leaves);

/// True iff, under this instantiation, the children of every OR node of the
/// template capture pairwise disjoint functions.
bool check_instantiation_determinism(const Template& tmpl, const std::vector<BoolFun>& leaves);

/// A template together with one degenerate leaf function per hole whose
/// deterministic instantiation equals the represented function.
struct Fragmentation {
  Template tmpl;
  std::vector<BoolFun> leaves;
};

/// Raised by fragment() when the Euler characteristic is nonzero.
struct NotFragmentableError : DomainError {
  long long euler;
  explicit NotFragmentableError(long long e)
      : DomainError("not fragmentable: euler characteristic is " + std::to_string(e) +
                    ", expected 0"),
        euler(e) {}
};

/// Turns a trace from the always-false function to `target` into a
/// fragmentation of `target`: hole 0 is the always-false leaf, a plus step
/// extends the template with an OR, a minus step wraps it as
/// not(not(T) or leaf). Runs of plus steps flatten into one OR node.
Fragmentation fragment_from_trace(const RewriteTrace& trace, const BoolFun& target);

/// Fragmentation of f via the rewrite engine; succeeds exactly when
/// euler(f) == 0.
Fragmentation fragment(const BoolFun& f);

/// Parenthesized rendering with holes named H0..Hn.
std::string format_template(const Template& tmpl);

}  // namespace eulerdd
