#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "eulerdd/boolfun.hpp"
#include "eulerdd/circuit.hpp"
#include "eulerdd/pdb.hpp"

namespace eulerdd {

/// A total order on a subset of the database's facts.
struct VarOrder {
  std::vector<int> facts;

  bool operator==(const VarOrder&) const = default;
  bool contains(int fact) const;
  /// Position in the order; facts outside the order sort last.
  int position(int fact) const;
};

/// Reduced ordered binary decision diagram over database facts. Node ids 0
/// and 1 are the false/true terminals; decision nodes test a fact and
/// branch on its absence (lo) or presence (hi). Along every path the tested
/// facts appear in strictly increasing order position, and no node has
/// lo == hi or duplicates an existing (fact, lo, hi) triple.
class Obdd {
 public:
  struct Node {
    int fact;
    int lo;
    int hi;
  };

  static Obdd constant(VarOrder order, bool value);
  static Obdd var(VarOrder order, int fact);

  const VarOrder& order() const { return order_; }
  int root() const { return root_; }
  /// Decision nodes only (terminals excluded).
  std::size_t node_count() const { return nodes_.size() - 2; }
  const std::vector<Node>& raw_nodes() const { return nodes_; }

  bool evaluate(World w) const;
  bool is_reduced_and_ordered() const;

  friend Obdd apply(Circuit::Kind op, const Obdd& a, const Obdd& b);
  friend Obdd negate(const Obdd& a);

  /// Unfolds the diagram into circuit gates: each decision node becomes
  /// (v and hi) or (not v and lo) with a kDecision certificate. Returns the
  /// gate index of the root.
  int unfold_into(Circuit& c) const;

 private:
  explicit Obdd(VarOrder order);
  int make(int fact, int lo, int hi);

  VarOrder order_;
  std::vector<Node> nodes_;  // nodes_[0], nodes_[1] are the terminals
  std::unordered_map<uint64_t, int> unique_;
  int root_ = 0;
};

Obdd apply(Circuit::Kind op, const Obdd& a, const Obdd& b);
Obdd negate(const Obdd& a);

/// Fact order R(a_i), then S1(a_i,.)..Sl(a_i,.) blocks grouped by the
/// second argument, for each domain constant a_i in turn; facts absent from
/// the database are skipped. Under this order the atomic queries 0..l-1
/// have constant-width diagrams.
VarOrder left_order(int l, const TidDatabase& db, int k);

/// Mirror order for the right side: S(l+1)(.,b)..Sk(.,b) blocks grouped by
/// the first argument, then T(b), for each domain constant b in turn.
VarOrder right_order(int l, const TidDatabase& db, int k);

/// Diagram for the lineage of the i-th atomic query under the given order,
/// which must contain every fact of the predicates the query mentions.
Obdd obdd_for_h(int i, const VarOrder& side_order, const TidDatabase& db, int k);

/// Compiler for degenerate functions: a deterministic OR over the pairs
/// {v, v with l flipped} of satisfying valuations (l a variable the
/// function does not depend on), each child a decomposable AND of the
/// left-side and right-side diagrams unfolded into the circuit.
Circuit degenerate_compile(const BoolFun& f, const TidDatabase& db);

}  // namespace eulerdd
