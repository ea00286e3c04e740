#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "eulerdd/bitset.hpp"
#include "eulerdd/valuation.hpp"

namespace eulerdd {

/// A Boolean function on the fixed variable set V = {0,...,k}, represented by
/// its full truth table: bit v of the table is 1 iff the valuation v
/// satisfies the function. Values are immutable in spirit; mutation helpers
/// exist for construction and for the rewrite engine, which always works on
/// copies.
class BoolFun {
 public:
  /// Practical bound: the truth table has 2^(k+1) bits.
  static constexpr int kMaxK = 20;

  /// The always-false function on {0,...,k}.
  explicit BoolFun(int k);

  static BoolFun bottom(int k) { return BoolFun(k); }
  static BoolFun top(int k);
  static BoolFun from_sat(int k, const std::vector<Valuation>& sat);
  static BoolFun from_table(int k, Bitset table);
  /// The function satisfied by exactly {v, v with l flipped}.
  static BoolFun adjacent_pair(int k, Valuation v, int l);

  int k() const { return k_; }
  int var_count() const { return k_ + 1; }
  uint32_t valuation_count() const { return uint32_t{1} << (k_ + 1); }

  bool operator()(Valuation v) const { return table_.test(v.bits()); }
  void set(Valuation v, bool value) { table_.set(v.bits(), value); }

  uint64_t sat_count() const { return table_.count(); }
  bool is_bottom() const { return table_.none(); }
  std::vector<Valuation> sat_list() const;

  /// Euler characteristic: the satisfying valuations counted with sign
  /// (-1)^|v|.
  long long euler() const;

  bool depends_on(int l) const;
  std::vector<int> dependencies() const;
  bool is_degenerate() const;
  bool is_monotone() const;

  /// Clauses of the unique minimized DNF of a monotone function: its
  /// inclusion-minimal satisfying valuations. Requires monotone, not bottom.
  std::vector<Valuation> minimized_dnf() const;
  /// Clauses of the unique minimized CNF of a monotone function, computed as
  /// the minimal transversals of the minimized DNF and re-checked against the
  /// truth table. Requires monotone, not top.
  std::vector<Valuation> minimized_cnf() const;

  bool is_disjoint(const BoolFun& o) const;

  bool operator==(const BoolFun& o) const = default;

  const Bitset& table() const { return table_; }

 private:
  int k_ = 1;
  Bitset table_;
};

BoolFun bf_not(const BoolFun& f);
BoolFun bf_and(const BoolFun& a, const BoolFun& b);
BoolFun bf_or(const BoolFun& a, const BoolFun& b);

/// Parses the .bf function format:
///   k <int>
/// followed by either `formula <expr>` (atoms are variable indices,
/// operators !, &, | with that precedence, parentheses allowed) or `sat`
/// followed by one valuation per line ("." for the empty valuation).
/// Lines starting with '#' are comments.
BoolFun parse_function(std::string_view text);

/// Canonical sat-list form; parse_function(serialize_function(f)) == f.
std::string serialize_function(const BoolFun& f);

}  // namespace eulerdd
