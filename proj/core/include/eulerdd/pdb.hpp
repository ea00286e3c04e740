#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "eulerdd/bitset.hpp"
#include "eulerdd/boolfun.hpp"
#include "eulerdd/rational.hpp"

namespace eulerdd {

enum class Pred { kR, kS, kT };

/// One probabilistic fact over the schema R(x), S1(x,y)..Sk(x,y), T(y).
/// Arguments are indices into the database domain.
struct Fact {
  Pred pred;
  int s_index = 0;  // 1..k, only for kS
  int arg1 = 0;
  int arg2 = 0;  // kS only
  Rat prob;

  std::string label(const std::vector<std::string>& domain) const;
};

/// A tuple-independent database instance. Fact indices are stable (file
/// order) and serve as the shared variable namespace for worlds, decision
/// diagrams and compiled circuits.
struct TidDatabase {
  int k = 1;  // largest S index mentioned; 1 when no S facts occur
  std::vector<std::string> domain;
  std::vector<Fact> facts;

  std::size_t fact_count() const { return facts.size(); }
  int domain_size() const { return static_cast<int>(domain.size()); }

  /// Index of R(a) / S_i(a,b) / T(a) in facts, or -1 when absent.
  int fact_index(Pred pred, int s_index, int arg1, int arg2 = 0) const;
  int find_fact_by_label(const std::string& label) const;
  std::string fact_label(int index) const { return facts[index].label(domain); }
};

/// Parses the .tid format: one fact per line, `<pred> <args...> <prob>`,
/// with predicates R, T, S1..Sk, '#' comments and exact rational or decimal
/// probabilities.
TidDatabase parse_db(std::string_view text);
std::string serialize_db(const TidDatabase& db);

/// A sub-database: bit i is set iff fact i is present. Limited to 64 facts,
/// far beyond every enumeration guard in this library.
struct World {
  uint64_t bits = 0;

  bool has(int fact) const { return (bits >> fact) & 1; }
};

/// Whether the i-th atomic query holds on the world:
///   i = 0: exists x,y with R(x) and S1(x,y);
///   0 < i < k: exists x,y with Si(x,y) and S(i+1)(x,y);
///   i = k: exists x,y with Sk(x,y) and T(y).
bool h_satisfied(int i, World w, const TidDatabase& db, int k);

/// The valuation {i : h_satisfied(i, w, db)} over variables 0..k.
Valuation h_valuation(World w, const TidDatabase& db, int k);

/// Whether the query induced by f holds on the world: f evaluated on the
/// valuation of satisfied atomic queries.
bool query_holds(const BoolFun& f, World w, const TidDatabase& db);

/// Product of the facts' probabilities (present) and co-probabilities
/// (absent); exact.
Rat world_probability(const TidDatabase& db, World w);

struct OracleOptions {
  std::size_t max_facts = 30;  // enumeration guard
  int jobs = 1;
};

/// Brute-force probability of the query induced by f: the exact sum of
/// world_probability over all worlds where query_holds. This is the
/// reference oracle every compiled circuit is checked against.
Rat oracle_pqe(const BoolFun& f, const TidDatabase& db, const OracleOptions& opts = {});

/// Explicit lineage of the query over the facts: bit w of the result is
/// query_holds on world w. Guarded at 20 facts.
Bitset lineage_table(const BoolFun& f, const TidDatabase& db, std::size_t max_facts = 20);

}  // namespace eulerdd
