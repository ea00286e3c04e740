#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "eulerdd/bitset.hpp"
#include "eulerdd/boolfun.hpp"
#include "eulerdd/pdb.hpp"
#include "eulerdd/rational.hpp"

namespace eulerdd {

struct Fragmentation;

/// Construction-time justification that an OR gate is deterministic,
/// checkable without enumerating assignments.
struct OrCertificate {
  enum class Kind {
    kDecision,          // (v and x) or (not v and y): disjoint on the tested fact
    kDisjointPatterns,  // children assert pairwise distinct full patterns of
                        // the atomic queries outside one variable
    kTemplateOr,        // children capture queries of pairwise disjoint functions
  };
  Kind kind;
  std::vector<uint32_t> patterns;   // kDisjointPatterns
  std::vector<BoolFun> child_funs;  // kTemplateOr
};

/// A Boolean circuit over database facts with VAR/CONST/NOT/AND/OR gates in
/// topological order (children precede parents). VAR gates index the
/// circuit's fact label table; compiled circuits copy the database's full
/// label table so fact indices agree with world bit positions.
class Circuit {
 public:
  enum class Kind { kVar, kConstFalse, kConstTrue, kNot, kAnd, kOr };
  struct Gate {
    Kind kind;
    int fact = -1;              // kVar only
    std::vector<int> children;  // kNot: one; kAnd/kOr: one or more
  };

  std::vector<Gate> gates;
  int root = -1;
  std::vector<std::string> fact_labels;
  std::unordered_map<int, OrCertificate> or_certs;  // gate index -> certificate

  int add_var(int fact);
  int add_const(bool value);
  int add_not(int child);
  int add_and(std::vector<int> children);
  int add_or(std::vector<int> children, std::optional<OrCertificate> cert = std::nullopt);

  std::size_t gate_count() const { return gates.size(); }

  /// Per-gate sets of reachable fact variables.
  std::vector<Bitset> vars_per_gate() const;
  /// Facts reachable from the root.
  Bitset root_vars() const;
};

/// Standard bottom-up evaluation on a world over the circuit's own fact
/// namespace.
bool evaluate(const Circuit& c, World w);

/// True iff the children of every AND gate reach pairwise disjoint fact
/// sets.
bool check_decomposable(const Circuit& c);

enum class DeterminismMode { kSemantic, kCertified };

/// kSemantic: exhaustive co-satisfaction search over the facts reachable in
/// the circuit (guarded at 20 facts); definitive. kCertified: validates the
/// construction-time certificate attached to every OR gate; no enumeration.
bool check_deterministic(const Circuit& c, DeterminismMode mode);

/// Truth table of the circuit over its referenced facts, bit-parallel; the
/// helper behind the semantic determinism check and the oracle-equality
/// tests. Guarded at 20 referenced facts.
Bitset circuit_table(const Circuit& c);

/// Exact probability by a single bottom-up pass (AND -> product, OR -> sum,
/// NOT -> 1-x). Refuses to run unless the circuit passes check_decomposable
/// and check_deterministic in the requested mode; use
/// probability_unchecked to skip the checks.
Rat probability(const Circuit& c, const TidDatabase& db, DeterminismMode mode);
Rat probability_unchecked(const Circuit& c, const TidDatabase& db);

/// Plugs the leaf circuits into the holes of the fragmentation's template.
/// leaf_circuits[i] must capture the query of the fragmentation's leaf i on
/// the same database; the template's OR gates get kTemplateOr certificates
/// from the leaf functions.
Circuit compose_template(const Fragmentation& frag, const std::vector<Circuit>& leaf_circuits);

struct HardnessVerdict;

/// Raised by compile_query on nonzero Euler characteristic; carries the
/// hardness classification of the function.
struct NotCompilableError : DomainError {
  long long euler;
  std::string verdict;
  NotCompilableError(long long e, std::string v);
};

/// The end-to-end compiler: fragment f, compile each degenerate leaf, and
/// compose. Requires euler(f) == 0; the output is deterministic and
/// decomposable by construction and its probability equals the brute-force
/// oracle.
Circuit compile_query(const BoolFun& f, const TidDatabase& db);

/// Circuit file (.ddc) round trip. Fact indices are renumbered compactly in
/// first-use order on export; gates, children and fact labels are
/// preserved exactly.
std::string export_circuit(const Circuit& c);
Circuit import_circuit(std::string_view text);

}  // namespace eulerdd
