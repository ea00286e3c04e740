#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "eulerdd/boolfun.hpp"
#include "eulerdd/transform.hpp"

namespace eulerdd {

enum class HardnessKind { kTractableDd, kSharpPHard, kUnknownConjecturedHard };

struct HardnessVerdict {
  HardnessKind kind;
  long long euler = 0;
  std::string reason;
};

std::string describe(const HardnessVerdict& v);

/// Classification of the query induced by f:
///   - euler 0: compilable to a deterministic decomposable circuit, hence
///     tractable;
///   - monotone with nonzero euler: #P-hard;
///   - nonzero euler within the range the monotone functions achieve:
///     #P-hard by reduction to a monotone function of equal euler (the
///     range is exact for k <= 4 and certified by explicit threshold
///     constructions above that);
///   - otherwise: conjectured #P-hard, not proven.
HardnessVerdict classify(const BoolFun& f);

/// Calls fn for every monotone function on {0..k}, enumerated by walking
/// up-sets top-down (no filtering of the full function space). k <= 5.
void for_each_monotone(int k, const std::function<void(const BoolFun&)>& fn);

struct ExtremaReport {
  long long min_euler = 0;
  long long max_euler = 0;
  /// Euler characteristic of each threshold function
  /// sat = { v : |v| >= threshold }; these are the candidate extremal
  /// constructions.
  struct Candidate {
    int threshold;
    long long euler;
  };
  std::vector<Candidate> candidates;
  /// True iff some threshold function attains max(|min|, |max|).
  bool candidate_attains_extreme = false;
};

/// Exact signed extrema of the Euler characteristic over all monotone
/// functions, by exhaustive enumeration; k <= 4.
ExtremaReport monotone_euler_extrema(int k);

/// A monotone function with euler exactly c, built by descending from an
/// extremal function, removing one maximal-size satisfying valuation at a
/// time (each removal moves euler by one and preserves monotonicity).
/// Requires k <= 4 and c nonzero within the extrema of the matching sign.
BoolFun monotone_with_euler(long long c, int k);

enum class MatchSide { kColored, kUncolored };

struct Matching {
  std::vector<std::pair<Valuation, Valuation>> edges;
};

/// Maximum matching (augmenting paths) on the subgraph of the valuation
/// hypercube induced by the satisfying (kColored) or unsatisfying
/// (kUncolored) valuations; returns it only if it is perfect.
std::optional<Matching> induced_perfect_matching(const BoolFun& f, MatchSide side);

/// A trace of only removal steps from f to the always-false function, built
/// from a perfect matching on the satisfying valuations; empty when no such
/// matching exists. Such a trace exists iff the matching does.
std::optional<RewriteTrace> minus_only_reduction(const BoolFun& f);

struct ConjectureReport {
  int k = 0;
  uint64_t monotone_count = 0;
  uint64_t euler_zero_count = 0;
  uint64_t colored_matched = 0;
  uint64_t uncolored_matched = 0;
  uint64_t both_matched = 0;
  /// Monotone euler-zero functions where neither side has a perfect
  /// matching (serialized); empty means the conjecture held at this k.
  std::vector<std::string> counterexamples;
  /// Functions where exactly one side matched.
  std::vector<std::string> one_sided_examples;
};

/// Sweeps every monotone function with euler 0 and checks that the
/// satisfying or the unsatisfying side of the hypercube has a perfect
/// matching. k <= 5 (enumeration grows as the Dedekind numbers); the sweep
/// partitions the function space across jobs workers, with order-independent
/// aggregation so the report is identical for any worker count.
ConjectureReport conjecture_check(int k, int jobs = 1);

struct EulerZeroCount {
  mpz_class formula;  // sum over j of C(2^k, j)^2 = C(2^(k+1), 2^k)
  std::optional<uint64_t> enumerated;
  bool match = true;  // formula vs enumeration when the latter ran
};

/// Number of functions on {0..k} with Euler characteristic zero. The
/// closed form works for any k <= 20; check mode additionally enumerates
/// all functions (k <= 3) and compares.
EulerZeroCount count_euler_zero(int k, bool check = false);

}  // namespace eulerdd
