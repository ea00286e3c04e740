#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "eulerdd/boolfun.hpp"

namespace eulerdd {

enum class StepSign { kPlus, kMinus };

/// One rewrite step: add (kPlus) or remove (kMinus) the adjacent pair
/// {nu, nu with var flipped} from the satisfying set.
struct RewriteStep {
  StepSign sign;
  Valuation nu;
  int var;

  bool operator==(const RewriteStep&) const = default;
};

/// A sequence of rewrite steps anchored at a start function, so any prefix
/// can be replayed. Each step must be valid at the function reached so far;
/// the Euler characteristic is invariant along a valid trace.
struct RewriteTrace {
  BoolFun start;
  std::vector<RewriteStep> steps;
};

/// Applies one step, enforcing its precondition: a plus step requires both
/// valuations of the pair to be unsatisfying, a minus step requires both to
/// be satisfying. The satisfying count changes by exactly two.
BoolFun apply_step(const BoolFun& f, const RewriteStep& step);

struct TraceCheck {
  bool ok = false;
  std::size_t failed_index = 0;  // meaningful when !ok
  std::string message;
};

/// Replays the trace from its start; succeeds iff every step is valid in
/// sequence and the final function equals expected_end.
TraceCheck verify_trace(const RewriteTrace& trace, const BoolFun& expected_end);

/// Replays a trace and returns the function it ends at.
BoolFun replay(const RewriteTrace& trace);

/// The same trace read backwards: plus and minus steps swap roles. If the
/// original verifies from start to end, the reversal verifies from end to
/// start.
RewriteTrace reversed(const RewriteTrace& trace, const BoolFun& new_start);

/// Steps that remove both endpoints of a hypercube path whose endpoints
/// satisfy f, whose interior does not, and whose endpoints have opposite
/// size parity (an even number of interior nodes). The steps follow the
/// interleaved color/uncolor schedule, so the satisfying set never grows by
/// more than two.
std::vector<RewriteStep> chainkill(const BoolFun& f, const std::vector<Valuation>& path);

/// Steps that move the color from the first path endpoint (satisfying) to
/// the last one (unsatisfying) along a path with unsatisfying interior and
/// endpoints of equal size parity.
std::vector<RewriteStep> chainswap(const BoolFun& f, const std::vector<Valuation>& path);

struct FetchedPair {
  Valuation nu;
  Valuation nu_prime;
  std::vector<Valuation> path;  // nu ... nu_prime, interior unsatisfying
};

/// Finds two satisfying valuations of opposite size parity joined by a path
/// whose interior avoids the satisfying set. Defined whenever the satisfying
/// count differs from |euler|. Deterministic: endpoints are chosen smallest
/// first and paths walk lexicographically smallest masks.
FetchedPair fetch_pair(const BoolFun& f);

/// Trace from f to the always-false function; requires euler(f) == 0.
RewriteTrace reduce_to_bot(const BoolFun& f);

/// Trace from f to a function whose satisfying valuations all have even
/// size (the end function then has exactly euler(f) of them). Requires
/// euler(f) >= 0; for negative values negate first and flip the signs of
/// the resulting steps.
RewriteTrace to_even_support(const BoolFun& f);

/// True iff f has only even-size satisfying valuations and no "bad pair":
/// no even-size unsatisfying valuation strictly smaller than some
/// satisfying one.
bool is_canonical_form(const BoolFun& f);

/// Trace from an even-support function to its canonical form.
RewriteTrace canonicalize(const BoolFun& f);

/// Trace from f to g; exists iff euler(f) == euler(g), and an error is
/// raised otherwise. Built by normalizing both sides to canonical form and
/// aligning the top satisfying layer with chainswaps.
RewriteTrace equivalence_witness(const BoolFun& f, const BoolFun& g);

/// Lexicographically smallest shortest hypercube path from a to b
/// (inclusive of both endpoints).
std::vector<Valuation> shortest_path(Valuation a, Valuation b);

/// The hypercube on valuations with the satisfying ones colored; a thin
/// view used by the matching analyses and DOT output.
struct ColoredGraph {
  const BoolFun& fun;

  int k() const { return fun.k(); }
  bool colored(Valuation v) const { return fun(v); }
  std::vector<Valuation> neighbors(Valuation v) const;
};

std::string colored_graph_to_dot(const BoolFun& f);

/// Trace file (.trace) body: `k <int>` then one step per line in the form
/// `<+|-> <var> : <valuation|.>`. The start function is not part of the
/// format.
struct TraceFile {
  int k = 1;
  std::vector<RewriteStep> steps;
};
TraceFile parse_trace(std::string_view text);
std::string serialize_trace(int k, const std::vector<RewriteStep>& steps);

}  // namespace eulerdd
