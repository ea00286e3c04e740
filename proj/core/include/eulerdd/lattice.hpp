#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eulerdd/boolfun.hpp"
#include "eulerdd/rational.hpp"

namespace eulerdd {

/// The lattice of all unions of subsets of a clause list, ordered by
/// reversed set inclusion (x <= y iff x is a superset of y). The greatest
/// element (top) is the empty set, the least element (bottom) is the union
/// of all clauses. Only the Mobius values against the top are stored; the
/// full two-argument table is recomputed on demand.
struct MobiusLattice {
  /// Element masks, sorted by (size, value); elements[0] is the top.
  std::vector<uint32_t> elements;
  /// mobius_to_top[i] = mu(elements[i], top).
  std::vector<long long> mobius_to_top;

  std::size_t size() const { return elements.size(); }
  uint32_t top() const { return elements.front(); }
  uint32_t bottom() const { return elements.back(); }
  int index_of(uint32_t mask) const;  // -1 if absent

  /// mu(bottom, top): the safety-deciding value.
  long long mobius_hat() const { return mobius_to_top.back(); }
};

/// Builds the closure of the clause list under union and fills the Mobius
/// values by the top-down recurrence. The closure is computed clause by
/// clause rather than by enumerating all 2^n subsets; it is capped at
/// kMaxLatticeElements elements.
inline constexpr std::size_t kMaxLatticeElements = 4096;
MobiusLattice clause_lattice(const std::vector<Valuation>& clauses);

enum class Safety { kPtime, kSharpPHard };

/// The dichotomy criterion for monotone functions: degenerate functions are
/// tractable, otherwise the CNF lattice decides via mu(bottom, top).
Safety safety_by_mobius(const BoolFun& f);

struct BigCoeffReport {
  long long euler = 0;
  long long mobius_cnf = 0;
  long long mobius_dnf = 0;
  bool ok = false;  // euler == mobius_cnf == (-1)^k * mobius_dnf
};

/// Computes the Euler characteristic and both lattice Mobius values
/// independently and reports whether they agree as expected. Requires a
/// nondegenerate monotone function.
BigCoeffReport verify_big_coeff(const BoolFun& f);

/// Polynomial with exact rational coefficients; coefficient i is the
/// coefficient of t^i.
struct CharPoly {
  std::vector<Rat> coeffs;
  bool operator==(const CharPoly& o) const = default;
};

struct CharPolyTriple {
  CharPoly direct;  // sum over satisfying valuations of t^|v| (1-t)^(k+1-|v|)
  CharPoly cnf;     // sum over CNF lattice of mu(x, top) (1-t)^|x|
  CharPoly dnf;     // 1 - sum over DNF lattice of mu(x, top) t^|x|
};

/// Three independent expressions of the same polynomial; equality of the
/// three is the algebraic bridge between the Euler characteristic and the
/// lattice Mobius values. Requires a nondegenerate monotone function.
CharPolyTriple characteristic_polynomials(const BoolFun& f);

/// Round-trips f through the summation g(x) = sum_{u <= x} f(u) and the
/// Mobius inversion, returning true iff f is recovered exactly.
/// f is indexed like MobiusLattice::elements.
bool mobius_inversion_check(const MobiusLattice& lattice, const std::vector<Rat>& f);

/// Hasse diagram in DOT format, one node per element annotated with its
/// Mobius value against the top.
std::string lattice_to_dot(const MobiusLattice& lattice);

}  // namespace eulerdd
