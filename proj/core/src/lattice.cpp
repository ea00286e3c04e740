#include "eulerdd/lattice.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>
#include <unordered_set>

#include "eulerdd/errors.hpp"

namespace eulerdd {

namespace {

bool mask_less(uint32_t a, uint32_t b) {
  return std::pair(std::popcount(a), a) < std::pair(std::popcount(b), b);
}

std::vector<long long> binomial_row_table(int n) {
  // table[i][j] = C(i, j); n stays below 23 so long long is exact.
  std::vector<long long> flat((n + 1) * (n + 1), 0);
  auto at = [&](int i, int j) -> long long& { return flat[i * (n + 1) + j]; };
  for (int i = 0; i <= n; ++i) {
    at(i, 0) = 1;
    for (int j = 1; j <= i; ++j) at(i, j) = at(i - 1, j - 1) + (j <= i - 1 ? at(i - 1, j) : 0);
  }
  return flat;
}

}  // namespace

int MobiusLattice::index_of(uint32_t mask) const {
  auto it = std::lower_bound(elements.begin(), elements.end(), mask, mask_less);
  if (it == elements.end() || *it != mask) return -1;
  return static_cast<int>(it - elements.begin());
}

MobiusLattice clause_lattice(const std::vector<Valuation>& clauses) {
  // Closure under union: fold the clauses in one at a time.
  std::unordered_set<uint32_t> seen = {0};
  for (Valuation c : clauses) {
    std::vector<uint32_t> current(seen.begin(), seen.end());
    for (uint32_t x : current) seen.insert(x | c.bits());
    if (seen.size() > kMaxLatticeElements)
      throw DomainError("clause lattice exceeds " + std::to_string(kMaxLatticeElements) +
                        " elements");
  }

  MobiusLattice lat;
  lat.elements.assign(seen.begin(), seen.end());
  std::sort(lat.elements.begin(), lat.elements.end(), mask_less);

  // mu(top, top) = 1; mu(x, top) = -sum of mu(w, top) over elements w that
  // sit strictly between x and the top, i.e. strict subsets of x here.
  // Sorting by size means every strict subset precedes its supersets.
  lat.mobius_to_top.assign(lat.elements.size(), 0);
  lat.mobius_to_top[0] = 1;
  for (std::size_t i = 1; i < lat.elements.size(); ++i) {
    long long acc = 0;
    for (std::size_t j = 0; j < i; ++j)
      if ((lat.elements[j] & ~lat.elements[i]) == 0) acc += lat.mobius_to_top[j];
    lat.mobius_to_top[i] = -acc;
  }
  return lat;
}

Safety safety_by_mobius(const BoolFun& f) {
  if (!f.is_monotone())
    throw DomainError("the lattice safety criterion is only stated for monotone functions");
  if (f.is_degenerate()) return Safety::kPtime;
  MobiusLattice lat = clause_lattice(f.minimized_cnf());
  return lat.mobius_hat() == 0 ? Safety::kPtime : Safety::kSharpPHard;
}

BigCoeffReport verify_big_coeff(const BoolFun& f) {
  if (!f.is_monotone() || f.is_degenerate())
    throw DomainError("the Euler/Mobius agreement check requires a nondegenerate monotone "
                      "function");
  BigCoeffReport r;
  r.euler = f.euler();
  r.mobius_cnf = clause_lattice(f.minimized_cnf()).mobius_hat();
  r.mobius_dnf = clause_lattice(f.minimized_dnf()).mobius_hat();
  long long sign = (f.k() & 1) ? -1 : 1;
  r.ok = r.euler == r.mobius_cnf && r.euler == sign * r.mobius_dnf;
  return r;
}

CharPolyTriple characteristic_polynomials(const BoolFun& f) {
  if (!f.is_monotone() || f.is_degenerate())
    throw DomainError("characteristic polynomials require a nondegenerate monotone function");
  const int n = f.var_count();  // k + 1
  auto binom = binomial_row_table(n);
  auto c = [&](int i, int j) { return binom[i * (n + 1) + j]; };

  CharPolyTriple out;
  out.direct.coeffs.assign(n + 1, Rat(0));
  out.cnf.coeffs.assign(n + 1, Rat(0));
  out.dnf.coeffs.assign(n + 1, Rat(0));

  // Expand sum over sat(f) of t^s (1-t)^(n-s).
  for (Valuation v : f.sat_list()) {
    int s = v.size();
    for (int j = 0; j + s <= n; ++j)
      out.direct.coeffs[s + j] += Rat(static_cast<long>((j & 1) ? -c(n - s, j) : c(n - s, j)));
  }

  // Expand sum over the CNF lattice of mu(x, top) (1-t)^|x|.
  MobiusLattice cnf = clause_lattice(f.minimized_cnf());
  for (std::size_t i = 0; i < cnf.size(); ++i) {
    int a = std::popcount(cnf.elements[i]);
    for (int j = 0; j <= a; ++j)
      out.cnf.coeffs[j] += Rat(static_cast<long>(cnf.mobius_to_top[i] * ((j & 1) ? -c(a, j) : c(a, j))));
  }

  // 1 - sum over the DNF lattice of mu(x, top) t^|x|.
  MobiusLattice dnf = clause_lattice(f.minimized_dnf());
  out.dnf.coeffs[0] += Rat(1);
  for (std::size_t i = 0; i < dnf.size(); ++i)
    out.dnf.coeffs[std::popcount(dnf.elements[i])] -= Rat(static_cast<long>(dnf.mobius_to_top[i]));

  return out;
}

bool mobius_inversion_check(const MobiusLattice& lattice, const std::vector<Rat>& f) {
  const std::size_t n = lattice.size();
  if (f.size() != n) throw DomainError("f must assign a value to every lattice element");

  // u <= x in the lattice order iff u is a superset of x as a mask.
  auto leq = [&](std::size_t u, std::size_t x) {
    return (lattice.elements[x] & ~lattice.elements[u]) == 0;
  };

  std::vector<Rat> g(n, Rat(0));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t u = 0; u < n; ++u)
      if (leq(u, x)) g[x] += f[u];

  // Recover f(x) = sum_{u <= x} mu(u, x) g(u), recomputing mu(., x) for each
  // x by the same recurrence used against the top.
  for (std::size_t x = 0; x < n; ++x) {
    std::vector<long long> mu(n, 0);
    // Elements u >= size of x come later in the sorted order; walk upward.
    mu[x] = 1;
    for (std::size_t u = x + 1; u < n; ++u) {
      if (!leq(u, x)) continue;
      long long acc = 0;
      for (std::size_t w = x; w < u; ++w)
        if (leq(w, x) && (lattice.elements[w] & ~lattice.elements[u]) == 0) acc += mu[w];
      mu[u] = -acc;
    }
    Rat recovered(0);
    for (std::size_t u = 0; u < n; ++u)
      if (leq(u, x) && mu[u] != 0) recovered += Rat(static_cast<long>(mu[u])) * g[u];
    if (recovered != f[x]) return false;
  }
  return true;
}

std::string lattice_to_dot(const MobiusLattice& lattice) {
  auto label = [](uint32_t mask) {
    if (mask == 0) return std::string("{}");
    std::string s = "{";
    for (int l = 0; l < 32; ++l)
      if ((mask >> l) & 1) {
        if (s.size() > 1) s += ",";
        s += std::to_string(l);
      }
    return s + "}";
  };

  std::string dot = "digraph lattice {\n  rankdir=BT;\n  node [shape=box];\n";
  for (std::size_t i = 0; i < lattice.size(); ++i)
    dot += "  n" + std::to_string(i) + " [label=\"" + label(lattice.elements[i]) +
           "\\nmu=" + std::to_string(lattice.mobius_to_top[i]) + "\"];\n";
  // Hasse edges: draw x -> u when u is an immediate strict subset of x.
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      uint32_t sub = lattice.elements[j], sup = lattice.elements[i];
      if ((sub & ~sup) != 0 || sub == sup) continue;
      bool covering = true;
      for (std::size_t m = 0; m < lattice.size() && covering; ++m) {
        uint32_t mid = lattice.elements[m];
        if (mid != sub && mid != sup && (sub & ~mid) == 0 && (mid & ~sup) == 0) covering = false;
      }
      if (covering)
        dot += "  n" + std::to_string(i) + " -> n" + std::to_string(j) + ";\n";
    }
  }
  dot += "}\n";
  return dot;
}

}  // namespace eulerdd
