#include "eulerdd/analysis.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <thread>

#include "eulerdd/errors.hpp"

namespace eulerdd {

namespace {

constexpr int kEnumerationMaxK = 5;
constexpr int kExtremaMaxK = 4;

long long threshold_euler(int k, int threshold) {
  // Euler characteristic of { v : |v| >= threshold } on k+1 variables.
  long long e = 0;
  for (int j = threshold; j <= k + 1; ++j) {
    long long binom = 1;
    for (int i = 0; i < j; ++i) binom = binom * (k + 1 - i) / (i + 1);
    e += (j & 1) ? -binom : binom;
  }
  return e;
}

std::pair<long long, long long> exact_extrema(int k) {
  static std::mutex mu;
  static std::map<int, std::pair<long long, long long>> cache;
  std::scoped_lock lock(mu);
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;
  long long lo = 0, hi = 0;
  for_each_monotone(k, [&](const BoolFun& f) {
    long long e = f.euler();
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  });
  return cache.emplace(k, std::pair(lo, hi)).first->second;
}

// Range of euler values certified achievable by monotone functions for any
// k: every threshold function is monotone, and removing maximal satisfying
// valuations one at a time walks its euler to 0 in unit steps through
// monotone functions.
std::pair<long long, long long> certified_extrema(int k) {
  long long lo = 0, hi = 0;
  for (int r = 0; r <= k + 1; ++r) {
    long long e = threshold_euler(k, r);
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  return {lo, hi};
}

}  // namespace

std::string describe(const HardnessVerdict& v) {
  std::string kind;
  switch (v.kind) {
    case HardnessKind::kTractableDd:
      kind = "TRACTABLE_DD";
      break;
    case HardnessKind::kSharpPHard:
      kind = "SHARP_P_HARD";
      break;
    case HardnessKind::kUnknownConjecturedHard:
      kind = "UNKNOWN_CONJECTURED_HARD";
      break;
  }
  return kind + " (euler " + std::to_string(v.euler) + "; " + v.reason + ")";
}

HardnessVerdict classify(const BoolFun& f) {
  long long e = f.euler();
  if (e == 0)
    return {HardnessKind::kTractableDd, e,
            "zero euler characteristic: the query compiles to a deterministic decomposable "
            "circuit in polynomial time"};
  if (f.is_monotone())
    return {HardnessKind::kSharpPHard, e, "monotone with nonzero euler characteristic"};

  auto [lo, hi] = f.k() <= kExtremaMaxK ? exact_extrema(f.k()) : certified_extrema(f.k());
  if (e >= lo && e <= hi)
    return {HardnessKind::kSharpPHard, e,
            "nonzero euler characteristic achieved by a monotone function (within [" +
                std::to_string(lo) + ", " + std::to_string(hi) + "])"};
  return {HardnessKind::kUnknownConjecturedHard, e,
          "nonzero euler characteristic outside the monotone range [" + std::to_string(lo) +
              ", " + std::to_string(hi) + "]; conjectured hard, not proven"};
}

namespace {

// One slot per valuation in descending-size order: the mask of covers that
// must already be satisfying, and the valuation's own table bit.
struct UpSetSlot {
  uint64_t covers;
  uint64_t bit;
};

void upset_rec(const UpSetSlot* slots, std::size_t i, std::size_t n, uint64_t sat,
               const std::function<void(uint64_t)>& fn) {
  if (i == n) {
    fn(sat);
    return;
  }
  upset_rec(slots, i + 1, n, sat, fn);
  if ((sat & slots[i].covers) == slots[i].covers)
    upset_rec(slots, i + 1, n, sat | slots[i].bit, fn);
}

// Up-set enumeration over table masks (the table fits one word for the
// supported k). Valuations are decided in descending-size order; "true" is
// allowed exactly when all covers are already true.
void for_each_monotone_mask(int k, const std::function<void(uint64_t)>& fn) {
  if (k < 1 || k > kEnumerationMaxK)
    throw DomainError("monotone enumeration supports 1 <= k <= " +
                      std::to_string(kEnumerationMaxK));
  const uint32_t n = uint32_t{1} << (k + 1);

  std::vector<uint32_t> order(n);
  for (uint32_t v = 0; v < n; ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [](uint32_t a, uint32_t b) {
    return std::pair(-std::popcount(a), a) < std::pair(-std::popcount(b), b);
  });

  std::vector<UpSetSlot> slots(n);
  for (uint32_t i = 0; i < n; ++i) {
    uint32_t v = order[i];
    uint64_t covers = 0;
    for (int l = 0; l <= k; ++l) {
      uint32_t up = v | (uint32_t{1} << l);
      if (up != v) covers |= uint64_t{1} << up;
    }
    slots[i] = {covers, uint64_t{1} << v};
  }
  upset_rec(slots.data(), 0, n, 0, fn);
}

BoolFun fun_from_mask(int k, uint64_t mask) {
  Bitset table(uint32_t{1} << (k + 1));
  table.words()[0] = mask;
  return BoolFun::from_table(k, std::move(table));
}

}  // namespace

void for_each_monotone(int k, const std::function<void(const BoolFun&)>& fn) {
  for_each_monotone_mask(k, [&](uint64_t mask) { fn(fun_from_mask(k, mask)); });
}

ExtremaReport monotone_euler_extrema(int k) {
  if (k < 1 || k > kExtremaMaxK)
    throw DomainError("exhaustive extrema supports 1 <= k <= " + std::to_string(kExtremaMaxK));
  ExtremaReport report;
  auto [lo, hi] = exact_extrema(k);
  report.min_euler = lo;
  report.max_euler = hi;
  for (int r = 0; r <= k + 1; ++r)
    report.candidates.push_back({r, threshold_euler(k, r)});
  long long best = std::max(std::llabs(lo), std::llabs(hi));
  for (const auto& c : report.candidates)
    if (std::llabs(c.euler) == best) report.candidate_attains_extreme = true;
  return report;
}

BoolFun monotone_with_euler(long long c, int k) {
  if (k < 1 || k > kExtremaMaxK)
    throw DomainError("this construction supports 1 <= k <= " + std::to_string(kExtremaMaxK));
  auto [lo, hi] = exact_extrema(k);
  if (c == 0 || c < lo || c > hi)
    throw DomainError("euler characteristic " + std::to_string(c) +
                      " is not reachable by a monotone function for k=" + std::to_string(k) +
                      " (nonzero values within [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "])");

  // Start from the first enumerated extremal function of the right sign.
  std::optional<BoolFun> start;
  for_each_monotone(k, [&](const BoolFun& f) {
    if (!start && f.euler() == (c > 0 ? hi : lo)) start = f;
  });

  BoolFun cur = *start;
  long long e = cur.euler();
  while (e != c) {
    // Remove the lexicographically smallest satisfying valuation of
    // minimal size. It is inclusion-minimal in the satisfying up-set, so
    // removing it keeps the function monotone, and each removal moves the
    // euler characteristic by exactly one, so every value between the
    // extremum and 0 is visited.
    Valuation victim;
    int best_size = INT32_MAX;
    for (Valuation v : cur.sat_list())
      if (v.size() < best_size) {
        victim = v;
        best_size = v.size();
      }
    cur.set(victim, false);
    e -= victim.sign();
  }
  return cur;
}

std::optional<Matching> induced_perfect_matching(const BoolFun& f, MatchSide side) {
  const bool want = side == MatchSide::kColored;
  std::vector<uint32_t> left, right;  // even / odd sized nodes of the side
  std::vector<int> id(f.valuation_count(), -1);
  for (uint32_t v = 0; v < f.valuation_count(); ++v) {
    if (f(Valuation(v)) != want) continue;
    if (Valuation(v).even_size()) {
      id[v] = static_cast<int>(left.size());
      left.push_back(v);
    } else {
      id[v] = static_cast<int>(right.size());
      right.push_back(v);
    }
  }
  if (left.size() != right.size()) return std::nullopt;

  std::vector<std::vector<int>> adj(left.size());
  for (std::size_t i = 0; i < left.size(); ++i)
    for (int l = 0; l <= f.k(); ++l) {
      uint32_t u = left[i] ^ (uint32_t{1} << l);
      if (f(Valuation(u)) == want) adj[i].push_back(id[u]);
    }

  std::vector<int> match_right(right.size(), -1);
  std::vector<char> visited;
  std::function<bool(int)> augment = [&](int i) -> bool {
    for (int j : adj[i]) {
      if (visited[j]) continue;
      visited[j] = 1;
      if (match_right[j] < 0 || augment(match_right[j])) {
        match_right[j] = i;
        return true;
      }
    }
    return false;
  };

  std::size_t matched = 0;
  for (std::size_t i = 0; i < left.size(); ++i) {
    visited.assign(right.size(), 0);
    if (augment(static_cast<int>(i))) ++matched;
  }
  if (matched != left.size()) return std::nullopt;

  Matching m;
  for (std::size_t j = 0; j < right.size(); ++j)
    m.edges.emplace_back(Valuation(left[match_right[j]]), Valuation(right[j]));
  std::sort(m.edges.begin(), m.edges.end());
  return m;
}

std::optional<RewriteTrace> minus_only_reduction(const BoolFun& f) {
  auto matching = induced_perfect_matching(f, MatchSide::kColored);
  if (!matching) return std::nullopt;
  RewriteTrace trace{f, {}};
  BoolFun cur = f;
  for (auto [a, b] : matching->edges) {
    RewriteStep step{StepSign::kMinus, a, std::countr_zero(a.bits() ^ b.bits())};
    cur = apply_step(cur, step);
    trace.steps.push_back(step);
  }
  if (!cur.is_bottom()) throw Error("internal error: matching does not exhaust the function");
  return trace;
}

ConjectureReport conjecture_check(int k, int jobs) {
  ConjectureReport report;
  report.k = k;

  auto scan = [k](const std::vector<uint64_t>& masks, std::size_t begin, std::size_t end,
                  ConjectureReport& out) {
    for (std::size_t i = begin; i < end; ++i) {
      BoolFun f = fun_from_mask(k, masks[i]);
      if (f.euler() != 0) continue;
      ++out.euler_zero_count;
      bool colored = induced_perfect_matching(f, MatchSide::kColored).has_value();
      bool uncolored = induced_perfect_matching(f, MatchSide::kUncolored).has_value();
      if (colored) ++out.colored_matched;
      if (uncolored) ++out.uncolored_matched;
      if (colored && uncolored) ++out.both_matched;
      if (!colored && !uncolored) out.counterexamples.push_back(serialize_function(f));
      if (colored != uncolored) out.one_sided_examples.push_back(serialize_function(f));
    }
  };

  std::vector<uint64_t> masks;
  for_each_monotone_mask(k, [&](uint64_t mask) { masks.push_back(mask); });
  report.monotone_count = masks.size();

  jobs = std::max(1, jobs);
  if (jobs == 1 || masks.size() < 4096) {
    scan(masks, 0, masks.size(), report);
  } else {
    std::vector<ConjectureReport> partial(jobs);
    std::vector<std::thread> workers;
    std::size_t chunk = masks.size() / jobs + 1;
    for (int j = 0; j < jobs; ++j) {
      std::size_t lo = std::min(masks.size(), j * chunk);
      std::size_t hi = std::min(masks.size(), lo + chunk);
      workers.emplace_back([&, j, lo, hi] { scan(masks, lo, hi, partial[j]); });
    }
    for (auto& t : workers) t.join();
    for (const ConjectureReport& p : partial) {
      report.euler_zero_count += p.euler_zero_count;
      report.colored_matched += p.colored_matched;
      report.uncolored_matched += p.uncolored_matched;
      report.both_matched += p.both_matched;
      report.counterexamples.insert(report.counterexamples.end(), p.counterexamples.begin(),
                                    p.counterexamples.end());
      report.one_sided_examples.insert(report.one_sided_examples.end(),
                                       p.one_sided_examples.begin(), p.one_sided_examples.end());
    }
  }
  std::sort(report.counterexamples.begin(), report.counterexamples.end());
  std::sort(report.one_sided_examples.begin(), report.one_sided_examples.end());
  if (report.one_sided_examples.size() > 8) report.one_sided_examples.resize(8);
  return report;
}

EulerZeroCount count_euler_zero(int k, bool check) {
  if (k < 1) throw DomainError("k must be at least 1");
  if (k > BoolFun::kMaxK)
    throw DomainError("the closed form is supported up to k=" + std::to_string(BoolFun::kMaxK));
  EulerZeroCount out;
  // sum over j of C(2^k, j)^2 = C(2^(k+1), 2^k): pick which even-size slots
  // and equally many odd-size slots satisfy.
  mpz_bin_uiui(out.formula.get_mpz_t(), 1ul << (k + 1), 1ul << k);
  if (check) {
    if (k > 3) throw DomainError("exhaustive counting is limited to k <= 3");
    const uint32_t n = uint32_t{1} << (k + 1);
    uint64_t even_mask = 0;
    for (uint32_t v = 0; v < n; ++v)
      if (std::popcount(v) % 2 == 0) even_mask |= uint64_t{1} << v;
    uint64_t count = 0;
    for (uint64_t table = 0; table < (uint64_t{1} << n); ++table)
      if (std::popcount(table & even_mask) == std::popcount(table & ~even_mask)) ++count;
    out.enumerated = count;
    out.match = out.formula == mpz_class(static_cast<unsigned long>(count));
  }
  return out;
}

}  // namespace eulerdd
