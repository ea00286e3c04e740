#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "eulerdd/analysis.hpp"
#include "eulerdd/lattice.hpp"
#include "eulerdd/circuit.hpp"
#include "eulerdd/errors.hpp"
#include "fixtures.hpp"

using namespace eulerdd;

namespace {

Valuation val(std::initializer_list<int> ls) {
  uint32_t bits = 0;
  for (int l : ls) bits |= uint32_t{1} << l;
  return Valuation(bits);
}

// Independent reachability check: can the function be emptied with removal
// steps only? Memoized search over satisfying sets (test-side oracle for the
// matching-based implementation).
bool minus_search(const BoolFun& f) {
  std::set<uint64_t> visited;
  std::function<bool(const BoolFun&)> go = [&](const BoolFun& g) -> bool {
    if (g.is_bottom()) return true;
    if (!visited.insert(g.table().words()[0]).second) return false;
    for (uint32_t v = 0; v < g.valuation_count(); ++v)
      for (int l = 0; l <= g.k(); ++l) {
        Valuation a(v), b = a.flipped(l);
        if (a.bits() < b.bits() && g(a) && g(b)) {
          BoolFun next = apply_step(g, {StepSign::kMinus, a, l});
          if (go(next)) return true;
        }
      }
    return false;
  };
  return go(f);
}

bool matching_is_valid(const Matching& m, const BoolFun& f, MatchSide side) {
  const bool want = side == MatchSide::kColored;
  std::set<uint32_t> covered;
  for (auto [a, b] : m.edges) {
    if (!a.adjacent_to(b)) return false;
    if (f(a) != want || f(b) != want) return false;
    if (!covered.insert(a.bits()).second) return false;
    if (!covered.insert(b.bits()).second) return false;
  }
  std::size_t side_size = 0;
  for (uint32_t v = 0; v < f.valuation_count(); ++v)
    if (f(Valuation(v)) == want) ++side_size;
  return covered.size() == side_size;
}

}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("classification of the three regions") {
    HardnessVerdict tractable = classify(fixtures::monotone_safe_k3());
    CHECK(tractable.kind == HardnessKind::kTractableDd);
    CHECK(tractable.euler == 0);

    HardnessVerdict hard = classify(parse_function("k 1\nformula 0&1\n"));
    CHECK(hard.kind == HardnessKind::kSharpPHard);
    CHECK(hard.euler == 1);

    HardnessVerdict unknown = classify(fixtures::all_even_k(3));
    CHECK(unknown.kind == HardnessKind::kUnknownConjecturedHard);
    CHECK(unknown.euler == 8);

    // Nonmonotone but within the monotone range: still hard.
    BoolFun in_range = bf_not(parse_function("k 1\nformula 0&1\n"));
    REQUIRE(in_range.euler() == -1);
    REQUIRE_FALSE(in_range.is_monotone());
    CHECK(classify(in_range).kind == HardnessKind::kSharpPHard);
  }

  TEST_CASE("tractable exactly when the compiler succeeds, exhaustive k<=3") {
    std::mt19937_64 rng(109);
    for (int k : {1, 2, 3}) {
      TidDatabase db = fixtures::random_db(k, 1, rng);
      fixtures::for_each_function(k, [&](const BoolFun& f) {
        bool tractable = classify(f).kind == HardnessKind::kTractableDd;
        bool compiled = true;
        try {
          compile_query(f, db);
        } catch (const NotCompilableError&) {
          compiled = false;
        }
        CHECK(tractable == compiled);
      });
    }
  }

  TEST_CASE("the lattice safety verdict is the euler test, all monotone k<=3") {
    for (int k : {1, 2, 3})
      for_each_monotone(k, [&](const BoolFun& f) {
        bool ptime = safety_by_mobius(f) == Safety::kPtime;
        CHECK(ptime == (f.euler() == 0));
      });
  }

  TEST_CASE("monotone enumeration hits the known counts") {
    std::map<int, uint64_t> expected = {{1, 6}, {2, 20}, {3, 168}, {4, 7581}};
    for (auto [k, count] : expected) {
      uint64_t seen = 0;
      for_each_monotone(k, [&](const BoolFun& f) {
        ++seen;
        CHECK(f.is_monotone());
      });
      CHECK(seen == count);
    }
    CHECK_THROWS_AS(for_each_monotone(9, [](const BoolFun&) {}), DomainError);
  }

  TEST_CASE("enumeration agrees with filtering the full function space, k<=2") {
    for (int k : {1, 2}) {
      std::set<uint64_t> enumerated, filtered;
      for_each_monotone(k, [&](const BoolFun& f) { enumerated.insert(f.table().words()[0]); });
      fixtures::for_each_function(k, [&](const BoolFun& f) {
        if (f.is_monotone()) filtered.insert(f.table().words()[0]);
      });
      CHECK(enumerated == filtered);
    }
  }

  TEST_CASE("signed euler extrema over monotone functions") {
    ExtremaReport k1 = monotone_euler_extrema(1);
    CHECK(k1.min_euler == -1);
    CHECK(k1.max_euler == 1);
    CHECK(k1.candidate_attains_extreme);

    // The range is not symmetric in general.
    ExtremaReport k2 = monotone_euler_extrema(2);
    CHECK(k2.min_euler == -1);
    CHECK(k2.max_euler == 2);
    CHECK(k2.candidate_attains_extreme);

    CHECK_THROWS_AS(monotone_euler_extrema(5), DomainError);
  }

  TEST_CASE("extrema agree with an independent filter of all functions, k<=3") {
    for (int k : {1, 2, 3}) {
      long long lo = 0, hi = 0;
      fixtures::for_each_function(k, [&](const BoolFun& f) {
        if (!f.is_monotone()) return;
        lo = std::min(lo, f.euler());
        hi = std::max(hi, f.euler());
      });
      ExtremaReport r = monotone_euler_extrema(k);
      CHECK(r.min_euler == lo);
      CHECK(r.max_euler == hi);
      CHECK(r.candidate_attains_extreme);
    }
  }

  TEST_CASE("every euler value inside the extrema is constructible") {
    for (int k : {1, 2, 3}) {
      ExtremaReport r = monotone_euler_extrema(k);
      for (long long c = r.min_euler; c <= r.max_euler; ++c) {
        if (c == 0) continue;
        BoolFun f = monotone_with_euler(c, k);
        CHECK(f.is_monotone());
        CHECK(f.euler() == c);
      }
    }
    // The extremal value itself is returned directly.
    ExtremaReport r3 = monotone_euler_extrema(3);
    CHECK(monotone_with_euler(r3.max_euler, 3).euler() == r3.max_euler);
    // 2^k is out of reach for every k >= 1.
    for (int k : {1, 2, 3}) {
      CHECK_THROWS_AS(monotone_with_euler(int64_t{1} << k, k), DomainError);
      CHECK_THROWS_AS(monotone_with_euler(0, k), DomainError);
    }
  }

  TEST_CASE("perfect matchings on the golden matching-free function") {
    BoolFun f = fixtures::no_matching_k4();
    CHECK(f.euler() == 0);
    CHECK_FALSE(induced_perfect_matching(f, MatchSide::kColored).has_value());
    CHECK_FALSE(induced_perfect_matching(f, MatchSide::kUncolored).has_value());
    CHECK_FALSE(f.is_monotone());  // the conjecture exempts it
  }

  TEST_CASE("matchings are disjoint adjacent edge covers") {
    BoolFun f = BoolFun::from_sat(1, {val({}), val({0})});
    auto m = induced_perfect_matching(f, MatchSide::kColored);
    REQUIRE(m.has_value());
    CHECK(m->edges.size() == 1);
    CHECK(matching_is_valid(*m, f, MatchSide::kColored));

    std::mt19937_64 rng(113);
    for (int trial = 0; trial < 100; ++trial) {
      BoolFun g = fixtures::random_fun(3, rng);
      for (MatchSide side : {MatchSide::kColored, MatchSide::kUncolored}) {
        auto match = induced_perfect_matching(g, side);
        if (match) CHECK(matching_is_valid(*match, g, side));
      }
    }
  }

  TEST_CASE("removal-only reduction works exactly when the colored side matches") {
    // Exhaustive at k<=2 against an independent search.
    for (int k : {1, 2})
      fixtures::for_each_function(k, [&](const BoolFun& f) {
        auto trace = minus_only_reduction(f);
        CHECK(trace.has_value() == minus_search(f));
        if (trace) {
          CHECK(verify_trace(*trace, BoolFun::bottom(k)).ok);
          for (const RewriteStep& s : trace->steps) CHECK(s.sign == StepSign::kMinus);
        }
      });
    // Random spot checks at k=3.
    std::mt19937_64 rng(127);
    for (int trial = 0; trial < 60; ++trial) {
      BoolFun f = fixtures::random_fun(3, rng);
      auto trace = minus_only_reduction(f);
      CHECK(trace.has_value() == minus_search(f));
      if (trace) CHECK(verify_trace(*trace, BoolFun::bottom(3)).ok);
    }
  }

  TEST_CASE("conjecture sweep is clean for small k") {
    for (int k : {1, 2, 3}) {
      ConjectureReport r = conjecture_check(k);
      CHECK(r.counterexamples.empty());
      CHECK(r.euler_zero_count > 0);
      CHECK(r.colored_matched + r.uncolored_matched >= r.euler_zero_count);
    }
    CHECK(conjecture_check(2).monotone_count == 20);
  }

  TEST_CASE("the parallel sweep aggregates to the serial report") {
    ConjectureReport serial = conjecture_check(4, 1);
    ConjectureReport parallel = conjecture_check(4, 4);
    CHECK(serial.monotone_count == parallel.monotone_count);
    CHECK(serial.euler_zero_count == parallel.euler_zero_count);
    CHECK(serial.colored_matched == parallel.colored_matched);
    CHECK(serial.uncolored_matched == parallel.uncolored_matched);
    CHECK(serial.both_matched == parallel.both_matched);
    CHECK(serial.counterexamples == parallel.counterexamples);
    CHECK(serial.one_sided_examples == parallel.one_sided_examples);
  }

  TEST_CASE("euler-zero counting: formula vs enumeration") {
    EulerZeroCount k1 = count_euler_zero(1, true);
    CHECK(k1.formula == 6);
    CHECK(k1.enumerated == 6);
    CHECK(k1.match);

    EulerZeroCount k2 = count_euler_zero(2, true);
    CHECK(k2.formula == 70);  // the central binomial C(8,4)
    CHECK(k2.enumerated == 70);
    CHECK(k2.match);

    EulerZeroCount k3 = count_euler_zero(3, true);
    CHECK(k3.formula == 12870);
    CHECK(k3.match);

    CHECK(count_euler_zero(4).formula == mpz_class("601080390"));            // C(32,16)
    CHECK(count_euler_zero(5).formula == mpz_class("1832624140942590534"));  // C(64,32)

    CHECK_THROWS_AS(count_euler_zero(0), DomainError);
    CHECK_THROWS_AS(count_euler_zero(4, true), DomainError);
  }

  TEST_CASE("every monotone euler sits inside the extrema, k<=3") {
    for (int k : {1, 2, 3}) {
      ExtremaReport r = monotone_euler_extrema(k);
      for_each_monotone(k, [&](const BoolFun& f) {
        CHECK(f.euler() >= r.min_euler);
        CHECK(f.euler() <= r.max_euler);
      });
    }
  }
}
