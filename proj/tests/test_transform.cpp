#include <doctest.h>

#include <random>

#include "eulerdd/errors.hpp"
#include "eulerdd/transform.hpp"
#include "fixtures.hpp"

using namespace eulerdd;

namespace {

Valuation val(std::initializer_list<int> ls) {
  uint32_t bits = 0;
  for (int l : ls) bits |= uint32_t{1} << l;
  return Valuation(bits);
}

// Returns a uniformly random valid step for the function, if any exists.
std::optional<RewriteStep> random_valid_step(const BoolFun& f, std::mt19937_64& rng) {
  std::vector<RewriteStep> candidates;
  for (uint32_t v = 0; v < f.valuation_count(); ++v)
    for (int l = 0; l <= f.k(); ++l) {
      Valuation a(v), b = a.flipped(l);
      if (f(a) && f(b)) candidates.push_back({StepSign::kMinus, a, l});
      if (!f(a) && !f(b)) candidates.push_back({StepSign::kPlus, a, l});
    }
  if (candidates.empty()) return std::nullopt;
  return candidates[rng() % candidates.size()];
}

}  // namespace

TEST_SUITE("transform") {
  TEST_CASE("apply_step adds or removes exactly one adjacent pair") {
    BoolFun bot = BoolFun::bottom(1);
    BoolFun two = apply_step(bot, {StepSign::kPlus, val({}), 0});
    CHECK(two == BoolFun::from_sat(1, {val({}), val({0})}));
    CHECK(apply_step(two, {StepSign::kMinus, val({}), 0}) == bot);
    CHECK_THROWS_AS(apply_step(two, {StepSign::kPlus, val({}), 0}), DomainError);
    CHECK_THROWS_AS(apply_step(bot, {StepSign::kMinus, val({}), 0}), DomainError);
  }

  TEST_CASE("valid steps preserve the euler characteristic") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 200; ++trial) {
      BoolFun f = fixtures::random_fun(3, rng);
      auto step = random_valid_step(f, rng);
      if (!step) continue;
      BoolFun g = apply_step(f, *step);
      CHECK(g.euler() == f.euler());
      CHECK(g.sat_count() == f.sat_count() + (step->sign == StepSign::kPlus ? 2 : -2));
    }
  }

  TEST_CASE("verify_trace") {
    BoolFun f = fixtures::monotone_safe_k3();
    CHECK(verify_trace(RewriteTrace{f, {}}, f).ok);

    RewriteTrace bad{BoolFun::from_sat(1, {val({})}), {{StepSign::kPlus, val({}), 0}}};
    TraceCheck check = verify_trace(bad, BoolFun::top(1));
    CHECK_FALSE(check.ok);
    CHECK(check.failed_index == 0);
  }

  TEST_CASE("chainkill on a single edge") {
    BoolFun f = BoolFun::from_sat(1, {val({}), val({0})});
    auto steps = chainkill(f, {val({}), val({0})});
    REQUIRE(steps.size() == 1);
    CHECK(steps[0].sign == StepSign::kMinus);
    CHECK(apply_step(f, steps[0]).is_bottom());
  }

  TEST_CASE("chainkill on a longer path") {
    // Endpoints satisfy, the two interior nodes do not; 3 steps, net removal
    // of both endpoints.
    BoolFun f = BoolFun::from_sat(2, {val({}), val({1})});
    std::vector<Valuation> path = {val({}), val({0}), val({0, 1}), val({1})};
    auto steps = chainkill(f, path);
    CHECK(steps.size() == 3);
    BoolFun cur = f;
    for (const RewriteStep& s : steps) cur = apply_step(cur, s);
    CHECK(cur.is_bottom());
  }

  TEST_CASE("chainkill rejects bad chains") {
    BoolFun f = BoolFun::from_sat(2, {val({}), val({0, 1})});
    // Equal-parity endpoints: an odd number of interior nodes.
    CHECK_THROWS_AS(chainkill(f, {val({}), val({0}), val({0, 1})}), DomainError);
    // Interior satisfies.
    BoolFun g = BoolFun::from_sat(2, {val({}), val({0}), val({1})});
    CHECK_THROWS_AS(chainkill(g, {val({}), val({0}), val({0, 1}), val({1})}), DomainError);
    // Endpoint does not satisfy.
    CHECK_THROWS_AS(chainkill(BoolFun::bottom(1), {val({}), val({0})}), DomainError);
    // Not a path.
    CHECK_THROWS_AS(chainkill(f, {val({}), val({0, 1})}), DomainError);
  }

  TEST_CASE("chainswap moves one color along a path") {
    BoolFun f = BoolFun::from_sat(1, {val({})});
    auto steps = chainswap(f, {val({}), val({0}), val({0, 1})});
    CHECK(steps.size() == 2);
    BoolFun cur = f;
    for (const RewriteStep& s : steps) cur = apply_step(cur, s);
    CHECK(cur == BoolFun::from_sat(1, {val({0, 1})}));
  }

  TEST_CASE("chainswap on a five-node path takes four steps") {
    BoolFun f = BoolFun::from_sat(2, {val({})});
    std::vector<Valuation> path = {val({}), val({0}), val({0, 1}), val({1}), val({1, 2})};
    auto steps = chainswap(f, path);
    CHECK(steps.size() == 4);
    BoolFun cur = f;
    for (const RewriteStep& s : steps) cur = apply_step(cur, s);
    CHECK(cur == BoolFun::from_sat(2, {val({1, 2})}));
  }

  TEST_CASE("chainswap rejects parity mismatches and swaps equal-parity endpoints") {
    BoolFun f = BoolFun::from_sat(1, {val({0})});
    // Opposite-parity endpoints (no interior): that is chainkill territory.
    CHECK_THROWS_AS(chainswap(f, {val({0}), val({0, 1})}), DomainError);
    // Equal-parity endpoints across one interior node swap fine.
    auto steps = chainswap(f, {val({0}), val({0, 1}), val({1})});
    BoolFun cur = f;
    for (const RewriteStep& s : steps) cur = apply_step(cur, s);
    CHECK(cur == BoolFun::from_sat(1, {val({1})}));
  }

  TEST_CASE("fetch_pair basics") {
    BoolFun f = BoolFun::from_sat(1, {val({}), val({0})});
    FetchedPair fp = fetch_pair(f);
    CHECK(fp.nu == val({}));
    CHECK(fp.nu_prime == val({0}));
    CHECK(fp.path == std::vector<Valuation>{val({}), val({0})});

    // The fetched pair always admits a chainkill.
    BoolFun g = fixtures::monotone_safe_k3();
    FetchedPair gp = fetch_pair(g);
    CHECK_NOTHROW(chainkill(g, gp.path));

    CHECK_THROWS_AS(fetch_pair(fixtures::all_even_k(3)), DomainError);
    CHECK_THROWS_AS(fetch_pair(BoolFun::bottom(2)), DomainError);
  }

  TEST_CASE("reduce_to_bot on the goldens") {
    CHECK(reduce_to_bot(BoolFun::bottom(2)).steps.empty());

    BoolFun f = fixtures::monotone_safe_k3();
    RewriteTrace t = reduce_to_bot(f);
    CHECK(verify_trace(t, BoolFun::bottom(3)).ok);

    CHECK_THROWS_AS(reduce_to_bot(parse_function("k 1\nformula 0&1\n")), DomainError);
  }

  TEST_CASE("reduce_to_bot succeeds on every euler-zero function, k<=2") {
    for (int k : {1, 2}) {
      uint64_t reduced = 0;
      fixtures::for_each_function(k, [&](const BoolFun& f) {
        if (f.euler() != 0) return;
        RewriteTrace t = reduce_to_bot(f);
        CHECK(verify_trace(t, BoolFun::bottom(k)).ok);
        // Engineering bound on trace length, flags runaway constructions.
        CHECK(t.steps.size() <=
              static_cast<std::size_t>((k + 1) * (1 << k)) * std::max<uint64_t>(f.sat_count(), 1));
        ++reduced;
      });
      CHECK(reduced == (k == 1 ? 6 : 70));
    }
  }

  TEST_CASE("reduction length stays within the engineering bound on the goldens") {
    for (const BoolFun& f : {fixtures::monotone_safe_k3(), fixtures::no_matching_k4()}) {
      RewriteTrace t = reduce_to_bot(f);
      CHECK(verify_trace(t, BoolFun::bottom(f.k())).ok);
      CHECK(t.steps.size() <= static_cast<std::size_t>(f.var_count() * (1 << f.k())) *
                                  std::max<uint64_t>(f.sat_count(), 1));
    }
  }

  TEST_CASE("to_even_support") {
    CHECK(to_even_support(BoolFun::bottom(2)).steps.empty());
    CHECK_THROWS_AS(to_even_support(BoolFun::from_sat(1, {val({0})})), DomainError);

    BoolFun f = BoolFun::from_sat(1, {val({}), val({0})});
    RewriteTrace t = to_even_support(f);
    CHECK(verify_trace(t, BoolFun::bottom(1)).ok);

    for (int k : {1, 2})
      fixtures::for_each_function(k, [&](const BoolFun& f2) {
        long long e = f2.euler();
        if (e < 0) return;
        RewriteTrace trace = to_even_support(f2);
        BoolFun end = replay(trace);
        CHECK(end.sat_count() == static_cast<uint64_t>(e));
        for (Valuation v : end.sat_list()) CHECK(v.even_size());
      });
  }

  TEST_CASE("canonicalize") {
    CHECK(canonicalize(BoolFun::bottom(3)).steps.empty());
    CHECK_THROWS_AS(canonicalize(BoolFun::from_sat(1, {val({0})})), DomainError);

    // A single top valuation descends to the empty one.
    BoolFun f = BoolFun::from_sat(1, {val({0, 1})});
    RewriteTrace t = canonicalize(f);
    CHECK(verify_trace(t, BoolFun::from_sat(1, {val({})})).ok);

    // Every even-support function on k<=3 reaches canonical form.
    for (int k : {2, 3}) {
      std::vector<uint32_t> evens;
      for (uint32_t v = 0; v < (uint32_t{1} << (k + 1)); ++v)
        if (Valuation(v).even_size()) evens.push_back(v);
      for (uint64_t pick = 0; pick < (uint64_t{1} << evens.size()); ++pick) {
        BoolFun g(k);
        for (std::size_t i = 0; i < evens.size(); ++i)
          if ((pick >> i) & 1) g.set(Valuation(evens[i]), true);
        RewriteTrace trace = canonicalize(g);
        BoolFun end = replay(trace);
        CHECK(is_canonical_form(end));
        CHECK(end.euler() == g.euler());
      }
    }
  }

  TEST_CASE("equivalence witnesses, exhaustive k<=2 in both directions") {
    for (int k : {1, 2})
      fixtures::for_each_function(k, [&](const BoolFun& a) {
        fixtures::for_each_function(k, [&](const BoolFun& b) {
          if (a.euler() == b.euler()) {
            RewriteTrace t = equivalence_witness(a, b);
            CHECK(verify_trace(t, b).ok);
          } else {
            CHECK_THROWS_AS(equivalence_witness(a, b), DomainError);
          }
        });
      });
  }

  TEST_CASE("equivalence witness examples") {
    CHECK(equivalence_witness(BoolFun::bottom(1), BoolFun::bottom(1)).steps.empty());
    BoolFun a = BoolFun::from_sat(1, {val({}), val({0})});
    BoolFun b = BoolFun::from_sat(1, {val({1}), val({0, 1})});
    RewriteTrace t = equivalence_witness(a, b);
    CHECK(verify_trace(t, b).ok);
  }

  TEST_CASE("equivalence witnesses on random k=3 pairs") {
    std::mt19937_64 rng(41);
    int matched = 0;
    for (int trial = 0; trial < 300; ++trial) {
      BoolFun a = fixtures::random_fun(3, rng);
      BoolFun b = fixtures::random_fun(3, rng);
      if (a.euler() == b.euler()) {
        ++matched;
        CHECK(verify_trace(equivalence_witness(a, b), b).ok);
      } else {
        CHECK_THROWS_AS(equivalence_witness(a, b), DomainError);
      }
    }
    CHECK(matched > 0);
  }

  TEST_CASE("reversing a verified trace verifies backwards") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 50; ++trial) {
      BoolFun f = fixtures::random_euler_zero(3, rng);
      RewriteTrace t = reduce_to_bot(f);
      RewriteTrace back = reversed(t, BoolFun::bottom(3));
      CHECK(verify_trace(back, f).ok);
    }
  }

  TEST_CASE("trace files round trip") {
    BoolFun f = fixtures::monotone_safe_k3();
    RewriteTrace t = reduce_to_bot(f);
    std::string text = serialize_trace(f.k(), t.steps);
    TraceFile parsed = parse_trace(text);
    CHECK(parsed.k == 3);
    CHECK(parsed.steps == t.steps);
    CHECK(serialize_trace(parsed.k, parsed.steps) == text);

    CHECK_THROWS_AS(parse_trace(""), InputError);
    CHECK_THROWS_AS(parse_trace("k 1\n* 0 : .\n"), InputError);
    CHECK_THROWS_AS(parse_trace("k 1\n+ 5 : .\n"), InputError);
    CHECK_THROWS_AS(parse_trace("k 1\n+ 0 .\n"), InputError);
  }

  TEST_CASE("shortest paths are lexicographically smallest") {
    auto path = shortest_path(val({0, 1}), val({2}));
    // Drops the larger surplus bit first, adds the target bit last.
    std::vector<Valuation> expected = {val({0, 1}), val({0}), val({}), val({2})};
    CHECK(path == expected);
  }

  TEST_CASE("colored graph structure") {
    BoolFun f = fixtures::monotone_safe_k3();
    ColoredGraph g{f};
    CHECK(g.neighbors(val({})).size() == 4);
    std::string dot = colored_graph_to_dot(f);
    CHECK(dot.find("graph valuations") != std::string::npos);
    CHECK(dot.find("fillcolor=orange") != std::string::npos);
  }
}
