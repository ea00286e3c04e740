#include <doctest.h>

#include <random>

#include "eulerdd/circuit.hpp"
#include "eulerdd/errors.hpp"
#include "eulerdd/obdd.hpp"
#include "fixtures.hpp"

using namespace eulerdd;

namespace {

Valuation val(std::initializer_list<int> ls) {
  uint32_t bits = 0;
  for (int l : ls) bits |= uint32_t{1} << l;
  return Valuation(bits);
}

bool same_function(const Obdd& a, const Obdd& b, std::size_t fact_count) {
  for (uint64_t w = 0; w < (uint64_t{1} << fact_count); ++w)
    if (a.evaluate(World{w}) != b.evaluate(World{w})) return false;
  return true;
}

// All degenerate functions on {0..k}, deduplicated.
std::vector<BoolFun> degenerate_functions(int k) {
  std::vector<BoolFun> out;
  fixtures::for_each_function(k, [&](const BoolFun& f) {
    if (f.is_degenerate()) out.push_back(f);
  });
  return out;
}

}  // namespace

TEST_SUITE("obdd") {
  TEST_CASE("left order instantiates the documented layout") {
    TidDatabase db = parse_db("R a 1/2\nS1 a a 1/2\nS2 a a 1/2\n");
    VarOrder order = left_order(2, db, 2);
    CHECK(order.facts == std::vector<int>{0, 1, 2});  // R(a), S1(a,a), S2(a,a)

    TidDatabase empty = parse_db("");
    CHECK(left_order(1, empty, 1).facts.empty());
    CHECK_THROWS_AS(left_order(0, db, 2), DomainError);
  }

  TEST_CASE("right order groups by the second argument and ends blocks with T") {
    TidDatabase db = parse_db(
        "S2 a a 1/2\nS2 a b 1/2\nS2 b a 1/2\nS2 b b 1/2\nT a 1/2\nT b 1/2\n");
    VarOrder order = right_order(1, db, 2);
    // Per second constant: S2(a,.), S2(b,.), then T(.)
    CHECK(order.facts == std::vector<int>{0, 2, 4, 1, 3, 5});
    CHECK_THROWS_AS(right_order(2, db, 2), DomainError);
  }

  TEST_CASE("diagram for atom 0 on the two-fact database") {
    TidDatabase db = parse_db("R a 1/2\nS1 a a 1/2\n");
    Obdd d = obdd_for_h(0, left_order(1, db, 1), db, 1);
    CHECK(d.node_count() == 2);
    CHECK(d.is_reduced_and_ordered());
    for (uint64_t w = 0; w < 4; ++w)
      CHECK(d.evaluate(World{w}) == h_satisfied(0, World{w}, db, 1));
  }

  TEST_CASE("diagram on an empty database is constant false") {
    TidDatabase empty = parse_db("");
    Obdd d = obdd_for_h(1, right_order(0, empty, 1), empty, 1);
    CHECK_FALSE(d.evaluate(World{0}));
  }

  TEST_CASE("incomplete orders are rejected") {
    TidDatabase db = parse_db("R a 1/2\nS1 a a 1/2\nS2 a a 1/2\nT a 1/2\n");
    VarOrder missing{{0}};  // only R(a)
    CHECK_THROWS_AS(obdd_for_h(0, missing, db, 2), DomainError);
  }

  TEST_CASE("diagrams match the atomic queries on random databases") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 12; ++trial) {
      int k = 1 + static_cast<int>(rng() % 3);
      TidDatabase db = fixtures::random_db(k, 2, rng, 0.55);
      if (db.fact_count() > 12) continue;
      for (int i = 0; i < k; ++i) {  // left side: atoms 0..k-1 under l = k
        Obdd d = obdd_for_h(i, left_order(k, db, k), db, k);
        CHECK(d.is_reduced_and_ordered());
        for (uint64_t w = 0; w < (uint64_t{1} << db.fact_count()); ++w)
          CHECK(d.evaluate(World{w}) == h_satisfied(i, World{w}, db, k));
      }
      for (int i = 1; i <= k; ++i) {  // right side: atoms 1..k under l = 0
        Obdd d = obdd_for_h(i, right_order(0, db, k), db, k);
        for (uint64_t w = 0; w < (uint64_t{1} << db.fact_count()); ++w)
          CHECK(d.evaluate(World{w}) == h_satisfied(i, World{w}, db, k));
      }
    }
  }

  TEST_CASE("diagram size stays linear in the order") {
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 8; ++trial) {
      int k = 2 + static_cast<int>(rng() % 2);
      TidDatabase db = fixtures::random_db(k, 3, rng);
      VarOrder order = left_order(k, db, k);
      for (int i = 0; i < k; ++i) {
        Obdd d = obdd_for_h(i, order, db, k);
        CHECK(d.node_count() <= 4 * (order.facts.size() + 2));
      }
    }
  }

  TEST_CASE("apply and negate") {
    TidDatabase db = parse_db("R a 1/2\nR b 1/2\nS1 a a 1/2\nS1 b a 1/2\n");
    VarOrder order = left_order(1, db, 1);
    Obdd d = obdd_for_h(0, order, db, 1);
    Obdd one = Obdd::constant(order, true);

    CHECK(same_function(apply(Circuit::Kind::kAnd, d, one), d, db.fact_count()));
    CHECK(same_function(negate(negate(d)), d, db.fact_count()));

    Obdd conj = apply(Circuit::Kind::kAnd, d, negate(Obdd::var(order, 0)));
    for (uint64_t w = 0; w < (uint64_t{1} << db.fact_count()); ++w)
      CHECK(conj.evaluate(World{w}) ==
            (h_satisfied(0, World{w}, db, 1) && !World{w}.has(0)));

    VarOrder other{{3, 2, 1, 0}};
    CHECK_THROWS_AS(apply(Circuit::Kind::kOr, d, Obdd::constant(other, false)), DomainError);
  }

  TEST_CASE("unfolded diagrams are valid circuits") {
    TidDatabase db = parse_db("R a 1/2\nS1 a a 1/3\nS1 a b 1/5\n");
    Obdd d = obdd_for_h(0, left_order(1, db, 1), db, 1);
    Circuit c;
    c.fact_labels.resize(db.fact_count());
    for (std::size_t i = 0; i < db.fact_count(); ++i) c.fact_labels[i] = db.fact_label(i);
    c.root = d.unfold_into(c);
    CHECK(check_decomposable(c));
    CHECK(check_deterministic(c, DeterminismMode::kCertified));
    CHECK(check_deterministic(c, DeterminismMode::kSemantic));
    for (uint64_t w = 0; w < (uint64_t{1} << db.fact_count()); ++w)
      CHECK(evaluate(c, World{w}) == d.evaluate(World{w}));
  }

  TEST_CASE("degenerate compiler: constants and the single-atom function") {
    TidDatabase db = parse_db("R a 1/2\nS1 a a 1/2\nT a 1/2\n");
    Circuit bottom = degenerate_compile(BoolFun::bottom(1), db);
    CHECK(probability_unchecked(bottom, db) == Rat(0));

    BoolFun h0 = BoolFun::from_sat(1, {val({0}), val({0, 1})});
    REQUIRE(h0.is_degenerate());
    Circuit c = degenerate_compile(h0, db);
    CHECK(check_decomposable(c));
    CHECK(check_deterministic(c, DeterminismMode::kCertified));
    CHECK(check_deterministic(c, DeterminismMode::kSemantic));
    CHECK(probability_unchecked(c, db) == Rat(1, 4));

    CHECK_THROWS_AS(degenerate_compile(fixtures::monotone_safe_k3(), db), DomainError);
  }

  TEST_CASE("degenerate compiler matches the oracle, every degenerate k<=2") {
    std::mt19937_64 rng(79);
    for (int k : {1, 2}) {
      TidDatabase db = fixtures::random_db(k, 2, rng, 0.85);
      for (const BoolFun& f : degenerate_functions(k)) {
        Circuit c = degenerate_compile(f, db);
        CHECK(check_decomposable(c));
        CHECK(check_deterministic(c, DeterminismMode::kCertified));
        CHECK(check_deterministic(c, DeterminismMode::kSemantic));
        CHECK(probability_unchecked(c, db) == oracle_pqe(f, db));
      }
    }
  }

  TEST_CASE("degenerate compiler gate count stays within the size monitor") {
    std::mt19937_64 rng(83);
    for (int k : {1, 2, 3}) {
      TidDatabase db = fixtures::random_db(k, 2, rng);
      std::size_t n = db.domain_size();
      // The worst case for the pair enumeration: everything satisfies.
      BoolFun g = BoolFun::top(k);
      REQUIRE(g.is_degenerate());
      Circuit c = degenerate_compile(g, db);
      std::size_t bound = 40u * (k + 1) * (k + 1) * n * n * (std::size_t{1} << k);
      CHECK(c.gate_count() <= bound);
    }
  }
}
