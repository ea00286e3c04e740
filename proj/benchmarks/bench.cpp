#include <benchmark/benchmark.h>

#include <random>

#include "eulerdd/analysis.hpp"
#include "eulerdd/boolfun.hpp"
#include "eulerdd/circuit.hpp"
#include "eulerdd/fragment.hpp"
#include "eulerdd/lattice.hpp"
#include "eulerdd/obdd.hpp"
#include "eulerdd/pdb.hpp"
#include "eulerdd/transform.hpp"

using namespace eulerdd;

namespace {

BoolFun golden() { return parse_function("k 3\nformula (2|3)&(0|3)&(1|3)&(0|1|2)\n"); }

BoolFun random_fun(int k, uint64_t seed) {
  std::mt19937_64 rng(seed);
  BoolFun f(k);
  for (uint32_t v = 0; v < f.valuation_count(); ++v)
    if (rng() & 1) f.set(Valuation(v), true);
  return f;
}

TidDatabase db_for(int k, int domain) {
  std::string text;
  auto name = [](int i) { return std::string(1, static_cast<char>('a' + i)); };
  for (int i = 0; i < domain; ++i) text += "R " + name(i) + " 1/2\n";
  for (int s = 1; s <= k; ++s)
    for (int i = 0; i < domain; ++i)
      for (int j = 0; j < domain; ++j)
        text += "S" + std::to_string(s) + " " + name(i) + " " + name(j) + " 1/3\n";
  for (int i = 0; i < domain; ++i) text += "T " + name(i) + " 2/5\n";
  return parse_db(text);
}

void BM_Euler(benchmark::State& state) {
  BoolFun f = random_fun(static_cast<int>(state.range(0)), 99);
  for (auto _ : state) benchmark::DoNotOptimize(f.euler());
}
BENCHMARK(BM_Euler)->Arg(10)->Arg(16)->Arg(20);

void BM_MinimizedCnf(benchmark::State& state) {
  BoolFun f = golden();
  for (auto _ : state) benchmark::DoNotOptimize(f.minimized_cnf());
}
BENCHMARK(BM_MinimizedCnf);

void BM_ClauseLattice(benchmark::State& state) {
  auto clauses = golden().minimized_cnf();
  for (auto _ : state) benchmark::DoNotOptimize(clause_lattice(clauses).mobius_hat());
}
BENCHMARK(BM_ClauseLattice);

void BM_ReduceToBot(benchmark::State& state) {
  BoolFun f = golden();
  for (auto _ : state) benchmark::DoNotOptimize(reduce_to_bot(f).steps.size());
}
BENCHMARK(BM_ReduceToBot);

void BM_Fragment(benchmark::State& state) {
  BoolFun f = golden();
  for (auto _ : state) benchmark::DoNotOptimize(fragment(f).leaves.size());
}
BENCHMARK(BM_Fragment);

void BM_DegenerateCompile(benchmark::State& state) {
  TidDatabase db = db_for(3, static_cast<int>(state.range(0)));
  BoolFun h0 = parse_function("k 3\nformula 0\n");
  for (auto _ : state) benchmark::DoNotOptimize(degenerate_compile(h0, db).gate_count());
}
BENCHMARK(BM_DegenerateCompile)->Arg(2)->Arg(4)->Arg(6);

void BM_CompileQuery(benchmark::State& state) {
  TidDatabase db = db_for(3, static_cast<int>(state.range(0)));
  BoolFun f = golden();
  for (auto _ : state) benchmark::DoNotOptimize(compile_query(f, db).gate_count());
}
BENCHMARK(BM_CompileQuery)->Arg(2)->Arg(3)->Arg(4);

void BM_Probability(benchmark::State& state) {
  TidDatabase db = db_for(3, 2);
  Circuit c = compile_query(golden(), db);
  for (auto _ : state) benchmark::DoNotOptimize(probability_unchecked(c, db));
}
BENCHMARK(BM_Probability);

void BM_Oracle(benchmark::State& state) {
  TidDatabase db = db_for(2, 2);  // 12 facts, 4096 worlds
  BoolFun f = random_fun(2, 7);
  for (auto _ : state) benchmark::DoNotOptimize(oracle_pqe(f, db));
}
BENCHMARK(BM_Oracle);

void BM_SemanticDeterminism(benchmark::State& state) {
  TidDatabase db = db_for(3, 2);
  Circuit c = compile_query(golden(), db);
  for (auto _ : state)
    benchmark::DoNotOptimize(check_deterministic(c, DeterminismMode::kSemantic));
}
BENCHMARK(BM_SemanticDeterminism);

void BM_ConjectureSweep(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(conjecture_check(static_cast<int>(state.range(0))).euler_zero_count);
}
BENCHMARK(BM_ConjectureSweep)->Arg(3)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
