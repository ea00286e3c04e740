#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "eulerdd/bitset.hpp"
#include "eulerdd/boolfun.hpp"
#include "eulerdd/pdb.hpp"

namespace fixtures {

// Four-clause monotone function on {0..3}: tractable (euler 0) although the
// plain inclusion-exclusion over its clause lattice has a vanishing bottom
// coefficient. Used as the main golden case throughout the suite.
inline eulerdd::BoolFun monotone_safe_k3() {
  return eulerdd::parse_function("k 3\nformula (2|3)&(0|3)&(1|3)&(0|1|2)\n");
}

// Zero euler characteristic, yet neither the satisfying nor the
// unsatisfying side of its valuation graph has a perfect matching; the
// smallest witness that one-signed rewriting is too weak.
inline eulerdd::BoolFun no_matching_k4() {
  return eulerdd::parse_function(
      "k 4\nsat\n0 3\n0 4\n3 4\n0 1 2\n0 1 3\n0 1 4\n0 2 4\n1 2 4\n0 1 3 4\n0 2 3 4\n");
}

// All even-size valuations satisfying: euler is 2^k, the largest value any
// function on {0..k} attains.
inline eulerdd::BoolFun all_even_k(int k) {
  eulerdd::BoolFun f(k);
  for (uint32_t v = 0; v < f.valuation_count(); ++v)
    if (eulerdd::Valuation(v).even_size()) f.set(eulerdd::Valuation(v), true);
  return f;
}

inline eulerdd::BoolFun fun_from_mask(int k, uint64_t mask) {
  eulerdd::Bitset table(uint32_t{1} << (k + 1));
  table.words()[0] = mask;
  return eulerdd::BoolFun::from_table(k, std::move(table));
}

// Calls fn on every function on {0..k}; k <= 2 keeps this cheap.
template <typename Fn>
void for_each_function(int k, Fn&& fn) {
  const uint32_t n = uint32_t{1} << (k + 1);
  for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) fn(fun_from_mask(k, mask));
}

inline eulerdd::BoolFun random_fun(int k, std::mt19937_64& rng) {
  const uint32_t n = uint32_t{1} << (k + 1);
  return fun_from_mask(k, rng() & ((n >= 64 ? 0 : (uint64_t{1} << n)) - 1));
}

// Random function with euler 0: equally many satisfying valuations of each
// size parity.
inline eulerdd::BoolFun random_euler_zero(int k, std::mt19937_64& rng) {
  const uint32_t n = uint32_t{1} << (k + 1);
  std::vector<uint32_t> evens, odds;
  for (uint32_t v = 0; v < n; ++v)
    (eulerdd::Valuation(v).even_size() ? evens : odds).push_back(v);
  std::shuffle(evens.begin(), evens.end(), rng);
  std::shuffle(odds.begin(), odds.end(), rng);
  std::uniform_int_distribution<std::size_t> dist(0, std::min(evens.size(), odds.size()));
  std::size_t count = dist(rng);
  eulerdd::BoolFun f(k);
  for (std::size_t i = 0; i < count; ++i) {
    f.set(eulerdd::Valuation(evens[i]), true);
    f.set(eulerdd::Valuation(odds[i]), true);
  }
  return f;
}

// Full schema instance over a domain of the given size with random
// rational probabilities (denominators up to 16).
inline eulerdd::TidDatabase random_db(int k, int domain_size, std::mt19937_64& rng,
                                      double keep_probability = 1.0) {
  std::string text;
  std::uniform_int_distribution<int> den_dist(1, 16);
  std::uniform_real_distribution<double> keep(0.0, 1.0);
  auto prob = [&]() {
    int den = den_dist(rng);
    std::uniform_int_distribution<int> num_dist(0, den);
    return std::to_string(num_dist(rng)) + "/" + std::to_string(den);
  };
  auto name = [](int i) { return std::string(1, static_cast<char>('a' + i)); };
  for (int i = 0; i < domain_size; ++i)
    if (keep(rng) <= keep_probability) text += "R " + name(i) + " " + prob() + "\n";
  for (int s = 1; s <= k; ++s)
    for (int i = 0; i < domain_size; ++i)
      for (int j = 0; j < domain_size; ++j)
        if (keep(rng) <= keep_probability)
          text += "S" + std::to_string(s) + " " + name(i) + " " + name(j) + " " + prob() + "\n";
  for (int i = 0; i < domain_size; ++i)
    if (keep(rng) <= keep_probability) text += "T " + name(i) + " " + prob() + "\n";
  return eulerdd::parse_db(text);
}

}  // namespace fixtures
