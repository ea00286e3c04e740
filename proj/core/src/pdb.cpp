#include "eulerdd/pdb.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>
#include <thread>

#include "eulerdd/errors.hpp"

namespace eulerdd {

std::string Fact::label(const std::vector<std::string>& domain) const {
  switch (pred) {
    case Pred::kR:
      return "R(" + domain[arg1] + ")";
    case Pred::kT:
      return "T(" + domain[arg1] + ")";
    case Pred::kS:
      return "S" + std::to_string(s_index) + "(" + domain[arg1] + "," + domain[arg2] + ")";
  }
  return {};
}

int TidDatabase::fact_index(Pred pred, int s_index, int arg1, int arg2) const {
  for (std::size_t i = 0; i < facts.size(); ++i) {
    const Fact& f = facts[i];
    if (f.pred == pred && f.arg1 == arg1 && (pred != Pred::kS || (f.s_index == s_index && f.arg2 == arg2)))
      return static_cast<int>(i);
  }
  return -1;
}

int TidDatabase::find_fact_by_label(const std::string& label) const {
  for (std::size_t i = 0; i < facts.size(); ++i)
    if (fact_label(static_cast<int>(i)) == label) return static_cast<int>(i);
  return -1;
}

TidDatabase parse_db(std::string_view text) {
  TidDatabase db;
  std::map<std::string, int> constants;
  auto intern = [&](const std::string& c) {
    auto [it, inserted] = constants.emplace(c, db.domain.size());
    if (inserted) db.domain.push_back(c);
    return it->second;
  };

  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  int max_s = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string pred_tok;
    if (!(ls >> pred_tok) || pred_tok[0] == '#') continue;

    Fact fact;
    int arity;
    if (pred_tok == "R") {
      fact.pred = Pred::kR;
      arity = 1;
    } else if (pred_tok == "T") {
      fact.pred = Pred::kT;
      arity = 1;
    } else if (pred_tok.size() > 1 && pred_tok[0] == 'S' &&
               pred_tok.find_first_not_of("0123456789", 1) == std::string::npos) {
      fact.pred = Pred::kS;
      fact.s_index = std::stoi(pred_tok.substr(1));
      if (fact.s_index < 1 || fact.s_index > BoolFun::kMaxK)
        throw InputError("line " + std::to_string(line_no) + ": S index out of range in '" +
                         pred_tok + "'");
      arity = 2;
    } else {
      throw InputError("line " + std::to_string(line_no) + ": unknown predicate '" + pred_tok +
                       "'");
    }

    std::vector<std::string> rest;
    std::string tok;
    while (ls >> tok) rest.push_back(tok);
    if (static_cast<int>(rest.size()) != arity + 1)
      throw InputError("line " + std::to_string(line_no) + ": predicate " + pred_tok +
                       " takes " + std::to_string(arity) + " argument(s) plus a probability");

    fact.arg1 = intern(rest[0]);
    if (arity == 2) fact.arg2 = intern(rest[1]);
    fact.prob = parse_rational(rest.back());
    if (fact.prob < 0 || fact.prob > 1)
      throw InputError("line " + std::to_string(line_no) + ": probability " + rest.back() +
                       " is outside [0,1]");

    if (db.fact_index(fact.pred, fact.s_index, fact.arg1, fact.arg2) >= 0)
      throw InputError("line " + std::to_string(line_no) + ": duplicate fact " +
                       fact.label(db.domain));
    if (fact.pred == Pred::kS) max_s = std::max(max_s, fact.s_index);
    db.facts.push_back(std::move(fact));
  }
  db.k = std::max(1, max_s);
  return db;
}

std::string serialize_db(const TidDatabase& db) {
  std::string out;
  for (const Fact& f : db.facts) {
    switch (f.pred) {
      case Pred::kR:
        out += "R " + db.domain[f.arg1];
        break;
      case Pred::kT:
        out += "T " + db.domain[f.arg1];
        break;
      case Pred::kS:
        out += "S" + std::to_string(f.s_index) + " " + db.domain[f.arg1] + " " +
               db.domain[f.arg2];
        break;
    }
    out += " " + to_string(f.prob) + "\n";
  }
  return out;
}

namespace {

void check_k_compatible(const BoolFun& f, const TidDatabase& db) {
  for (const Fact& fact : db.facts)
    if (fact.pred == Pred::kS && fact.s_index > f.k())
      throw DomainError("database mentions S" + std::to_string(fact.s_index) +
                        " but the function has k=" + std::to_string(f.k()));
}

void check_world_representable(const TidDatabase& db) {
  if (db.fact_count() > 64)
    throw DomainError("worlds over more than 64 facts are not supported");
}

}  // namespace

bool h_satisfied(int i, World w, const TidDatabase& db, int k) {
  if (i < 0 || i > k) throw DomainError("atomic query index " + std::to_string(i) +
                                        " is out of range for k=" + std::to_string(k));
  check_world_representable(db);
  const int n = db.domain_size();
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      int f1, f2;
      if (i == 0) {
        f1 = db.fact_index(Pred::kR, 0, x);
        f2 = db.fact_index(Pred::kS, 1, x, y);
      } else if (i == k) {
        f1 = db.fact_index(Pred::kS, k, x, y);
        f2 = db.fact_index(Pred::kT, 0, y);
      } else {
        f1 = db.fact_index(Pred::kS, i, x, y);
        f2 = db.fact_index(Pred::kS, i + 1, x, y);
      }
      if (f1 >= 0 && f2 >= 0 && w.has(f1) && w.has(f2)) return true;
    }
  }
  return false;
}

Valuation h_valuation(World w, const TidDatabase& db, int k) {
  uint32_t bits = 0;
  for (int i = 0; i <= k; ++i)
    if (h_satisfied(i, w, db, k)) bits |= uint32_t{1} << i;
  return Valuation(bits);
}

bool query_holds(const BoolFun& f, World w, const TidDatabase& db) {
  check_k_compatible(f, db);
  return f(h_valuation(w, db, f.k()));
}

Rat world_probability(const TidDatabase& db, World w) {
  check_world_representable(db);
  Rat p(1);
  for (std::size_t i = 0; i < db.facts.size(); ++i)
    p *= w.has(static_cast<int>(i)) ? db.facts[i].prob : Rat(1) - db.facts[i].prob;
  return p;
}

namespace {

// Witness pairs of fact indices per atomic query; a world satisfies query i
// iff both facts of some pair are present.
std::vector<std::vector<std::pair<int, int>>> witness_pairs(const TidDatabase& db, int k) {
  std::vector<std::vector<std::pair<int, int>>> pairs(k + 1);
  const int n = db.domain_size();
  for (int i = 0; i <= k; ++i)
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        int f1, f2;
        if (i == 0) {
          f1 = db.fact_index(Pred::kR, 0, x);
          f2 = db.fact_index(Pred::kS, 1, x, y);
        } else if (i == k) {
          f1 = db.fact_index(Pred::kS, k, x, y);
          f2 = db.fact_index(Pred::kT, 0, y);
        } else {
          f1 = db.fact_index(Pred::kS, i, x, y);
          f2 = db.fact_index(Pred::kS, i + 1, x, y);
        }
        if (f1 >= 0 && f2 >= 0) pairs[i].emplace_back(f1, f2);
      }
  return pairs;
}

uint32_t h_bits_for_world(uint64_t world,
                          const std::vector<std::vector<std::pair<int, int>>>& pairs) {
  uint32_t bits = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (auto [f1, f2] : pairs[i])
      if (((world >> f1) & 1) && ((world >> f2) & 1)) {
        bits |= uint32_t{1} << i;
        break;
      }
  return bits;
}

// Sums the numerators of the satisfying worlds in [begin, end) over the
// common denominator (the product of all fact probability denominators).
// suffix[i] holds the product of the factors for facts i..nf-1; stepping to
// the next world only invalidates the entries below its lowest set bit, so
// the amortized cost is O(1) multiplications per world.
mpz_class sum_world_range(const BoolFun& f, const TidDatabase& db,
                          const std::vector<std::vector<std::pair<int, int>>>& pairs,
                          uint64_t begin, uint64_t end) {
  const std::size_t nf = db.fact_count();
  std::vector<mpz_class> present(nf), absent(nf);
  for (std::size_t i = 0; i < nf; ++i) {
    present[i] = db.facts[i].prob.get_num();
    absent[i] = db.facts[i].prob.get_den() - db.facts[i].prob.get_num();
  }
  mpz_class sum = 0;
  std::vector<mpz_class> suffix(nf + 1);
  suffix[nf] = 1;
  for (uint64_t w = begin; w < end; ++w) {
    std::size_t top = nf;  // recompute suffix[top-1 .. 0]
    if (w != begin)
      top = std::min<std::size_t>(nf, static_cast<std::size_t>(std::countr_zero(w)) + 1);
    for (std::size_t i = top; i-- > 0;)
      suffix[i] = suffix[i + 1] * (((w >> i) & 1) ? present[i] : absent[i]);
    if (f(Valuation(h_bits_for_world(w, pairs)))) sum += suffix[0];
  }
  return sum;
}

}  // namespace

Rat oracle_pqe(const BoolFun& f, const TidDatabase& db, const OracleOptions& opts) {
  check_k_compatible(f, db);
  if (db.fact_count() > opts.max_facts)
    throw DomainError("oracle enumeration guard: database has " +
                      std::to_string(db.fact_count()) + " facts, limit is " +
                      std::to_string(opts.max_facts));
  check_world_representable(db);

  auto pairs = witness_pairs(db, f.k());
  const std::size_t nf = db.fact_count();
  const uint64_t worlds = uint64_t{1} << nf;

  mpz_class numerator;
  int jobs = std::max(1, opts.jobs);
  if (jobs == 1 || worlds < 1024) {
    numerator = sum_world_range(f, db, pairs, 0, worlds);
  } else {
    std::vector<mpz_class> partial(jobs);
    std::vector<std::thread> workers;
    uint64_t chunk = worlds / jobs + 1;
    for (int j = 0; j < jobs; ++j) {
      uint64_t lo = std::min<uint64_t>(worlds, j * chunk);
      uint64_t hi = std::min<uint64_t>(worlds, lo + chunk);
      workers.emplace_back([&, j, lo, hi] { partial[j] = sum_world_range(f, db, pairs, lo, hi); });
    }
    for (auto& t : workers) t.join();
    for (const auto& p : partial) numerator += p;
  }

  mpz_class denominator = 1;
  for (const Fact& fact : db.facts) denominator *= fact.prob.get_den();
  Rat result(numerator, denominator);
  result.canonicalize();
  return result;
}

Bitset lineage_table(const BoolFun& f, const TidDatabase& db, std::size_t max_facts) {
  check_k_compatible(f, db);
  if (db.fact_count() > max_facts)
    throw DomainError("lineage enumeration guard: database has " +
                      std::to_string(db.fact_count()) + " facts, limit is " +
                      std::to_string(max_facts));
  auto pairs = witness_pairs(db, f.k());
  const uint64_t worlds = uint64_t{1} << db.fact_count();
  Bitset table(worlds);
  for (uint64_t w = 0; w < worlds; ++w)
    if (f(Valuation(h_bits_for_world(w, pairs)))) table.set(w, true);
  return table;
}

}  // namespace eulerdd
