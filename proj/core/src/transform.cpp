#include "eulerdd/transform.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>

#include "eulerdd/errors.hpp"

namespace eulerdd {

namespace {

int differing_var(Valuation a, Valuation b) {
  uint32_t d = a.bits() ^ b.bits();
  if (std::popcount(d) != 1) throw DomainError("valuations are not adjacent");
  return std::countr_zero(d);
}

// Common path sanity: nonempty, in range, consecutive nodes adjacent, simple.
void validate_path(const BoolFun& f, const std::vector<Valuation>& path) {
  if (path.size() < 2) throw DomainError("invalid chain: a path needs at least two valuations");
  std::set<Valuation> seen;
  for (Valuation v : path) {
    if (v.bits() >> f.var_count())
      throw DomainError("invalid chain: valuation {" + v.to_string() + "} is out of range");
    if (!seen.insert(v).second)
      throw DomainError("invalid chain: path revisits {" + v.to_string() + "}");
  }
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    if (!path[i].adjacent_to(path[i + 1]))
      throw DomainError("invalid chain: {" + path[i].to_string() + "} and {" +
                        path[i + 1].to_string() + "} are not adjacent");
}

void validate_interior_unsatisfying(const BoolFun& f, const std::vector<Valuation>& path) {
  for (std::size_t i = 1; i + 1 < path.size(); ++i)
    if (f(path[i]))
      throw DomainError("invalid chain: interior valuation {" + path[i].to_string() +
                        "} satisfies the function");
}

RewriteStep plus_step(Valuation a, Valuation b) { return {StepSign::kPlus, a, differing_var(a, b)}; }
RewriteStep minus_step(Valuation a, Valuation b) {
  return {StepSign::kMinus, a, differing_var(a, b)};
}

// Builds the path e_0 q_1 e_1 ... q_n e_n from `from` to `to` where the e
// nodes have size |from| = |to| and each q node adds one missing bit before
// the next e node drops one surplus bit. Deterministic: lowest bits first.
std::vector<Valuation> alternating_path(Valuation from, Valuation to) {
  std::vector<Valuation> path = {from};
  Valuation cur = from;
  while (cur != to) {
    uint32_t add = to.bits() & ~cur.bits();
    uint32_t drop = cur.bits() & ~to.bits();
    Valuation up(cur.bits() | (add & -add));
    Valuation next(up.bits() & ~(drop & -drop));
    path.push_back(up);
    path.push_back(next);
    cur = next;
  }
  return path;
}

void append_and_apply(BoolFun& cur, RewriteTrace& trace, const std::vector<RewriteStep>& steps) {
  for (const RewriteStep& s : steps) {
    cur = apply_step(cur, s);
    trace.steps.push_back(s);
  }
}

// Moves the color of `from` onto the first unsatisfying same-size node of
// the alternating path toward `to`, by chainswapping each colored node one
// slot to the right, rightmost first. Needs |from| == |to|, from
// satisfying, to unsatisfying, both of even size; the in-between nodes of
// size |from|+1 never satisfy an even-support function.
void lateral_free(BoolFun& cur, RewriteTrace& trace, Valuation from, Valuation to) {
  std::vector<Valuation> path = alternating_path(from, to);
  std::size_t first_unsat = 0;
  for (std::size_t q = 1; 2 * q < path.size(); ++q)
    if (!cur(path[2 * q])) {
      first_unsat = q;
      break;
    }
  if (first_unsat == 0) throw Error("internal error: lateral path has no free slot");
  for (std::size_t p = first_unsat; p-- > 0;) {
    std::vector<Valuation> seg = {path[2 * p], path[2 * p + 1], path[2 * p + 2]};
    append_and_apply(cur, trace, chainswap(cur, seg));
  }
}

// Uncolors `from` and colors `to`, leaving every other valuation unchanged:
// chainswap the last colored same-size node of the alternating path onto
// `to`, then shift each remaining colored node into the slot just vacated.
void lateral_move(BoolFun& cur, RewriteTrace& trace, Valuation from, Valuation to) {
  std::vector<Valuation> path = alternating_path(from, to);
  const std::size_t last = path.size() - 1;  // index of `to`
  std::vector<std::size_t> colored;          // path indices of colored e nodes, excluding `to`
  for (std::size_t i = 0; i < last; i += 2)
    if (cur(path[i])) colored.push_back(i);
  if (colored.empty() || colored.front() != 0)
    throw Error("internal error: lateral move expects a colored start node");

  auto swap_segment = [&](std::size_t a, std::size_t b) {
    std::vector<Valuation> seg(path.begin() + a, path.begin() + b + 1);
    append_and_apply(cur, trace, chainswap(cur, seg));
  };
  swap_segment(colored.back(), last);
  for (std::size_t p = colored.size() - 1; p-- > 0;) swap_segment(colored[p], colored[p + 1]);
}

}  // namespace

BoolFun apply_step(const BoolFun& f, const RewriteStep& step) {
  Valuation a = step.nu;
  Valuation b = flip(a, step.var, f.k());
  if (a.bits() >> f.var_count())
    throw DomainError("invalid step: valuation {" + a.to_string() + "} is out of range");
  bool want = step.sign == StepSign::kMinus;  // both must be satisfying for a minus step
  for (Valuation v : {a, b}) {
    if (f(v) != want)
      throw DomainError(std::string("invalid step: valuation {") + v.to_string() +
                        (want ? "} does not satisfy the function" : "} already satisfies the function"));
  }
  BoolFun r = f;
  r.set(a, !want);
  r.set(b, !want);
  return r;
}

BoolFun replay(const RewriteTrace& trace) {
  BoolFun cur = trace.start;
  for (const RewriteStep& s : trace.steps) cur = apply_step(cur, s);
  return cur;
}

TraceCheck verify_trace(const RewriteTrace& trace, const BoolFun& expected_end) {
  TraceCheck check;
  BoolFun cur = trace.start;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    try {
      cur = apply_step(cur, trace.steps[i]);
    } catch (const DomainError& e) {
      check.ok = false;
      check.failed_index = i;
      check.message = "step " + std::to_string(i) + ": " + e.what();
      return check;
    }
  }
  if (!(cur == expected_end)) {
    check.ok = false;
    check.failed_index = trace.steps.size();
    check.message = "trace replays cleanly but does not end at the expected function";
    return check;
  }
  check.ok = true;
  return check;
}

RewriteTrace reversed(const RewriteTrace& trace, const BoolFun& new_start) {
  RewriteTrace out{new_start, {}};
  out.steps.reserve(trace.steps.size());
  for (auto it = trace.steps.rbegin(); it != trace.steps.rend(); ++it)
    out.steps.push_back(
        {it->sign == StepSign::kPlus ? StepSign::kMinus : StepSign::kPlus, it->nu, it->var});
  return out;
}

std::vector<RewriteStep> chainkill(const BoolFun& f, const std::vector<Valuation>& path) {
  validate_path(f, path);
  const std::size_t interior = path.size() - 2;
  if (interior % 2 != 0)
    throw DomainError("invalid chain: removing both endpoints needs an even number of interior "
                      "valuations (endpoints of opposite size parity)");
  if (!f(path.front()) || !f(path.back()))
    throw DomainError("invalid chain: both endpoints must satisfy the function");
  validate_interior_unsatisfying(f, path);

  // Walk the path two nodes at a time: color the next free pair, then
  // uncolor the pair behind it; one final uncolor removes the far endpoint.
  std::vector<RewriteStep> steps;
  const std::size_t i = interior / 2;
  for (std::size_t j = 0; j < i; ++j) {
    steps.push_back(plus_step(path[2 * j + 1], path[2 * j + 2]));
    steps.push_back(minus_step(path[2 * j], path[2 * j + 1]));
  }
  steps.push_back(minus_step(path[2 * i], path[2 * i + 1]));
  return steps;
}

std::vector<RewriteStep> chainswap(const BoolFun& f, const std::vector<Valuation>& path) {
  validate_path(f, path);
  const std::size_t interior = path.size() - 2;
  if (interior % 2 != 1)
    throw DomainError("invalid chain: moving a color needs an odd number of interior valuations "
                      "(endpoints of equal size parity)");
  if (!f(path.front()))
    throw DomainError("invalid chain: the first endpoint must satisfy the function");
  if (f(path.back()))
    throw DomainError("invalid chain: the last endpoint must not satisfy the function");
  validate_interior_unsatisfying(f, path);

  std::vector<RewriteStep> steps;
  const std::size_t m = (interior - 1) / 2;
  for (std::size_t j = 0; j <= m; ++j) {
    steps.push_back(plus_step(path[2 * j + 1], path[2 * j + 2]));
    steps.push_back(minus_step(path[2 * j], path[2 * j + 1]));
  }
  return steps;
}

std::vector<Valuation> shortest_path(Valuation a, Valuation b) {
  std::vector<Valuation> path = {a};
  Valuation cur = a;
  while (cur != b) {
    uint32_t diff = cur.bits() ^ b.bits();
    Valuation best;
    bool have = false;
    while (diff) {
      uint32_t bit = diff & -diff;
      diff &= diff - 1;
      Valuation cand(cur.bits() ^ bit);
      if (!have || cand < best) {
        best = cand;
        have = true;
      }
    }
    path.push_back(best);
    cur = best;
  }
  return path;
}

FetchedPair fetch_pair(const BoolFun& f) {
  long long e = f.euler();
  if (f.sat_count() == static_cast<uint64_t>(e < 0 ? -e : e))
    throw DomainError("nothing to fetch: every satisfying valuation has the same size parity");

  // Smallest satisfying valuation, then the smallest one of opposite parity.
  Valuation first, second;
  bool have_first = false, have_second = false;
  for (uint32_t v = 0; v < f.valuation_count() && !have_second; ++v) {
    if (!f(Valuation(v))) continue;
    if (!have_first) {
      first = Valuation(v);
      have_first = true;
    } else if (Valuation(v).even_size() != first.even_size()) {
      second = Valuation(v);
      have_second = true;
    }
  }

  std::vector<Valuation> path = shortest_path(first, second);
  // Trim to the last same-parity satisfying node and the next
  // opposite-parity satisfying node after it; the strip between them is
  // clean by maximality/minimality.
  std::size_t i = 0;
  for (std::size_t j = 0; j + 1 < path.size(); ++j)
    if (path[j].even_size() == first.even_size() && f(path[j])) i = j;
  std::size_t i2 = path.size() - 1;
  for (std::size_t j = i + 1; j < path.size(); ++j)
    if (path[j].even_size() == second.even_size() && f(path[j])) {
      i2 = j;
      break;
    }
  FetchedPair out;
  out.nu = path[i];
  out.nu_prime = path[i2];
  out.path.assign(path.begin() + i, path.begin() + i2 + 1);
  return out;
}

RewriteTrace reduce_to_bot(const BoolFun& f) {
  long long e = f.euler();
  if (e != 0)
    throw DomainError("not reducible to the always-false function: euler characteristic is " +
                      std::to_string(e) + ", expected 0");
  RewriteTrace trace{f, {}};
  BoolFun cur = f;
  while (!cur.is_bottom()) {
    FetchedPair fp = fetch_pair(cur);
    append_and_apply(cur, trace, chainkill(cur, fp.path));
  }
  return trace;
}

RewriteTrace to_even_support(const BoolFun& f) {
  long long e = f.euler();
  if (e < 0)
    throw DomainError("euler characteristic is " + std::to_string(e) +
                      "; negate the function first (the construction is sign-symmetric)");
  RewriteTrace trace{f, {}};
  BoolFun cur = f;
  auto has_odd_sat = [&]() {
    for (Valuation v : cur.sat_list())
      if (!v.even_size()) return true;
    return false;
  };
  while (has_odd_sat()) {
    FetchedPair fp = fetch_pair(cur);
    append_and_apply(cur, trace, chainkill(cur, fp.path));
  }
  return trace;
}

bool is_canonical_form(const BoolFun& f) {
  int max_sat = -1;
  for (Valuation v : f.sat_list()) {
    if (!v.even_size()) return false;
    max_sat = std::max(max_sat, v.size());
  }
  if (max_sat < 0) return true;
  for (uint32_t v = 0; v < f.valuation_count(); ++v) {
    Valuation val(v);
    if (val.even_size() && !f(val) && val.size() < max_sat) return false;
  }
  return true;
}

RewriteTrace canonicalize(const BoolFun& f) {
  for (Valuation v : f.sat_list())
    if (!v.even_size())
      throw DomainError("canonical form requires a function with only even-size satisfying "
                        "valuations; {" + v.to_string() + "} has odd size");

  RewriteTrace trace{f, {}};
  BoolFun cur = f;
  while (true) {
    // Largest satisfying valuation and smallest even-size unsatisfying one.
    Valuation nu, nu_prime;
    bool have_nu = false, have_prime = false;
    for (Valuation v : cur.sat_list())
      if (!have_nu || v.size() > nu.size()) {
        nu = v;
        have_nu = true;
      }
    for (uint32_t v = 0; v < cur.valuation_count() && !have_prime; ++v)
      if (Valuation(v).even_size() && !cur(Valuation(v))) {
        nu_prime = Valuation(v);
        have_prime = true;
      }
    if (!have_nu || !have_prime || nu_prime.size() >= nu.size()) break;  // no bad pair left

    Valuation target = nu_prime;
    if (!nu_prime.subset_of(nu)) {
      // Lexicographically smallest subset of nu with |nu_prime| elements.
      uint32_t bits = 0;
      uint32_t pool = nu.bits();
      for (int picked = 0; picked < nu_prime.size(); ++picked) {
        bits |= pool & -pool;
        pool &= pool - 1;
      }
      target = Valuation(bits);
      if (cur(target)) lateral_free(cur, trace, target, nu_prime);
    }

    // Descending chainswap onto the freed slot: start from the lowest
    // satisfying valuation on the descending path so the tail is clean.
    std::vector<Valuation> down = shortest_path(nu, target);
    std::size_t start = 0;
    for (std::size_t j = down.size() - 1; j-- > 0;)
      if (cur(down[j])) {
        start = j;
        break;
      }
    std::vector<Valuation> seg(down.begin() + start, down.end());
    append_and_apply(cur, trace, chainswap(cur, seg));
  }
  return trace;
}

RewriteTrace equivalence_witness(const BoolFun& f, const BoolFun& g) {
  if (f.k() != g.k())
    throw DomainError("arity mismatch: functions have k=" + std::to_string(f.k()) + " and k=" +
                      std::to_string(g.k()));
  long long ef = f.euler(), eg = g.euler();
  if (ef != eg)
    throw DomainError("no rewrite witness exists: euler characteristics differ (" +
                      std::to_string(ef) + " vs " + std::to_string(eg) + ")");

  if (ef < 0) {
    // euler(not f) = -euler(f): build the witness for the negations and
    // flip every step's sign; the same pairs connect f to g.
    RewriteTrace neg = equivalence_witness(bf_not(f), bf_not(g));
    RewriteTrace out{f, {}};
    out.steps.reserve(neg.steps.size());
    for (const RewriteStep& s : neg.steps)
      out.steps.push_back(
          {s.sign == StepSign::kPlus ? StepSign::kMinus : StepSign::kPlus, s.nu, s.var});
    return out;
  }

  RewriteTrace forward = to_even_support(f);
  BoolFun f_even = replay(forward);
  {
    RewriteTrace canon = canonicalize(f_even);
    forward.steps.insert(forward.steps.end(), canon.steps.begin(), canon.steps.end());
  }
  BoolFun f_canon = replay(forward);

  RewriteTrace backward = to_even_support(g);
  {
    RewriteTrace canon = canonicalize(replay(backward));
    backward.steps.insert(backward.steps.end(), canon.steps.begin(), canon.steps.end());
  }
  BoolFun g_canon = replay(backward);

  // Both canonical forms have the same level profile, so they can only
  // disagree on their top satisfying layer; realign it pair by pair.
  BoolFun cur = f_canon;
  while (!(cur == g_canon)) {
    Valuation mine, theirs;
    bool have_mine = false, have_theirs = false;
    for (uint32_t v = 0; v < cur.valuation_count(); ++v) {
      Valuation val(v);
      if (!have_mine && cur(val) && !g_canon(val)) {
        mine = val;
        have_mine = true;
      }
      if (!have_theirs && g_canon(val) && !cur(val)) {
        theirs = val;
        have_theirs = true;
      }
    }
    if (!have_mine || !have_theirs || mine.size() != theirs.size())
      throw Error("internal error: canonical forms disagree below the top layer");
    lateral_move(cur, forward, mine, theirs);
  }

  RewriteTrace out{f, std::move(forward.steps)};
  RewriteTrace back = reversed(backward, g_canon);
  out.steps.insert(out.steps.end(), back.steps.begin(), back.steps.end());
  return out;
}

std::vector<Valuation> ColoredGraph::neighbors(Valuation v) const {
  std::vector<Valuation> out;
  out.reserve(fun.var_count());
  for (int l = 0; l <= fun.k(); ++l) out.push_back(v.flipped(l));
  return out;
}

std::string colored_graph_to_dot(const BoolFun& f) {
  std::string dot = "graph valuations {\n  node [shape=box];\n";
  for (uint32_t v = 0; v < f.valuation_count(); ++v) {
    Valuation val(v);
    dot += "  n" + std::to_string(v) + " [label=\"{" +
           (val.bits() == 0 ? std::string() : val.to_string()) + "}\"";
    if (f(val)) dot += ", style=filled, fillcolor=orange";
    dot += "];\n";
  }
  for (uint32_t v = 0; v < f.valuation_count(); ++v)
    for (int l = 0; l <= f.k(); ++l) {
      uint32_t u = v | (uint32_t{1} << l);
      if (u != v) dot += "  n" + std::to_string(v) + " -- n" + std::to_string(u) + ";\n";
    }
  dot += "}\n";
  return dot;
}

TraceFile parse_trace(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  TraceFile out;
  bool have_k = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    std::size_t end = line.find_last_not_of(" \t\r");
    std::string body = line.substr(start, end - start + 1);
    if (body[0] == '#') continue;
    if (!have_k) {
      if (body.rfind("k ", 0) != 0)
        throw InputError("line " + std::to_string(line_no) + ": expected 'k <int>'");
      try {
        out.k = std::stoi(body.substr(2));
      } catch (...) {
        throw InputError("line " + std::to_string(line_no) + ": bad value for k");
      }
      if (out.k < 1 || out.k > BoolFun::kMaxK)
        throw InputError("line " + std::to_string(line_no) + ": k out of range");
      have_k = true;
      continue;
    }
    std::size_t colon = body.find(':');
    if (colon == std::string::npos || body.size() < 3 || (body[0] != '+' && body[0] != '-'))
      throw InputError("line " + std::to_string(line_no) +
                       ": expected '<+|-> <var> : <valuation>'");
    std::string head = body.substr(1, colon - 1);
    std::string tail = body.substr(colon + 1);
    int var;
    try {
      std::size_t used;
      var = std::stoi(head, &used);
      while (used < head.size() && std::isspace(static_cast<unsigned char>(head[used]))) ++used;
      if (used != head.size()) throw std::invalid_argument("");
    } catch (...) {
      throw InputError("line " + std::to_string(line_no) + ": bad variable index");
    }
    if (var < 0 || var > out.k)
      throw InputError("line " + std::to_string(line_no) + ": variable " + std::to_string(var) +
                       " exceeds k=" + std::to_string(out.k));
    Valuation nu;
    try {
      nu = parse_valuation(tail, out.k);
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(line_no) + ": " + e.what());
    }
    out.steps.push_back({body[0] == '+' ? StepSign::kPlus : StepSign::kMinus, nu, var});
  }
  if (!have_k) throw InputError("empty trace file");
  return out;
}

std::string serialize_trace(int k, const std::vector<RewriteStep>& steps) {
  std::string out = "k " + std::to_string(k) + "\n";
  for (const RewriteStep& s : steps) {
    out += s.sign == StepSign::kPlus ? '+' : '-';
    out += ' ';
    out += std::to_string(s.var);
    out += " : ";
    out += s.nu.to_string();
    out += '\n';
  }
  return out;
}

}  // namespace eulerdd
