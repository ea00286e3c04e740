#include "eulerdd/circuit.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "eulerdd/analysis.hpp"
#include "eulerdd/errors.hpp"
#include "eulerdd/fragment.hpp"
#include "eulerdd/obdd.hpp"

namespace eulerdd {

namespace {

void require_child(const Circuit& c, int child) {
  if (child < 0 || child >= static_cast<int>(c.gates.size()))
    throw DomainError("gate child " + std::to_string(child) + " does not exist yet");
}

}  // namespace

int Circuit::add_var(int fact) {
  if (fact < 0 || fact >= static_cast<int>(fact_labels.size()))
    throw DomainError("variable gate references unknown fact index " + std::to_string(fact));
  gates.push_back({Kind::kVar, fact, {}});
  return static_cast<int>(gates.size()) - 1;
}

int Circuit::add_const(bool value) {
  gates.push_back({value ? Kind::kConstTrue : Kind::kConstFalse, -1, {}});
  return static_cast<int>(gates.size()) - 1;
}

int Circuit::add_not(int child) {
  require_child(*this, child);
  gates.push_back({Kind::kNot, -1, {child}});
  return static_cast<int>(gates.size()) - 1;
}

int Circuit::add_and(std::vector<int> children) {
  if (children.empty()) throw DomainError("AND gates need at least one child");
  for (int ch : children) require_child(*this, ch);
  gates.push_back({Kind::kAnd, -1, std::move(children)});
  return static_cast<int>(gates.size()) - 1;
}

int Circuit::add_or(std::vector<int> children, std::optional<OrCertificate> cert) {
  if (children.empty()) throw DomainError("OR gates need at least one child");
  for (int ch : children) require_child(*this, ch);
  gates.push_back({Kind::kOr, -1, std::move(children)});
  int g = static_cast<int>(gates.size()) - 1;
  if (cert) or_certs.emplace(g, std::move(*cert));
  return g;
}

std::vector<Bitset> Circuit::vars_per_gate() const {
  std::vector<Bitset> vars(gates.size(), Bitset(fact_labels.size()));
  for (std::size_t g = 0; g < gates.size(); ++g) {
    if (gates[g].kind == Kind::kVar)
      vars[g].set(gates[g].fact, true);
    else
      for (int ch : gates[g].children) vars[g] |= vars[ch];
  }
  return vars;
}

Bitset Circuit::root_vars() const {
  if (root < 0) throw DomainError("circuit has no root");
  return vars_per_gate()[root];
}

bool evaluate(const Circuit& c, World w) {
  if (c.root < 0) throw DomainError("circuit has no root");
  if (c.fact_labels.size() > 64)
    throw DomainError("worlds over more than 64 facts are not supported");
  std::vector<char> val(c.gates.size());
  for (std::size_t g = 0; g < c.gates.size(); ++g) {
    const Circuit::Gate& gate = c.gates[g];
    switch (gate.kind) {
      case Circuit::Kind::kVar:
        val[g] = w.has(gate.fact);
        break;
      case Circuit::Kind::kConstFalse:
        val[g] = 0;
        break;
      case Circuit::Kind::kConstTrue:
        val[g] = 1;
        break;
      case Circuit::Kind::kNot:
        val[g] = !val[gate.children[0]];
        break;
      case Circuit::Kind::kAnd: {
        char v = 1;
        for (int ch : gate.children) v = v && val[ch];
        val[g] = v;
        break;
      }
      case Circuit::Kind::kOr: {
        char v = 0;
        for (int ch : gate.children) v = v || val[ch];
        val[g] = v;
        break;
      }
    }
  }
  return val[c.root];
}

bool check_decomposable(const Circuit& c) {
  std::vector<Bitset> vars = c.vars_per_gate();
  for (const Circuit::Gate& gate : c.gates) {
    if (gate.kind != Circuit::Kind::kAnd) continue;
    Bitset seen(c.fact_labels.size());
    for (int ch : gate.children) {
      if (seen.intersects(vars[ch])) return false;
      seen |= vars[ch];
    }
  }
  return true;
}

namespace {

// Distinct facts referenced by VAR gates, in first-use order.
std::vector<int> referenced_facts(const Circuit& c) {
  std::vector<int> facts;
  std::vector<char> seen(c.fact_labels.size(), 0);
  for (const Circuit::Gate& g : c.gates)
    if (g.kind == Circuit::Kind::kVar && !seen[g.fact]) {
      seen[g.fact] = 1;
      facts.push_back(g.fact);
    }
  return facts;
}

// Evaluates every gate on 64 assignments at once; assignment index bit p is
// the value of the fact at compact position p.
class BlockEvaluator {
 public:
  explicit BlockEvaluator(const Circuit& c) : c_(c), facts_(referenced_facts(c)) {
    pos_.assign(c.fact_labels.size(), -1);
    for (std::size_t p = 0; p < facts_.size(); ++p) pos_[facts_[p]] = static_cast<int>(p);
  }

  std::size_t fact_count() const { return facts_.size(); }
  uint64_t assignment_count() const { return uint64_t{1} << facts_.size(); }

  // vals[g] = 64 evaluations of gate g on assignments [base, base+64).
  void evaluate_block(uint64_t base, std::vector<uint64_t>& vals) const {
    static constexpr uint64_t kLow[6] = {
        0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
        0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};
    vals.resize(c_.gates.size());
    for (std::size_t g = 0; g < c_.gates.size(); ++g) {
      const Circuit::Gate& gate = c_.gates[g];
      switch (gate.kind) {
        case Circuit::Kind::kVar: {
          int p = pos_[gate.fact];
          vals[g] = p < 6 ? kLow[p] : (((base >> p) & 1) ? ~uint64_t{0} : 0);
          break;
        }
        case Circuit::Kind::kConstFalse:
          vals[g] = 0;
          break;
        case Circuit::Kind::kConstTrue:
          vals[g] = ~uint64_t{0};
          break;
        case Circuit::Kind::kNot:
          vals[g] = ~vals[gate.children[0]];
          break;
        case Circuit::Kind::kAnd: {
          uint64_t v = ~uint64_t{0};
          for (int ch : gate.children) v &= vals[ch];
          vals[g] = v;
          break;
        }
        case Circuit::Kind::kOr: {
          uint64_t v = 0;
          for (int ch : gate.children) v |= vals[ch];
          vals[g] = v;
          break;
        }
      }
    }
  }

 private:
  const Circuit& c_;
  std::vector<int> facts_;
  std::vector<int> pos_;
};

constexpr std::size_t kSemanticGuard = 20;

}  // namespace

Bitset circuit_table(const Circuit& c) {
  if (c.root < 0) throw DomainError("circuit has no root");
  BlockEvaluator ev(c);
  if (ev.fact_count() > kSemanticGuard)
    throw DomainError("circuit references " + std::to_string(ev.fact_count()) +
                      " facts; the exhaustive guard is " + std::to_string(kSemanticGuard));
  uint64_t n = ev.assignment_count();
  Bitset table(n);
  std::vector<uint64_t> vals;
  for (uint64_t base = 0; base < n || base == 0; base += 64) {
    ev.evaluate_block(base, vals);
    uint64_t word = vals[c.root];
    if (n < 64) word &= (uint64_t{1} << n) - 1;
    table.words()[base / 64] = word;
    if (n <= 64) break;
  }
  return table;
}

bool check_deterministic(const Circuit& c, DeterminismMode mode) {
  if (mode == DeterminismMode::kCertified) {
    for (std::size_t g = 0; g < c.gates.size(); ++g) {
      const Circuit::Gate& gate = c.gates[g];
      if (gate.kind != Circuit::Kind::kOr) continue;
      auto it = c.or_certs.find(static_cast<int>(g));
      if (it == c.or_certs.end()) return false;  // no certificate recorded
      const OrCertificate& cert = it->second;
      switch (cert.kind) {
        case OrCertificate::Kind::kDecision: {
          // Shape: (v and x) or (not v and y) on the same fact.
          if (gate.children.size() != 2) return false;
          int v1 = -1, v2 = -1;
          for (int side = 0; side < 2; ++side) {
            const Circuit::Gate& ch = c.gates[gate.children[side]];
            if (ch.kind != Circuit::Kind::kAnd || ch.children.size() != 2) return false;
            const Circuit::Gate& first = c.gates[ch.children[0]];
            if (first.kind == Circuit::Kind::kVar) {
              if (side == 0)
                v1 = first.fact;
              else
                return false;  // second child must test the negated fact
            } else if (first.kind == Circuit::Kind::kNot) {
              const Circuit::Gate& inner = c.gates[first.children[0]];
              if (inner.kind != Circuit::Kind::kVar || side == 0) return false;
              v2 = inner.fact;
            } else {
              return false;
            }
          }
          if (v1 < 0 || v1 != v2) return false;
          break;
        }
        case OrCertificate::Kind::kDisjointPatterns: {
          if (cert.patterns.size() != gate.children.size()) return false;
          for (std::size_t i = 0; i < cert.patterns.size(); ++i)
            for (std::size_t j = i + 1; j < cert.patterns.size(); ++j)
              if (cert.patterns[i] == cert.patterns[j]) return false;
          break;
        }
        case OrCertificate::Kind::kTemplateOr: {
          if (cert.child_funs.size() != gate.children.size()) return false;
          for (std::size_t i = 0; i < cert.child_funs.size(); ++i)
            for (std::size_t j = i + 1; j < cert.child_funs.size(); ++j)
              if (!cert.child_funs[i].is_disjoint(cert.child_funs[j])) return false;
          break;
        }
      }
    }
    return true;
  }

  // Semantic mode: exhaustive co-satisfaction over the referenced facts.
  BlockEvaluator ev(c);
  if (ev.fact_count() > kSemanticGuard)
    throw DomainError("semantic determinism check needs at most " +
                      std::to_string(kSemanticGuard) +
                      " facts; use the certified mode for larger circuits");
  uint64_t n = ev.assignment_count();
  uint64_t tail_mask = n >= 64 ? ~uint64_t{0} : (uint64_t{1} << n) - 1;
  std::vector<uint64_t> vals;
  for (uint64_t base = 0; base < n || base == 0; base += 64) {
    ev.evaluate_block(base, vals);
    for (std::size_t g = 0; g < c.gates.size(); ++g) {
      const Circuit::Gate& gate = c.gates[g];
      if (gate.kind != Circuit::Kind::kOr) continue;
      // Children overlap iff some assignment satisfies two of them.
      int total = 0;
      uint64_t any = 0;
      for (int ch : gate.children) {
        uint64_t v = vals[ch] & tail_mask;
        total += std::popcount(v);
        any |= v;
      }
      if (total != std::popcount(any)) return false;
    }
    if (n <= 64) break;
  }
  return true;
}

namespace {

Rat gate_probabilities(const Circuit& c, const TidDatabase& db) {
  if (c.root < 0) throw DomainError("circuit has no root");
  std::vector<Rat> prob(c.gates.size());
  std::vector<int> fact_binding(c.fact_labels.size(), -1);
  for (std::size_t g = 0; g < c.gates.size(); ++g) {
    const Circuit::Gate& gate = c.gates[g];
    switch (gate.kind) {
      case Circuit::Kind::kVar: {
        int& bound = fact_binding[gate.fact];
        if (bound < 0) {
          bound = db.find_fact_by_label(c.fact_labels[gate.fact]);
          if (bound < 0)
            throw DomainError("the database assigns no probability to fact " +
                              c.fact_labels[gate.fact]);
        }
        prob[g] = db.facts[bound].prob;
        break;
      }
      case Circuit::Kind::kConstFalse:
        prob[g] = Rat(0);
        break;
      case Circuit::Kind::kConstTrue:
        prob[g] = Rat(1);
        break;
      case Circuit::Kind::kNot:
        prob[g] = Rat(1) - prob[gate.children[0]];
        break;
      case Circuit::Kind::kAnd: {
        Rat p(1);
        for (int ch : gate.children) p *= prob[ch];
        prob[g] = p;
        break;
      }
      case Circuit::Kind::kOr: {
        Rat p(0);
        for (int ch : gate.children) p += prob[ch];
        prob[g] = p;
        break;
      }
    }
  }
  return prob[c.root];
}

}  // namespace

Rat probability(const Circuit& c, const TidDatabase& db, DeterminismMode mode) {
  if (!check_decomposable(c))
    throw DomainError("refusing to evaluate: an AND gate has children over overlapping facts");
  if (!check_deterministic(c, mode))
    throw DomainError("refusing to evaluate: an OR gate has non-disjoint children (its sum "
                      "would overcount)");
  return gate_probabilities(c, db);
}

Rat probability_unchecked(const Circuit& c, const TidDatabase& db) {
  return gate_probabilities(c, db);
}

Circuit compose_template(const Fragmentation& frag, const std::vector<Circuit>& leaf_circuits) {
  if (leaf_circuits.size() != frag.leaves.size())
    throw DomainError("hole/circuit arity mismatch: " + std::to_string(frag.leaves.size()) +
                      " leaves vs " + std::to_string(leaf_circuits.size()) + " circuits");

  Circuit out;
  // Leaves compiled against one database share its fact table verbatim, so
  // fact indices keep lining up with world bit positions; disagreeing
  // tables are merged by label instead.
  bool shared_table = true;
  for (const Circuit& leaf : leaf_circuits)
    if (!(leaf.fact_labels == leaf_circuits.front().fact_labels)) shared_table = false;
  std::map<std::string, int> fact_of_label;
  if (shared_table && !leaf_circuits.empty()) {
    out.fact_labels = leaf_circuits.front().fact_labels;
  }
  auto intern_label = [&](const std::string& label) {
    auto [it, inserted] = fact_of_label.emplace(label, out.fact_labels.size());
    if (inserted) out.fact_labels.push_back(label);
    return it->second;
  };

  // Splices a leaf circuit's gates into `out`, returning its root's index.
  auto splice = [&](const Circuit& leaf) {
    int base = static_cast<int>(out.gates.size());
    for (const Circuit::Gate& g : leaf.gates) {
      Circuit::Gate copy = g;
      if (copy.kind == Circuit::Kind::kVar && !shared_table)
        copy.fact = intern_label(leaf.fact_labels[g.fact]);
      for (int& ch : copy.children) ch += base;
      out.gates.push_back(std::move(copy));
    }
    for (const auto& [g, cert] : leaf.or_certs) out.or_certs.emplace(g + base, cert);
    return base + leaf.root;
  };

  std::vector<BoolFun> values = template_node_values(frag.tmpl, frag.leaves);
  std::vector<int> gate_of(frag.tmpl.nodes.size(), -1);
  for (std::size_t n = 0; n < frag.tmpl.nodes.size(); ++n) {
    const Template::Node& node = frag.tmpl.nodes[n];
    switch (node.kind) {
      case Template::Kind::kHole:
        gate_of[n] = splice(leaf_circuits[node.hole]);
        break;
      case Template::Kind::kNot:
        gate_of[n] = out.add_not(gate_of[node.children[0]]);
        break;
      case Template::Kind::kOr: {
        std::vector<int> children;
        OrCertificate cert{OrCertificate::Kind::kTemplateOr, {}, {}};
        for (int ch : node.children) {
          children.push_back(gate_of[ch]);
          cert.child_funs.push_back(values[ch]);
        }
        gate_of[n] = out.add_or(std::move(children), std::move(cert));
        break;
      }
    }
  }
  out.root = gate_of[frag.tmpl.root];
  return out;
}

NotCompilableError::NotCompilableError(long long e, std::string v)
    : DomainError("not compilable to a deterministic decomposable circuit: euler "
                  "characteristic is " + std::to_string(e) + ", expected 0; classification: " + v),
      euler(e),
      verdict(std::move(v)) {}

Circuit compile_query(const BoolFun& f, const TidDatabase& db) {
  long long e = f.euler();
  if (e != 0) throw NotCompilableError(e, describe(classify(f)));
  Fragmentation frag = fragment(f);
  std::vector<Circuit> leaves;
  leaves.reserve(frag.leaves.size());
  for (const BoolFun& leaf : frag.leaves) leaves.push_back(degenerate_compile(leaf, db));
  return compose_template(frag, leaves);
}

std::string export_circuit(const Circuit& c) {
  if (c.root < 0) throw DomainError("circuit has no root");
  std::vector<int> facts = referenced_facts(c);
  std::vector<int> compact(c.fact_labels.size(), -1);
  for (std::size_t p = 0; p < facts.size(); ++p) compact[facts[p]] = static_cast<int>(p);

  std::string out = "ddc v1\nfacts " + std::to_string(facts.size()) + "\n";
  for (std::size_t g = 0; g < c.gates.size(); ++g) {
    const Circuit::Gate& gate = c.gates[g];
    out += std::to_string(g);
    switch (gate.kind) {
      case Circuit::Kind::kVar:
        out += " v " + c.fact_labels[gate.fact];
        break;
      case Circuit::Kind::kConstTrue:
        out += " t";
        break;
      case Circuit::Kind::kConstFalse:
        out += " f";
        break;
      case Circuit::Kind::kNot:
        out += " n " + std::to_string(gate.children[0]);
        break;
      case Circuit::Kind::kAnd:
      case Circuit::Kind::kOr:
        out += gate.kind == Circuit::Kind::kAnd ? " a " : " o ";
        out += std::to_string(gate.children.size());
        for (int ch : gate.children) out += " " + std::to_string(ch);
        break;
    }
    out += '\n';
  }
  out += "root " + std::to_string(c.root) + "\n";
  return out;
}

Circuit import_circuit(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw InputError("line " + std::to_string(line_no) + ": " + msg);
  };

  auto next_line = [&](std::string& out) {
    while (std::getline(in, line)) {
      ++line_no;
      std::size_t start = line.find_first_not_of(" \t\r");
      if (start == std::string::npos) continue;
      std::size_t end = line.find_last_not_of(" \t\r");
      out = line.substr(start, end - start + 1);
      if (out[0] == '#') continue;
      return true;
    }
    return false;
  };

  std::string header;
  if (!next_line(header) || header != "ddc v1") fail("expected header 'ddc v1'");
  std::string facts_line;
  if (!next_line(facts_line) || facts_line.rfind("facts ", 0) != 0)
    fail("expected 'facts <count>'");
  std::size_t declared_facts = 0;
  try {
    declared_facts = std::stoul(facts_line.substr(6));
  } catch (...) {
    fail("bad fact count");
  }

  Circuit c;
  std::map<std::string, int> fact_of_label;
  bool have_root = false;
  std::string body;
  while (next_line(body)) {
    std::istringstream ls(body);
    std::string first;
    ls >> first;
    if (first == "root") {
      int r;
      if (!(ls >> r)) fail("bad root id");
      if (r < 0 || r >= static_cast<int>(c.gates.size()))
        fail("root id " + std::to_string(r) + " is beyond the gate count");
      c.root = r;
      have_root = true;
      std::string trailing;
      if (next_line(trailing)) fail("unexpected content after the root line");
      break;
    }
    std::size_t id;
    try {
      std::size_t used;
      id = std::stoul(first, &used);
      if (used != first.size()) throw std::invalid_argument("");
    } catch (...) {
      fail("expected a gate id, got '" + first + "'");
      return c;  // unreachable
    }
    if (id != c.gates.size()) fail("gate ids must be dense and ascending from 0");

    std::string kind;
    if (!(ls >> kind)) fail("missing gate kind");
    auto read_child = [&]() {
      long long ch;
      if (!(ls >> ch)) fail("missing child id");
      if (ch < 0 || ch >= static_cast<long long>(id))
        fail("child " + std::to_string(ch) +
             " is not an earlier gate (the file must be topologically ordered)");
      return static_cast<int>(ch);
    };

    if (kind == "v") {
      std::string label;
      if (!(ls >> label)) fail("variable gate needs a fact label");
      auto [it, inserted] = fact_of_label.emplace(label, c.fact_labels.size());
      if (inserted) {
        if (c.fact_labels.size() == declared_facts)
          fail("more distinct fact labels than the declared fact count");
        c.fact_labels.push_back(label);
      }
      c.gates.push_back({Circuit::Kind::kVar, it->second, {}});
    } else if (kind == "t") {
      c.gates.push_back({Circuit::Kind::kConstTrue, -1, {}});
    } else if (kind == "f") {
      c.gates.push_back({Circuit::Kind::kConstFalse, -1, {}});
    } else if (kind == "n") {
      c.gates.push_back({Circuit::Kind::kNot, -1, {read_child()}});
    } else if (kind == "a" || kind == "o") {
      std::size_t count;
      if (!(ls >> count) || count == 0) fail("bad child count");
      std::vector<int> children;
      children.reserve(count);
      for (std::size_t i = 0; i < count; ++i) children.push_back(read_child());
      c.gates.push_back(
          {kind == "a" ? Circuit::Kind::kAnd : Circuit::Kind::kOr, -1, std::move(children)});
    } else {
      fail("unknown gate kind '" + kind + "'");
    }
    std::string extra;
    if (ls >> extra) fail("trailing tokens after gate definition");
  }
  if (!have_root) throw InputError("missing 'root <id>' line");
  if (c.fact_labels.size() != declared_facts)
    throw InputError("declared fact count " + std::to_string(declared_facts) +
                     " does not match the " + std::to_string(c.fact_labels.size()) +
                     " distinct labels used");
  return c;
}

}  // namespace eulerdd
