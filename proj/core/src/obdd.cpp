#include "eulerdd/obdd.hpp"

#include <algorithm>
#include <functional>

#include "eulerdd/errors.hpp"

namespace eulerdd {

bool VarOrder::contains(int fact) const {
  return std::find(facts.begin(), facts.end(), fact) != facts.end();
}

int VarOrder::position(int fact) const {
  auto it = std::find(facts.begin(), facts.end(), fact);
  return it == facts.end() ? static_cast<int>(facts.size()) : static_cast<int>(it - facts.begin());
}

Obdd::Obdd(VarOrder order) : order_(std::move(order)) {
  nodes_.push_back({-1, -1, -1});  // 0: false terminal
  nodes_.push_back({-1, -1, -1});  // 1: true terminal
}

Obdd Obdd::constant(VarOrder order, bool value) {
  Obdd d(std::move(order));
  d.root_ = value ? 1 : 0;
  return d;
}

Obdd Obdd::var(VarOrder order, int fact) {
  Obdd d(std::move(order));
  if (!d.order_.contains(fact))
    throw DomainError("fact " + std::to_string(fact) + " is not in the variable order");
  d.root_ = d.make(fact, 0, 1);
  return d;
}

int Obdd::make(int fact, int lo, int hi) {
  if (lo == hi) return lo;
  uint64_t key = (static_cast<uint64_t>(fact) << 40) ^ (static_cast<uint64_t>(lo) << 20) ^
                 static_cast<uint64_t>(hi);
  auto [it, inserted] = unique_.try_emplace(key, static_cast<int>(nodes_.size()));
  if (inserted) nodes_.push_back({fact, lo, hi});
  return it->second;
}

bool Obdd::evaluate(World w) const {
  int n = root_;
  while (n > 1) n = w.has(nodes_[n].fact) ? nodes_[n].hi : nodes_[n].lo;
  return n == 1;
}

bool Obdd::is_reduced_and_ordered() const {
  std::unordered_map<uint64_t, int> seen;
  for (std::size_t i = 2; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.lo == n.hi) return false;
    uint64_t key = (static_cast<uint64_t>(n.fact) << 40) ^ (static_cast<uint64_t>(n.lo) << 20) ^
                   static_cast<uint64_t>(n.hi);
    if (!seen.emplace(key, static_cast<int>(i)).second) return false;
    int pos = order_.position(n.fact);
    for (int child : {n.lo, n.hi})
      if (child > 1 && order_.position(nodes_[child].fact) <= pos) return false;
  }
  return true;
}

Obdd apply(Circuit::Kind op, const Obdd& a, const Obdd& b) {
  if (!(a.order_ == b.order_))
    throw DomainError("cannot combine diagrams built under different variable orders");
  if (op != Circuit::Kind::kAnd && op != Circuit::Kind::kOr)
    throw DomainError("diagrams combine with AND or OR only");

  Obdd out(a.order_);
  std::unordered_map<uint64_t, int> memo;
  const bool is_and = op == Circuit::Kind::kAnd;
  constexpr int kPastEnd = INT32_MAX;

  std::function<int(int, int)> go = [&](int na, int nb) -> int {
    if (na <= 1 && nb <= 1) return (is_and ? na == 1 && nb == 1 : na == 1 || nb == 1) ? 1 : 0;
    if (is_and && (na == 0 || nb == 0)) return 0;
    if (!is_and && (na == 1 || nb == 1)) return 1;

    uint64_t key = (static_cast<uint64_t>(na) << 32) | static_cast<uint64_t>(nb);
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    // Terminals act as nodes past the end of the order and pass through.
    int pa = na > 1 ? a.order_.position(a.nodes_[na].fact) : kPastEnd;
    int pb = nb > 1 ? b.order_.position(b.nodes_[nb].fact) : kPastEnd;
    int fact = pa <= pb ? a.nodes_[na].fact : b.nodes_[nb].fact;
    int lo = go(pa <= pb ? a.nodes_[na].lo : na, pb <= pa ? b.nodes_[nb].lo : nb);
    int hi = go(pa <= pb ? a.nodes_[na].hi : na, pb <= pa ? b.nodes_[nb].hi : nb);
    int r = out.make(fact, lo, hi);
    memo.emplace(key, r);
    return r;
  };

  out.root_ = go(a.root_, b.root_);
  return out;
}

Obdd negate(const Obdd& a) {
  Obdd out(a.order_);
  std::unordered_map<int, int> memo;
  std::function<int(int)> go = [&](int n) -> int {
    if (n <= 1) return 1 - n;
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    const Obdd::Node& N = a.nodes_[n];
    int r = out.make(N.fact, go(N.lo), go(N.hi));
    memo.emplace(n, r);
    return r;
  };
  out.root_ = go(a.root_);
  return out;
}

int Obdd::unfold_into(Circuit& c) const {
  std::unordered_map<int, int> gate_of;
  std::function<int(int)> go = [&](int n) -> int {
    if (n == 0) return c.add_const(false);
    if (n == 1) return c.add_const(true);
    if (auto it = gate_of.find(n); it != gate_of.end()) return it->second;
    const Node& N = nodes_[n];
    int lo = go(N.lo);
    int hi = go(N.hi);
    int v = c.add_var(N.fact);
    int nv = c.add_not(v);
    int take = c.add_and({v, hi});
    int skip = c.add_and({nv, lo});
    int g = c.add_or({take, skip}, OrCertificate{OrCertificate::Kind::kDecision, {}, {}});
    gate_of.emplace(n, g);
    return g;
  };
  return go(root_);
}

VarOrder left_order(int l, const TidDatabase& db, int k) {
  if (l < 1 || l > k)
    throw DomainError("left order expects 1 <= l <= k, got l=" + std::to_string(l));
  VarOrder order;
  for (int i = 0; i < db.domain_size(); ++i) {
    int r = db.fact_index(Pred::kR, 0, i);
    if (r >= 0) order.facts.push_back(r);
    for (int m = 0; m < db.domain_size(); ++m)
      for (int j = 1; j <= l; ++j) {
        int s = db.fact_index(Pred::kS, j, i, m);
        if (s >= 0) order.facts.push_back(s);
      }
  }
  return order;
}

VarOrder right_order(int l, const TidDatabase& db, int k) {
  if (l < 0 || l >= k)
    throw DomainError("right order expects 0 <= l < k, got l=" + std::to_string(l));
  VarOrder order;
  for (int m = 0; m < db.domain_size(); ++m) {
    for (int i = 0; i < db.domain_size(); ++i)
      for (int j = l + 1; j <= k; ++j) {
        int s = db.fact_index(Pred::kS, j, i, m);
        if (s >= 0) order.facts.push_back(s);
      }
    int t = db.fact_index(Pred::kT, 0, m);
    if (t >= 0) order.facts.push_back(t);
  }
  return order;
}

Obdd obdd_for_h(int i, const VarOrder& side_order, const TidDatabase& db, int k) {
  if (i < 0 || i > k)
    throw DomainError("atomic query index " + std::to_string(i) + " is out of range");

  // Every fact of the predicates the query mentions must sit in the order.
  auto mentions = [&](const Fact& f) {
    if (i == 0) return f.pred == Pred::kR || (f.pred == Pred::kS && f.s_index == 1);
    if (i == k) return f.pred == Pred::kT || (f.pred == Pred::kS && f.s_index == k);
    return f.pred == Pred::kS && (f.s_index == i || f.s_index == i + 1);
  };
  for (std::size_t fi = 0; fi < db.facts.size(); ++fi)
    if (mentions(db.facts[fi]) && !side_order.contains(static_cast<int>(fi)))
      throw DomainError("incomplete order: fact " + db.fact_label(static_cast<int>(fi)) +
                        " is mentioned by atomic query " + std::to_string(i) +
                        " but missing from the variable order");

  Obdd acc = Obdd::constant(side_order, false);
  const int n = db.domain_size();
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
      if (f1 < 0 || f2 < 0) continue;
      Obdd pair = apply(Circuit::Kind::kAnd, Obdd::var(side_order, f1),
                        Obdd::var(side_order, f2));
      acc = apply(Circuit::Kind::kOr, acc, pair);
    }
  return acc;
}

Circuit degenerate_compile(const BoolFun& f, const TidDatabase& db) {
  if (!f.is_degenerate())
    throw DomainError("this compiler handles degenerate functions only; the function depends "
                      "on every variable");
  for (const Fact& fact : db.facts)
    if (fact.pred == Pred::kS && fact.s_index > f.k())
      throw DomainError("database mentions S" + std::to_string(fact.s_index) +
                        " but the function has k=" + std::to_string(f.k()));

  Circuit c;
  c.fact_labels.resize(db.fact_count());
  for (std::size_t i = 0; i < db.fact_count(); ++i)
    c.fact_labels[i] = db.fact_label(static_cast<int>(i));

  if (f.is_bottom()) {
    c.root = c.add_const(false);
    return c;
  }

  const int k = f.k();
  int l = 0;
  while (f.depends_on(l)) ++l;

  std::vector<Obdd> left, right;  // diagrams for queries below and above l
  if (l >= 1) {
    VarOrder lo = left_order(l, db, k);
    for (int i = 0; i < l; ++i) left.push_back(obdd_for_h(i, lo, db, k));
  }
  if (l < k) {
    VarOrder ro = right_order(l, db, k);
    for (int i = l + 1; i <= k; ++i) right.push_back(obdd_for_h(i, ro, db, k));
  }

  auto side_diagram = [&](const std::vector<Obdd>& side, int base, Valuation v,
                          const VarOrder& order) {
    Obdd acc = Obdd::constant(order, true);
    for (std::size_t i = 0; i < side.size(); ++i) {
      int query = base + static_cast<int>(i);
      acc = apply(Circuit::Kind::kAnd, acc, v.contains(query) ? side[i] : negate(side[i]));
    }
    return acc;
  };

  // One child per pair {v, v + {l}}: exactly the pattern of v off variable
  // l, as a decomposable AND of the two sides.
  std::vector<int> children;
  OrCertificate cert{OrCertificate::Kind::kDisjointPatterns, {}, {}};
  for (uint32_t bits = 0; bits < f.valuation_count(); ++bits) {
    Valuation v(bits);
    if (v.contains(l) || !f(v)) continue;
    int left_gate = l >= 1
                        ? side_diagram(left, 0, v, left[0].order()).unfold_into(c)
                        : c.add_const(true);
    int right_gate = l < k
                         ? side_diagram(right, l + 1, v, right[0].order()).unfold_into(c)
                         : c.add_const(true);
    children.push_back(c.add_and({left_gate, right_gate}));
    cert.patterns.push_back(bits);  // l is clear in every pattern
  }

  c.root = children.empty() ? c.add_const(false) : c.add_or(std::move(children), cert);
  return c;
}

}  // namespace eulerdd
