#include "eulerdd/fragment.hpp"

#include <algorithm>

#include "eulerdd/errors.hpp"

namespace eulerdd {

int Template::add_hole(int hole) {
  nodes.push_back({Kind::kHole, hole, {}});
  hole_count = std::max(hole_count, hole + 1);
  return static_cast<int>(nodes.size()) - 1;
}

int Template::add_not(int child) {
  nodes.push_back({Kind::kNot, -1, {child}});
  return static_cast<int>(nodes.size()) - 1;
}

int Template::add_or(std::vector<int> children) {
  nodes.push_back({Kind::kOr, -1, std::move(children)});
  return static_cast<int>(nodes.size()) - 1;
}

std::vector<BoolFun> template_node_values(const Template& tmpl,
                                          const std::vector<BoolFun>& leaves) {
  if (static_cast<int>(leaves.size()) != tmpl.hole_count)
    throw DomainError("hole/leaf arity mismatch: template has " +
                      std::to_string(tmpl.hole_count) + " holes, got " +
                      std::to_string(leaves.size()) + " leaves");
  if (leaves.empty()) throw DomainError("a template needs at least one leaf");
  int k = leaves.front().k();
  for (const BoolFun& leaf : leaves)
    if (leaf.k() != k) throw DomainError("all leaves must share the same k");

  std::vector<BoolFun> values;
  values.reserve(tmpl.nodes.size());
  for (const Template::Node& n : tmpl.nodes) {
    switch (n.kind) {
      case Template::Kind::kHole:
        values.push_back(leaves[n.hole]);
        break;
      case Template::Kind::kNot:
        values.push_back(bf_not(values[n.children[0]]));
        break;
      case Template::Kind::kOr: {
        BoolFun acc = values[n.children[0]];
        for (std::size_t i = 1; i < n.children.size(); ++i)
          acc = bf_or(acc, values[n.children[i]]);
        values.push_back(std::move(acc));
        break;
      }
    }
  }
  return values;
}

BoolFun instantiate(const Template& tmpl, const std::vector<BoolFun>& leaves) {
  return template_node_values(tmpl, leaves)[tmpl.root];
}

bool check_instantiation_determinism(const Template& tmpl, const std::vector<BoolFun>& leaves) {
  std::vector<BoolFun> values = template_node_values(tmpl, leaves);
  for (const Template::Node& n : tmpl.nodes) {
    if (n.kind != Template::Kind::kOr) continue;
    for (std::size_t i = 0; i < n.children.size(); ++i)
      for (std::size_t j = i + 1; j < n.children.size(); ++j)
        if (!values[n.children[i]].is_disjoint(values[n.children[j]])) return false;
  }
  return true;
}

Fragmentation fragment_from_trace(const RewriteTrace& trace, const BoolFun& target) {
  if (!trace.start.is_bottom())
    throw DomainError("fragmentation traces must start at the always-false function");
  TraceCheck check = verify_trace(trace, target);
  if (!check.ok) throw DomainError("invalid trace: " + check.message);

  const int k = target.k();
  Fragmentation frag;
  frag.leaves.push_back(BoolFun::bottom(k));
  for (const RewriteStep& s : trace.steps)
    frag.leaves.push_back(BoolFun::adjacent_pair(k, s.nu, s.var));

  frag.tmpl.root = frag.tmpl.add_hole(0);
  std::size_t i = 0;
  while (i < trace.steps.size()) {
    if (trace.steps[i].sign == StepSign::kPlus) {
      // A run of plus steps becomes one flat OR.
      std::vector<int> children = {frag.tmpl.root};
      while (i < trace.steps.size() && trace.steps[i].sign == StepSign::kPlus) {
        children.push_back(frag.tmpl.add_hole(static_cast<int>(i) + 1));
        ++i;
      }
      frag.tmpl.root = frag.tmpl.add_or(std::move(children));
    } else {
      int inner_not = frag.tmpl.add_not(frag.tmpl.root);
      int h = frag.tmpl.add_hole(static_cast<int>(i) + 1);
      int inner_or = frag.tmpl.add_or({inner_not, h});
      frag.tmpl.root = frag.tmpl.add_not(inner_or);
      ++i;
    }
  }
  return frag;
}

Fragmentation fragment(const BoolFun& f) {
  long long e = f.euler();
  if (e != 0) throw NotFragmentableError(e);
  RewriteTrace down = reduce_to_bot(f);
  RewriteTrace up = reversed(down, BoolFun::bottom(f.k()));
  return fragment_from_trace(up, f);
}

std::string format_template(const Template& tmpl) {
  std::vector<std::string> text(tmpl.nodes.size());
  for (std::size_t i = 0; i < tmpl.nodes.size(); ++i) {
    const Template::Node& n = tmpl.nodes[i];
    switch (n.kind) {
      case Template::Kind::kHole:
        text[i] = "H" + std::to_string(n.hole);
        break;
      case Template::Kind::kNot:
        text[i] = "!" + std::string(tmpl.nodes[n.children[0]].kind == Template::Kind::kHole
                                        ? text[n.children[0]]
                                        : "(" + text[n.children[0]] + ")");
        break;
      case Template::Kind::kOr: {
        std::string s = "(";
        for (std::size_t c = 0; c < n.children.size(); ++c) {
          if (c) s += " | ";
          s += text[n.children[c]];
        }
        text[i] = s + ")";
        break;
      }
    }
  }
  return text[tmpl.root];
}

}  // namespace eulerdd
