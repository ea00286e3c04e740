#include "eulerdd/cli.hpp"

#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "eulerdd/analysis.hpp"
#include "eulerdd/boolfun.hpp"
#include "eulerdd/circuit.hpp"
#include "eulerdd/errors.hpp"
#include "eulerdd/fragment.hpp"
#include "eulerdd/lattice.hpp"
#include "eulerdd/obdd.hpp"
#include "eulerdd/pdb.hpp"
#include "eulerdd/transform.hpp"

namespace eulerdd::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const Invocation& inv, std::ostream& out, const std::string& text) {
  if (inv.out_path) {
    std::ofstream f(*inv.out_path, std::ios::binary);
    if (!f) throw InputError("cannot write file: " + *inv.out_path);
    f << text;
  } else {
    out << text;
  }
}

const std::string& require_file(const Invocation& inv, std::size_t index,
                                const std::string& what) {
  if (inv.files.size() <= index)
    throw InputError(inv.command + " needs a " + what + " argument");
  return inv.files[index];
}

int require_k(const Invocation& inv) {
  if (!inv.k) throw InputError(inv.command + " needs --k <int>");
  return *inv.k;
}

std::string set_text(Valuation v) {
  return "{" + (v.bits() == 0 ? std::string() : v.to_string()) + "}";
}

int cmd_analyze(const Invocation& inv, std::ostream& out) {
  BoolFun f = parse_function(read_file(require_file(inv, 0, "function file")));
  std::ostringstream report;
  report << "k " << f.k() << "\n";
  report << "degenerate " << (f.is_degenerate() ? "true" : "false") << "\n";
  bool monotone = f.is_monotone();
  report << "monotone " << (monotone ? "true" : "false") << "\n";
  report << "euler " << f.euler() << "\n";

  std::optional<MobiusLattice> cnf_lattice;
  if (monotone) {
    std::vector<Valuation> cnf =
        f == BoolFun::top(f.k()) ? std::vector<Valuation>{} : f.minimized_cnf();
    std::vector<Valuation> dnf =
        f.is_bottom() ? std::vector<Valuation>{} : f.minimized_dnf();
    cnf_lattice = clause_lattice(cnf);
    MobiusLattice dnf_lattice = clause_lattice(dnf);
    report << "mobius_cnf " << cnf_lattice->mobius_hat() << "\n";
    report << "mobius_dnf " << dnf_lattice.mobius_hat() << "\n";
    report << "safety "
           << (safety_by_mobius(f) == Safety::kPtime ? "PTIME" : "SHARP_P_HARD") << "\n";
  } else {
    report << "mobius_cnf -\n";
    report << "mobius_dnf -\n";
    report << "safety - (the lattice criterion is stated for monotone functions only)\n";
  }
  report << "verdict " << describe(classify(f)) << "\n";
  if (cnf_lattice) {
    report << "lattice-cnf " << cnf_lattice->size() << " elements\n";
    for (std::size_t i = 0; i < cnf_lattice->size(); ++i)
      report << "lattice-node " << set_text(Valuation(cnf_lattice->elements[i])) << " mu "
             << cnf_lattice->mobius_to_top[i] << "\n";
  }
  if (inv.dot) {
    if (!cnf_lattice)
      throw DomainError("no clause lattice to draw for a non-monotone function; use classify "
                        "--dot for the valuation graph");
    report << "\n" << lattice_to_dot(*cnf_lattice);
  }
  out << report.str();
  return 0;
}

int cmd_classify(const Invocation& inv, std::ostream& out) {
  BoolFun f = parse_function(read_file(require_file(inv, 0, "function file")));
  out << "euler " << f.euler() << "\n";
  out << "verdict " << describe(classify(f)) << "\n";
  if (inv.dot) out << "\n" << colored_graph_to_dot(f);
  return 0;
}

int cmd_fragment(const Invocation& inv, std::ostream& out) {
  BoolFun f = parse_function(read_file(require_file(inv, 0, "function file")));
  Fragmentation frag = fragment(f);
  std::ostringstream text;
  text << "k " << f.k() << "\n";
  text << "holes " << frag.tmpl.hole_count << "\n";
  text << "template " << format_template(frag.tmpl) << "\n";
  for (int h = 0; h < frag.tmpl.hole_count; ++h) {
    text << "leaf H" << h << "\n";
    for (Valuation v : frag.leaves[h].sat_list()) text << v.to_string() << "\n";
  }
  write_output(inv, out, text.str());
  return 0;
}

int cmd_reduce(const Invocation& inv, std::ostream& out) {
  BoolFun f = parse_function(read_file(require_file(inv, 0, "function file")));
  RewriteTrace trace = reduce_to_bot(f);
  write_output(inv, out, serialize_trace(f.k(), trace.steps));
  return 0;
}

int cmd_witness(const Invocation& inv, std::ostream& out) {
  if (!inv.from_path || !inv.to_path)
    throw InputError("witness needs --from <a.bf> and --to <b.bf>");
  BoolFun a = parse_function(read_file(*inv.from_path));
  BoolFun b = parse_function(read_file(*inv.to_path));
  RewriteTrace trace = equivalence_witness(a, b);
  write_output(inv, out, serialize_trace(a.k(), trace.steps));
  return 0;
}

int cmd_verify_trace(const Invocation& inv, std::ostream& out, std::ostream& err) {
  TraceFile tf = parse_trace(read_file(require_file(inv, 0, "trace file")));
  if (!inv.from_path || !inv.to_path)
    throw InputError("verify-trace needs --from <a.bf> and --to <b.bf>");
  BoolFun a = parse_function(read_file(*inv.from_path));
  BoolFun b = parse_function(read_file(*inv.to_path));
  if (a.k() != tf.k || b.k() != tf.k)
    throw DomainError("k mismatch between the trace (k=" + std::to_string(tf.k) +
                      ") and the functions");
  TraceCheck check = verify_trace(RewriteTrace{a, tf.steps}, b);
  if (check.ok) {
    out << "ok " << tf.steps.size() << " steps\n";
    return 0;
  }
  err << "invalid trace: " << check.message << "\n";
  return 1;
}

int cmd_compile(const Invocation& inv, std::ostream& out) {
  BoolFun f = parse_function(read_file(require_file(inv, 0, "function file")));
  TidDatabase db = parse_db(read_file(require_file(inv, 1, "database file")));
  Circuit c = compile_query(f, db);
  if (!check_decomposable(c) || !check_deterministic(c, DeterminismMode::kCertified))
    throw Error("internal error: compiled circuit failed its own validity checks");
  write_output(inv, out, export_circuit(c));
  return 0;
}

int cmd_prob(const Invocation& inv, std::ostream& out) {
  Circuit c = import_circuit(read_file(require_file(inv, 0, "circuit file")));
  TidDatabase db = parse_db(read_file(require_file(inv, 1, "database file")));
  if (!inv.unchecked) {
    if (!check_decomposable(c))
      throw DomainError("refusing to evaluate: an AND gate has children over overlapping "
                        "facts (pass --unchecked to evaluate anyway)");
    bool deterministic;
    try {
      deterministic = check_deterministic(c, DeterminismMode::kSemantic);
    } catch (const DomainError& e) {
      throw DomainError(std::string(e.what()) +
                        " (pass --unchecked to evaluate without verification)");
    }
    if (!deterministic)
      throw DomainError("refusing to evaluate: an OR gate has non-disjoint children, so its "
                        "sum would overcount (pass --unchecked to evaluate anyway)");
  }
  out << to_string(probability_unchecked(c, db)) << "\n";
  return 0;
}

int cmd_oracle(const Invocation& inv, std::ostream& out) {
  BoolFun f = parse_function(read_file(require_file(inv, 0, "function file")));
  TidDatabase db = parse_db(read_file(require_file(inv, 1, "database file")));
  OracleOptions opts;
  opts.max_facts = inv.max_facts;
  opts.jobs = inv.jobs;
  out << to_string(oracle_pqe(f, db, opts)) << "\n";
  return 0;
}

int cmd_conjecture(const Invocation& inv, std::ostream& out) {
  ConjectureReport r = conjecture_check(require_k(inv), inv.jobs);
  out << "k " << r.k << "\n";
  out << "monotone " << r.monotone_count << "\n";
  out << "euler-zero " << r.euler_zero_count << "\n";
  out << "colored-matched " << r.colored_matched << "\n";
  out << "uncolored-matched " << r.uncolored_matched << "\n";
  out << "both-matched " << r.both_matched << "\n";
  out << "one-sided " << (r.colored_matched + r.uncolored_matched - 2 * r.both_matched) << "\n";
  out << "counterexamples " << r.counterexamples.size() << "\n";
  for (const std::string& c : r.counterexamples) out << "counterexample\n" << c;
  return r.counterexamples.empty() ? 0 : 1;
}

int cmd_extrema(const Invocation& inv, std::ostream& out) {
  ExtremaReport r = monotone_euler_extrema(require_k(inv));
  out << "k " << *inv.k << "\n";
  out << "min " << r.min_euler << "\n";
  out << "max " << r.max_euler << "\n";
  for (const auto& c : r.candidates)
    out << "threshold " << c.threshold << " euler " << c.euler << "\n";
  out << "candidate-attains-extreme " << (r.candidate_attains_extreme ? "true" : "false")
      << "\n";
  return 0;
}

int cmd_count(const Invocation& inv, std::ostream& out) {
  EulerZeroCount r = count_euler_zero(require_k(inv), inv.check);
  out << "k " << *inv.k << "\n";
  out << "formula " << r.formula.get_str() << "\n";
  if (r.enumerated) {
    out << "enumerated " << *r.enumerated << "\n";
    out << "match " << (r.match ? "true" : "false") << "\n";
  }
  return r.match ? 0 : 1;
}

}  // namespace

int run(const Invocation& inv, std::ostream& out, std::ostream& err) {
  try {
    if (inv.command == "analyze") return cmd_analyze(inv, out);
    if (inv.command == "classify") return cmd_classify(inv, out);
    if (inv.command == "fragment") return cmd_fragment(inv, out);
    if (inv.command == "reduce") return cmd_reduce(inv, out);
    if (inv.command == "witness") return cmd_witness(inv, out);
    if (inv.command == "verify-trace") return cmd_verify_trace(inv, out, err);
    if (inv.command == "compile") return cmd_compile(inv, out);
    if (inv.command == "prob") return cmd_prob(inv, out);
    if (inv.command == "oracle") return cmd_oracle(inv, out);
    if (inv.command == "conjecture") return cmd_conjecture(inv, out);
    if (inv.command == "extrema") return cmd_extrema(inv, out);
    if (inv.command == "count-euler-zero") return cmd_count(inv, out);
    if (inv.command == "selftest") return selftest(out) ? 0 : 1;
    throw InputError("unknown command: " + inv.command);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

namespace {

// Golden inputs used by the smoke suite. The first is the standard
// four-clause monotone function whose query is tractable although plain
// inclusion-exclusion over its lattice degenerates; the second has zero
// euler characteristic while neither side of its valuation graph has a
// perfect matching, so one-signed rewriting cannot reduce it.
constexpr const char* kMonotoneSafeK3 = "k 3\nformula (2|3)&(0|3)&(1|3)&(0|1|2)\n";
constexpr const char* kNoMatchingK4 =
    "k 4\nsat\n0 3\n0 4\n3 4\n0 1 2\n0 1 3\n0 1 4\n0 2 4\n1 2 4\n0 1 3 4\n0 2 3 4\n";

constexpr const char* kSmallDbK3 =
    "R a 1/2\nR b 1/3\nS1 a a 2/3\nS1 a b 1/4\nS2 a a 1/5\nS2 b a 3/7\nS3 a a 1/2\n"
    "S3 b b 2/5\nT a 4/5\nT b 1/6\n";
constexpr const char* kSmallDbK4 =
    "R a 1/2\nS1 a a 2/3\nS2 a a 1/5\nS3 a a 1/2\nS4 a a 3/4\nT a 4/5\n";

bool enumerate_functions(int k, const std::function<bool(const BoolFun&)>& fn) {
  const uint32_t n = uint32_t{1} << (k + 1);
  for (uint64_t table = 0; table < (uint64_t{1} << n); ++table) {
    Bitset bits(n);
    bits.words()[0] = table;
    if (!fn(BoolFun::from_table(k, std::move(bits)))) return false;
  }
  return true;
}

}  // namespace

bool selftest(std::ostream& out) {
  bool all_ok = true;
  auto item = [&](const std::string& name, const std::function<bool()>& body) {
    bool ok = false;
    std::string detail;
    try {
      ok = body();
    } catch (const std::exception& e) {
      detail = e.what();
    }
    out << (ok ? "pass " : "FAIL ") << name;
    if (!ok && !detail.empty()) out << " (" << detail << ")";
    out << "\n";
    all_ok = all_ok && ok;
  };

  item("euler-zero counts match the closed form (k=1,2)", [] {
    for (int k : {1, 2}) {
      EulerZeroCount c = count_euler_zero(k, true);
      if (!c.match) return false;
    }
    return true;
  });

  item("euler equals both lattice values, all nondegenerate monotone (k<=2)", [] {
    for (int k : {1, 2}) {
      bool ok = enumerate_functions(k, [](const BoolFun& f) {
        if (!f.is_monotone() || f.is_degenerate()) return true;
        return verify_big_coeff(f).ok;
      });
      if (!ok) return false;
    }
    return true;
  });

  item("fragmentable exactly when euler is zero, validated (k<=2)", [] {
    for (int k : {1, 2}) {
      bool ok = enumerate_functions(k, [](const BoolFun& f) {
        if (f.euler() != 0) {
          try {
            fragment(f);
            return false;
          } catch (const NotFragmentableError&) {
            return true;
          }
        }
        Fragmentation frag = fragment(f);
        if (!(instantiate(frag.tmpl, frag.leaves) == f)) return false;
        if (!check_instantiation_determinism(frag.tmpl, frag.leaves)) return false;
        for (const BoolFun& leaf : frag.leaves)
          if (!leaf.is_degenerate()) return false;
        return true;
      });
      if (!ok) return false;
    }
    return true;
  });

  item("rewrite witnesses exist exactly between equal euler values (k=1)", [] {
    return enumerate_functions(1, [](const BoolFun& a) {
      return enumerate_functions(1, [&](const BoolFun& b) {
        if (a.euler() == b.euler()) {
          RewriteTrace t = equivalence_witness(a, b);
          return verify_trace(t, b).ok;
        }
        try {
          equivalence_witness(a, b);
          return false;
        } catch (const DomainError&) {
          return true;
        }
      });
    });
  });

  item("golden monotone function: lattice values and end-to-end probability", [] {
    BoolFun f = parse_function(kMonotoneSafeK3);
    if (f.euler() != 0) return false;
    BigCoeffReport r = verify_big_coeff(f);
    if (!r.ok || r.mobius_cnf != 0) return false;
    MobiusLattice lat = clause_lattice(f.minimized_cnf());
    if (lat.size() != 9) return false;
    TidDatabase db = parse_db(kSmallDbK3);
    Circuit c = compile_query(f, db);
    if (!check_decomposable(c) || !check_deterministic(c, DeterminismMode::kSemantic))
      return false;
    return probability_unchecked(c, db) == oracle_pqe(f, db);
  });

  item("golden matching-free function: zero euler, no matchings, still compiles", [] {
    BoolFun f = parse_function(kNoMatchingK4);
    if (f.euler() != 0) return false;
    if (induced_perfect_matching(f, MatchSide::kColored)) return false;
    if (induced_perfect_matching(f, MatchSide::kUncolored)) return false;
    TidDatabase db = parse_db(kSmallDbK4);
    Circuit c = compile_query(f, db);
    if (!check_decomposable(c) || !check_deterministic(c, DeterminismMode::kSemantic))
      return false;
    return probability_unchecked(c, db) == oracle_pqe(f, db);
  });

  out << (all_ok ? "selftest passed" : "selftest FAILED") << "\n";
  return all_ok;
}

}  // namespace eulerdd::cli
