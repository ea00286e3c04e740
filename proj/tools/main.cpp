#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "eulerdd/cli.hpp"

namespace {

using eulerdd::cli::Invocation;

void add_common_flags(CLI::App* cmd, Invocation& inv) {
  cmd->add_option("-o,--output", inv.out_path, "Write the result to this file instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Analysis and compilation toolkit for Boolean-function queries over "
      "tuple-independent databases: Euler-characteristic analysis, rewrite "
      "traces, fragmentations, and deterministic decomposable circuits with "
      "exact rational probabilities."};
  app.require_subcommand(1);

  Invocation inv;

  auto* analyze = app.add_subcommand("analyze", "Degeneracy, monotonicity, euler "
                                                "characteristic, lattice values and verdict");
  analyze->add_option("function", inv.files, "function file (.bf)")->required();
  analyze->add_flag("--dot", inv.dot, "Also print the clause lattice as DOT");

  auto* classify = app.add_subcommand("classify", "Hardness classification of the query");
  classify->add_option("function", inv.files)->required();
  classify->add_flag("--dot", inv.dot, "Also print the colored valuation graph as DOT");

  auto* fragment = app.add_subcommand("fragment", "Template plus degenerate leaves equivalent "
                                                  "to the function");
  fragment->add_option("function", inv.files)->required();
  add_common_flags(fragment, inv);

  auto* reduce = app.add_subcommand("reduce", "Rewrite trace from the function to the "
                                              "always-false function");
  reduce->add_option("function", inv.files)->required();
  add_common_flags(reduce, inv);

  auto* witness = app.add_subcommand("witness", "Rewrite trace between two functions of equal "
                                                "euler characteristic");
  witness->add_option("--from", inv.from_path, "start function (.bf)")->required();
  witness->add_option("--to", inv.to_path, "end function (.bf)")->required();
  add_common_flags(witness, inv);

  auto* verify = app.add_subcommand("verify-trace", "Replay a trace between two functions");
  verify->add_option("trace", inv.files, "trace file (.trace)")->required();
  verify->add_option("--from", inv.from_path, "start function (.bf)")->required();
  verify->add_option("--to", inv.to_path, "end function (.bf)")->required();

  auto* compile = app.add_subcommand("compile", "Compile the query's lineage to a "
                                                "deterministic decomposable circuit (.ddc)");
  compile->add_option("inputs", inv.files, "function file (.bf) and database file (.tid)")
      ->expected(2);
  add_common_flags(compile, inv);

  auto* prob = app.add_subcommand("prob", "Exact probability of a circuit on a database");
  prob->add_option("inputs", inv.files, "circuit file (.ddc) and database file (.tid)")
      ->expected(2);
  prob->add_flag("--unchecked", inv.unchecked,
                 "Skip the decomposability/determinism checks before evaluating");

  auto* oracle = app.add_subcommand("oracle", "Brute-force probability by summing all worlds");
  oracle->add_option("inputs", inv.files, "function file (.bf) and database file (.tid)")
      ->expected(2);
  oracle->add_option("--max-facts", inv.max_facts, "Enumeration guard (default 30)");
  oracle->add_option("--jobs", inv.jobs, "Worker threads for the world sum");

  auto* conjecture = app.add_subcommand("conjecture", "Sweep monotone euler-zero functions for "
                                                      "valuation-graph matchings");
  conjecture->add_option("--k", inv.k, "variable set is {0..k}")->required();
  conjecture->add_option("--jobs", inv.jobs, "Worker threads for the sweep");

  auto* extrema = app.add_subcommand("extrema", "Signed extrema of the euler characteristic "
                                                "over monotone functions");
  extrema->add_option("--k", inv.k)->required();

  auto* count = app.add_subcommand("count-euler-zero", "Number of functions with euler "
                                                       "characteristic zero");
  count->add_option("--k", inv.k)->required();
  count->add_flag("--check", inv.check, "Also enumerate and compare (k <= 3)");

  app.add_subcommand("selftest", "Run the built-in exhaustive smoke suite");

  CLI11_PARSE(app, argc, argv);

  inv.command = app.get_subcommands().front()->get_name();
  return eulerdd::cli::run(inv, std::cout, std::cerr);
}
