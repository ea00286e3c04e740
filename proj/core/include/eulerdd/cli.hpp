#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace eulerdd::cli {

/// A fully parsed command line. run() parses every referenced file before
/// any computation starts, writes reports to `out` and diagnostics to
/// `err`, and returns the process exit code: 0 on success, 1 on domain
/// errors (violated preconditions), 2 on input errors (bad files or flags).
struct Invocation {
  std::string command;
  std::vector<std::string> files;
  std::optional<std::string> out_path;   // -o
  std::optional<std::string> from_path;  // --from
  std::optional<std::string> to_path;    // --to
  std::optional<int> k;                  // --k
  bool dot = false;
  bool unchecked = false;
  bool check = false;
  int jobs = 1;
  std::size_t max_facts = 30;
};

int run(const Invocation& inv, std::ostream& out, std::ostream& err);

/// Built-in smoke suite: exhaustive checks at k <= 2 plus the golden cases.
/// Returns true iff everything passed.
bool selftest(std::ostream& out);

}  // namespace eulerdd::cli
