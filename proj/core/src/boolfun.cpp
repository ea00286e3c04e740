#include "eulerdd/boolfun.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>

#include "eulerdd/errors.hpp"

namespace eulerdd {

namespace {

// Bit j set iff popcount(j) is even; used to sum (-1)^|v| a word at a time.
constexpr uint64_t even_parity_mask() {
  uint64_t m = 0;
  for (int j = 0; j < 64; ++j)
    if ((std::popcount(static_cast<unsigned>(j)) & 1) == 0) m |= uint64_t{1} << j;
  return m;
}
constexpr uint64_t kEvenParity = even_parity_mask();

void require_same_k(const BoolFun& a, const BoolFun& b) {
  if (a.k() != b.k())
    throw DomainError("arity mismatch: operands have k=" + std::to_string(a.k()) +
                      " and k=" + std::to_string(b.k()));
}

}  // namespace

BoolFun::BoolFun(int k) : k_(k) {
  if (k < 1 || k > kMaxK)
    throw DomainError("k must be between 1 and " + std::to_string(kMaxK) + ", got " +
                      std::to_string(k));
  table_ = Bitset(uint32_t{1} << (k + 1));
}

BoolFun BoolFun::top(int k) {
  BoolFun f(k);
  f.table_.flip_all();
  return f;
}

BoolFun BoolFun::from_sat(int k, const std::vector<Valuation>& sat) {
  BoolFun f(k);
  for (Valuation v : sat) {
    if (v.bits() >> (k + 1))
      throw DomainError("valuation {" + v.to_string() + "} uses a variable above k=" +
                        std::to_string(k));
    f.set(v, true);
  }
  return f;
}

BoolFun BoolFun::from_table(int k, Bitset table) {
  BoolFun f(k);
  if (table.size() != f.valuation_count())
    throw DomainError("truth table has the wrong length for k=" + std::to_string(k));
  f.table_ = std::move(table);
  return f;
}

BoolFun BoolFun::adjacent_pair(int k, Valuation v, int l) {
  BoolFun f(k);
  f.set(v, true);
  f.set(flip(v, l, k), true);
  return f;
}

std::vector<Valuation> BoolFun::sat_list() const {
  std::vector<Valuation> out;
  for (uint32_t v = 0; v < valuation_count(); ++v)
    if (table_.test(v)) out.push_back(Valuation(v));
  return out;
}

long long BoolFun::euler() const {
  long long e = 0;
  const auto& words = table_.words();
  for (std::size_t w = 0; w < words.size(); ++w) {
    if (!words[w]) continue;
    long long evens = std::popcount(words[w] & kEvenParity);
    long long odds = std::popcount(words[w] & ~kEvenParity);
    // Word w covers indices w*64..w*64+63; their parity is the bit parity of
    // the base (low 6 bits zero) xored with the in-word parity.
    bool base_odd = std::popcount(static_cast<uint64_t>(w) << 6) & 1;
    e += base_odd ? (odds - evens) : (evens - odds);
  }
  return e;
}

bool BoolFun::depends_on(int l) const {
  const uint32_t bit = uint32_t{1} << l;
  for (uint32_t v = 0; v < valuation_count(); ++v)
    if (table_.test(v) != table_.test(v ^ bit)) return true;
  return false;
}

std::vector<int> BoolFun::dependencies() const {
  std::vector<int> deps;
  for (int l = 0; l <= k_; ++l)
    if (depends_on(l)) deps.push_back(l);
  return deps;
}

bool BoolFun::is_degenerate() const {
  for (int l = 0; l <= k_; ++l)
    if (!depends_on(l)) return true;
  return false;
}

bool BoolFun::is_monotone() const {
  // Check every covering pair (v, v + {l}).
  for (uint32_t v = 0; v < valuation_count(); ++v) {
    if (!table_.test(v)) continue;
    for (int l = 0; l <= k_; ++l) {
      uint32_t up = v | (uint32_t{1} << l);
      if (up != v && !table_.test(up)) return false;
    }
  }
  return true;
}

std::vector<Valuation> BoolFun::minimized_dnf() const {
  if (!is_monotone()) throw DomainError("minimized DNF is only defined for monotone functions");
  if (is_bottom()) throw DomainError("the always-false function has no DNF clauses");
  std::vector<Valuation> clauses;
  for (uint32_t v = 0; v < valuation_count(); ++v) {
    if (!table_.test(v)) continue;
    bool minimal = true;
    for (int l = 0; l <= k_ && minimal; ++l)
      if ((v >> l) & 1)
        if (table_.test(v & ~(uint32_t{1} << l))) minimal = false;
    if (minimal) clauses.push_back(Valuation(v));
  }
  std::sort(clauses.begin(), clauses.end(), [](Valuation a, Valuation b) {
    return std::pair(a.size(), a.bits()) < std::pair(b.size(), b.bits());
  });
  return clauses;
}

std::vector<Valuation> BoolFun::minimized_cnf() const {
  if (!is_monotone()) throw DomainError("minimized CNF is only defined for monotone functions");
  if (*this == top(k_)) throw DomainError("the always-true function has no CNF clauses");
  if (is_bottom()) return {Valuation::empty()};  // a single empty disjunction

  // Minimal transversals of the DNF clause hypergraph, built clause by
  // clause with minimization after each extension step.
  std::vector<Valuation> dnf = minimized_dnf();
  std::vector<uint32_t> trans = {0};
  for (Valuation clause : dnf) {
    std::vector<uint32_t> next;
    for (uint32_t t : trans) {
      if (t & clause.bits()) {
        next.push_back(t);
        continue;
      }
      for (int l = 0; l <= k_; ++l)
        if (clause.contains(l)) next.push_back(t | (uint32_t{1} << l));
    }
    std::sort(next.begin(), next.end(), [](uint32_t a, uint32_t b) {
      return std::pair(std::popcount(a), a) < std::pair(std::popcount(b), b);
    });
    std::vector<uint32_t> minimal;
    for (uint32_t c : next) {
      bool dominated = false;
      for (uint32_t m : minimal)
        if ((m & ~c) == 0) {
          dominated = true;
          break;
        }
      if (!dominated) minimal.push_back(c);
    }
    trans = std::move(minimal);
  }

  std::vector<Valuation> cnf;
  cnf.reserve(trans.size());
  for (uint32_t t : trans) cnf.push_back(Valuation(t));
  std::sort(cnf.begin(), cnf.end(), [](Valuation a, Valuation b) {
    return std::pair(a.size(), a.bits()) < std::pair(b.size(), b.bits());
  });

  // The conjunction of the clauses must reproduce the truth table exactly.
  for (uint32_t v = 0; v < valuation_count(); ++v) {
    bool val = true;
    for (Valuation c : cnf)
      if ((c.bits() & v) == 0) {
        val = false;
        break;
      }
    if (val != table_.test(v))
      throw Error("internal error: CNF transversal does not match the truth table");
  }
  return cnf;
}

bool BoolFun::is_disjoint(const BoolFun& o) const {
  require_same_k(*this, o);
  return !table_.intersects(o.table_);
}

BoolFun bf_not(const BoolFun& f) {
  Bitset t = f.table();
  t.flip_all();
  return BoolFun::from_table(f.k(), std::move(t));
}

BoolFun bf_and(const BoolFun& a, const BoolFun& b) {
  require_same_k(a, b);
  return BoolFun::from_table(a.k(), a.table() & b.table());
}

BoolFun bf_or(const BoolFun& a, const BoolFun& b) {
  require_same_k(a, b);
  return BoolFun::from_table(a.k(), a.table() | b.table());
}

namespace {

// Recursive-descent parser for formula mode. Reports positions as
// line/column pairs, column starting at 1.
class FormulaParser {
 public:
  FormulaParser(std::string_view text, int k, int line, int col_offset)
      : text_(text), k_(k), line_(line), col_offset_(col_offset) {}

  BoolFun parse() {
    BoolFun f = parse_or();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

 private:
  BoolFun parse_or() {
    BoolFun f = parse_and();
    while (peek() == '|') {
      ++pos_;
      f = bf_or(f, parse_and());
    }
    return f;
  }

  BoolFun parse_and() {
    BoolFun f = parse_not();
    while (peek() == '&') {
      ++pos_;
      f = bf_and(f, parse_not());
    }
    return f;
  }

  BoolFun parse_not() {
    skip_ws();
    if (peek() == '!') {
      ++pos_;
      return bf_not(parse_not());
    }
    return parse_atom();
  }

  BoolFun parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of formula");
    if (text_[pos_] == '(') {
      ++pos_;
      BoolFun f = parse_or();
      skip_ws();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return f;
    }
    if (!std::isdigit(static_cast<unsigned char>(text_[pos_]))) fail("expected a variable index");
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    int var = std::stoi(std::string(text_.substr(start, pos_ - start)));
    if (var > k_) {
      pos_ = start;
      fail("variable " + std::to_string(var) + " exceeds k=" + std::to_string(k_));
    }
    BoolFun f(k_);
    for (uint32_t v = 0; v < f.valuation_count(); ++v)
      if ((v >> var) & 1) f.set(Valuation(v), true);
    return f;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw InputError("formula syntax error at line " + std::to_string(line_) + ", column " +
                     std::to_string(col_offset_ + pos_ + 1) + ": " + msg);
  }

  std::string_view text_;
  int k_;
  int line_;
  int col_offset_;
  std::size_t pos_ = 0;
};

Valuation parse_valuation_line(const std::string& line, int k, int line_no) {
  try {
    return parse_valuation(line, k);
  } catch (const InputError& e) {
    throw InputError("line " + std::to_string(line_no) + ": " + e.what());
  }
}

}  // namespace

BoolFun parse_function(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;

  auto next_content_line = [&](std::string& out) {
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
  if (!next_content_line(header)) throw InputError("empty function file");
  if (header.rfind("k ", 0) != 0)
    throw InputError("line " + std::to_string(line_no) + ": expected 'k <int>'");
  int k;
  try {
    k = std::stoi(header.substr(2));
  } catch (...) {
    throw InputError("line " + std::to_string(line_no) + ": bad value for k");
  }
  if (k < 1 || k > BoolFun::kMaxK)
    throw InputError("line " + std::to_string(line_no) + ": k must be between 1 and " +
                     std::to_string(BoolFun::kMaxK));

  std::string mode;
  if (!next_content_line(mode))
    throw InputError("expected 'formula <expr>' or 'sat' after the k line");

  if (mode.rfind("formula", 0) == 0) {
    std::string expr = mode.substr(7);
    std::size_t off = line.find(expr);
    FormulaParser parser(expr, k, line_no, off == std::string::npos ? 7 : static_cast<int>(off));
    return parser.parse();
  }
  if (mode == "sat") {
    BoolFun f(k);
    std::string vline;
    while (next_content_line(vline)) {
      Valuation v = parse_valuation_line(vline, k, line_no);
      if (f(v))
        throw InputError("line " + std::to_string(line_no) + ": duplicate valuation {" +
                         v.to_string() + "}");
      f.set(v, true);
    }
    return f;
  }
  throw InputError("line " + std::to_string(line_no) + ": expected 'formula <expr>' or 'sat'");
}

std::string serialize_function(const BoolFun& f) {
  std::string out = "k " + std::to_string(f.k()) + "\nsat\n";
  for (Valuation v : f.sat_list()) {
    out += v.to_string();
    out += '\n';
  }
  return out;
}

}  // namespace eulerdd
