#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "eulerdd/errors.hpp"

namespace eulerdd {

/// Exact rational number. All probability arithmetic in this library is
/// exact; floating point is never used.
using Rat = mpq_class;

/// Parses "p/q" or a finite decimal ("0.25" becomes 1/4 exactly).
Rat parse_rational(std::string_view text);

/// Canonical text form: "p/q", or just "p" when the denominator is 1.
std::string to_string(const Rat& r);

inline Rat parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw InputError("empty rational literal");
  auto slash = s.find('/');
  auto dot = s.find('.');
  if (slash != std::string::npos && dot != std::string::npos)
    throw InputError("rational literal mixes '/' and '.': " + s);
  try {
    if (dot != std::string::npos) {
      std::string intpart = s.substr(0, dot);
      std::string fracpart = s.substr(dot + 1);
      if (fracpart.empty() || fracpart.find_first_not_of("0123456789") != std::string::npos)
        throw InputError("bad decimal literal: " + s);
      bool neg = false;
      if (!intpart.empty() && (intpart[0] == '+' || intpart[0] == '-')) {
        neg = intpart[0] == '-';
        intpart = intpart.substr(1);
      }
      if (intpart.empty()) intpart = "0";
      if (intpart.find_first_not_of("0123456789") != std::string::npos)
        throw InputError("bad decimal literal: " + s);
      mpz_class num(intpart);
      mpz_class den(1);
      for (char c : fracpart) {
        num = num * 10 + (c - '0');
        den *= 10;
      }
      Rat r(num, den);
      r.canonicalize();
      if (neg) r = -r;
      return r;
    }
    Rat r(s);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw InputError("bad rational literal: " + s);
  }
}

inline std::string to_string(const Rat& r) { return r.get_str(); }

}  // namespace eulerdd
