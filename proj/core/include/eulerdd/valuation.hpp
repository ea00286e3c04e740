#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "eulerdd/errors.hpp"

namespace eulerdd {

/// A valuation of the variable set V = {0,...,k}: the subset of variables set
/// to true, stored as a bitmask. k never exceeds BoolFun::kMaxK, so 32 bits
/// are plenty.
class Valuation {
 public:
  constexpr Valuation() = default;
  constexpr explicit Valuation(uint32_t bits) : bits_(bits) {}

  static constexpr Valuation empty() { return Valuation(); }

  constexpr uint32_t bits() const { return bits_; }
  int size() const { return std::popcount(bits_); }
  bool even_size() const { return (size() & 1) == 0; }
  /// +1 for even |v|, -1 for odd |v|.
  int sign() const { return even_size() ? 1 : -1; }

  bool contains(int l) const { return (bits_ >> l) & 1; }
  constexpr Valuation flipped(int l) const { return Valuation(bits_ ^ (uint32_t{1} << l)); }
  constexpr Valuation with(int l) const { return Valuation(bits_ | (uint32_t{1} << l)); }
  constexpr Valuation without(int l) const { return Valuation(bits_ & ~(uint32_t{1} << l)); }

  bool subset_of(Valuation o) const { return (bits_ & ~o.bits_) == 0; }
  bool adjacent_to(Valuation o) const { return std::popcount(bits_ ^ o.bits_) == 1; }

  auto operator<=>(const Valuation&) const = default;

  /// Space-separated ascending indices; "." for the empty valuation.
  std::string to_string() const;

 private:
  uint32_t bits_ = 0;
};

/// Membership flip of Definition-level v^(l); l must be a variable of V.
Valuation flip(Valuation v, int l, int k);

/// Parses "." or space-separated strictly ascending indices <= k.
Valuation parse_valuation(std::string_view text, int k);

inline std::string Valuation::to_string() const {
  if (bits_ == 0) return ".";
  std::string out;
  for (int l = 0; l < 32; ++l) {
    if (contains(l)) {
      if (!out.empty()) out += ' ';
      out += std::to_string(l);
    }
  }
  return out;
}

inline Valuation flip(Valuation v, int l, int k) {
  if (l < 0 || l > k)
    throw DomainError("variable " + std::to_string(l) + " is out of range for k=" +
                      std::to_string(k));
  return v.flipped(l);
}

inline Valuation parse_valuation(std::string_view text, int k) {
  std::string s(text);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.pop_back();
  std::size_t start = s.find_first_not_of(" \t");
  if (start == std::string::npos) throw InputError("empty valuation");
  s = s.substr(start);
  if (s == ".") return Valuation::empty();
  uint32_t bits = 0;
  int prev = -1;
  std::size_t pos = 0;
  while (pos < s.size()) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    if (pos >= s.size()) break;
    std::size_t end = pos;
    while (end < s.size() && s[end] >= '0' && s[end] <= '9') ++end;
    if (end == pos) throw InputError("bad valuation token in '" + s + "'");
    int l = std::stoi(s.substr(pos, end - pos));
    if (l > k)
      throw InputError("variable " + std::to_string(l) + " exceeds k=" + std::to_string(k));
    if (l <= prev) throw InputError("valuation indices must be strictly ascending in '" + s + "'");
    bits |= uint32_t{1} << l;
    prev = l;
    pos = end;
  }
  return Valuation(bits);
}

}  // namespace eulerdd
