#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace eulerdd {

/// Fixed-size bitset with the handful of bulk operations the library needs.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }

  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  void set(std::size_t i, bool v = true) {
    uint64_t m = uint64_t{1} << (i & 63);
    if (v)
      words_[i >> 6] |= m;
    else
      words_[i >> 6] &= ~m;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (uint64_t w : words_) c += std::popcount(w);
    return c;
  }

  bool any() const {
    for (uint64_t w : words_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }

  bool intersects(const Bitset& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }

  Bitset& operator&=(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  Bitset& operator|=(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  Bitset& operator^=(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
    return *this;
  }
  void flip_all() {
    for (auto& w : words_) w = ~w;
    trim();
  }

  friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
  friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
  friend Bitset operator^(Bitset a, const Bitset& b) { return a ^= b; }

  bool operator==(const Bitset& o) const = default;

  const std::vector<uint64_t>& words() const { return words_; }
  std::vector<uint64_t>& words() { return words_; }

 private:
  // Bits past n_ stay zero so count() and == are exact.
  void trim() {
    if (n_ & 63) words_.back() &= (uint64_t{1} << (n_ & 63)) - 1;
  }

  std::size_t n_ = 0;
  std::vector<uint64_t> words_;
};

}  // namespace eulerdd
