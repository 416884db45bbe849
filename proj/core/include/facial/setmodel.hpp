#pragma once

// Finite subsets of N = {1, 2, ...} as a model of the facial monoid. A flat
// normal form s_{i_1} ... s_{i_n} (i_1 < ... < i_n) is the set {i_1, ..., i_n};
// left multiplication by s_i is sigma_i, "fill the i-th hole".

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "facial/word.hpp"

namespace facial {

// Strictly increasing positive integers; possibly empty.
class CanonSet {
 public:
  CanonSet() = default;
  CanonSet(std::initializer_list<Index> elements);
  explicit CanonSet(std::vector<Index> elements);

  // Sorts and deduplicates instead of rejecting unsorted input.
  static CanonSet from_unsorted(std::vector<Index> elements);

  std::span<const Index> elements() const { return elements_; }
  const std::vector<Index>& vec() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  Index operator[](std::size_t pos) const { return elements_[pos]; }
  Index max() const;  // requires !empty()
  bool contains(Index x) const;

  friend bool operator==(const CanonSet&, const CanonSet&) = default;
  friend auto operator<=>(const CanonSet&, const CanonSet&) = default;

 private:
  std::vector<Index> elements_;
};

bool is_pin_headed(const CanonSet& e);

// A non-empty set E with max(E) - 1 not in E.
class PinSet {
 public:
  explicit PinSet(CanonSet e);
  const CanonSet& set() const { return set_; }
  friend bool operator==(const PinSet&, const PinSet&) = default;

 private:
  CanonSet set_;
};

// F together with the i-th smallest element of N \ F.
CanonSet sigma(Index i, const CanonSet& f);

// E without its i-th smallest element; requires |E| >= i.
CanonSet alpha(Index i, const CanonSet& e);

// [1, max E] \ E.
CanonSet pin_to_fin(const PinSet& e);

// Inverse of pin_to_fin: {} -> {1}, F -> [1, max F + 1] \ F.
PinSet fin_to_pin(const CanonSet& f);

CanonSet word_to_set(const Word& w);
Word set_to_word(const CanonSet& f);

// `{a,b,c}`; `{}` is the empty set. Whitespace is ignored.
CanonSet parse_set(std::string_view text);
std::string to_string(const CanonSet& f);

// Every subset of [1..n], ordered by their bitmask.
std::vector<CanonSet> all_subsets(Index n);

}  // namespace facial
