#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace facial {

// Generator index, element of a finite set, or value of an order map.
// All of these are positive integers in the mathematics.
using Index = std::int64_t;

// A finite sequence of generator indices s_{i_1} ... s_{i_n}. The empty word
// is the identity e.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Index> letters);
  explicit Word(std::vector<Index> letters);

  std::span<const Index> letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Index operator[](std::size_t pos) const { return letters_[pos]; }
  Index max_letter() const;

  // Concatenation, not multiplication in S.
  Word operator+(const Word& rhs) const;

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;

 private:
  std::vector<Index> letters_;
};

// Accepts whitespace- or dot-separated positive integers ("2 1", "2.1").
// "e" and the empty string denote the empty word.
Word parse_word(std::string_view text);

// Space separated; the empty word prints as "e".
std::string to_string(const Word& w);
// Dot separated; used inside single-token fields such as trace logs.
std::string to_dotted(const Word& w);

}  // namespace facial
