#include "facial/word.hpp"

#include <algorithm>
#include <charconv>
#include <string>

#include "facial/error.hpp"

namespace facial {

namespace {

void check_letters(const std::vector<Index>& letters) {
  for (Index x : letters) {
    if (x < 1) {
      throw ValidationError("generator index must be positive, got " +
                            std::to_string(x));
    }
  }
}

}  // namespace

Word::Word(std::initializer_list<Index> letters) : letters_(letters) {
  check_letters(letters_);
}

Word::Word(std::vector<Index> letters) : letters_(std::move(letters)) {
  check_letters(letters_);
}

Index Word::max_letter() const {
  return letters_.empty() ? 0 : *std::max_element(letters_.begin(), letters_.end());
}

Word Word::operator+(const Word& rhs) const {
  std::vector<Index> out = letters_;
  out.insert(out.end(), rhs.letters_.begin(), rhs.letters_.end());
  Word w;
  w.letters_ = std::move(out);
  return w;
}

Word parse_word(std::string_view text) {
  std::vector<Index> letters;
  std::size_t pos = 0;
  auto is_sep = [](char c) { return c == ' ' || c == '\t' || c == '.' || c == '\n' || c == ','; };
  while (pos < text.size()) {
    while (pos < text.size() && is_sep(text[pos])) ++pos;
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && !is_sep(text[end])) ++end;
    std::string_view token = text.substr(pos, end - pos);
    if (token == "e" && letters.empty() && end >= text.size()) {
      pos = end;
      continue;
    }
    if (!token.empty() && (token.front() == 's' || token.front() == 'g')) {
      token.remove_prefix(1);
    }
    Index value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
      throw ValidationError("malformed word letter '" + std::string(text.substr(pos, end - pos)) + "'");
    }
    letters.push_back(value);
    pos = end;
  }
  return Word(std::move(letters));
}

namespace {

std::string join(const Word& w, char sep) {
  if (w.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(w[i]);
  }
  return out;
}

}  // namespace

std::string to_string(const Word& w) { return join(w, ' '); }
std::string to_dotted(const Word& w) { return join(w, '.'); }

}  // namespace facial
