#include "facial/thompson.hpp"

#include <charconv>

#include "facial/error.hpp"
#include "facial/rewrite.hpp"

namespace facial {

namespace {

Index parse_index(std::string_view token, std::string_view what) {
  Index value = 0;
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
    throw ValidationError("malformed " + std::string(what) + " '" + std::string(token) + "'");
  }
  return value;
}

std::string strip(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c != ' ' && c != '\t' && c != '\n') out += c;
  }
  return out;
}

}  // namespace

FPlusNormalForm::FPlusNormalForm(std::vector<Index> exponents) : exponents_(std::move(exponents)) {
  for (Index p : exponents_) {
    if (p < 0) throw ValidationError("F+ exponents must be non-negative");
  }
  if (!exponents_.empty() && exponents_.back() == 0) {
    throw ValidationError("the last F+ exponent must be non-zero");
  }
}

Word FPlusNormalForm::to_word() const {
  std::vector<Index> letters;
  for (std::size_t n = 0; n < exponents_.size(); ++n) {
    for (Index r = 0; r < exponents_[n]; ++r) letters.push_back(static_cast<Index>(n + 1));
  }
  return Word(std::move(letters));
}

AbelianVector::AbelianVector(std::initializer_list<Index> coords) : coords_(coords) { trim(); }
AbelianVector::AbelianVector(std::vector<Index> coords) : coords_(std::move(coords)) { trim(); }

void AbelianVector::trim() {
  while (!coords_.empty() && coords_.back() == 0) coords_.pop_back();
}

Index AbelianVector::operator[](Index n) const {
  if (n < 1) throw ValidationError("abelian coordinates are indexed from 1");
  return static_cast<std::size_t>(n) <= coords_.size() ? coords_[static_cast<std::size_t>(n - 1)] : 0;
}

AbelianVector AbelianVector::operator+(const AbelianVector& rhs) const {
  std::vector<Index> out(std::max(coords_.size(), rhs.coords_.size()), 0);
  for (std::size_t p = 0; p < coords_.size(); ++p) out[p] += coords_[p];
  for (std::size_t p = 0; p < rhs.coords_.size(); ++p) out[p] += rhs.coords_[p];
  return AbelianVector(std::move(out));
}

FPlusNormalForm fplus_normalize(const Word& g_word) {
  const Word nf = normal_form(RuleSystem::fplus, g_word);
  for (std::size_t p = 0; p + 1 < nf.size(); ++p) {
    if (nf[p] > nf[p + 1]) throw InvariantViolation("F+ rewriting left a descent in " + to_string(nf));
  }
  std::vector<Index> exponents(static_cast<std::size_t>(nf.max_letter()), 0);
  for (Index x : nf.letters()) ++exponents[static_cast<std::size_t>(x - 1)];
  return FPlusNormalForm(std::move(exponents));
}

FPlusNormalForm fplus_multiply(const FPlusNormalForm& a, const FPlusNormalForm& b) {
  return fplus_normalize(a.to_word() + b.to_word());
}

CanonSet quotient_to_S(const FPlusNormalForm& g) { return word_to_set(g.to_word()); }

AbelianVector right_action(const AbelianVector& t, Index i) {
  if (i < 1) throw ValidationError("generator index must be positive");
  std::vector<Index> out = t.coords();
  if (static_cast<std::size_t>(i) < out.size()) out.insert(out.begin() + i, 0);
  return AbelianVector(std::move(out));
}

AbelianVector right_action(const AbelianVector& t, const Word& s) {
  AbelianVector out = t;
  for (Index x : s.letters()) out = right_action(out, x);
  return out;
}

SemidirectElem semidirect_mul(const SemidirectElem& x, const SemidirectElem& y) {
  const Word ys = set_to_word(y.s_part);
  return {word_to_set(set_to_word(x.s_part) + ys), right_action(x.t_part, ys) + y.t_part};
}

SemidirectElem embed_fplus(const FPlusNormalForm& g) {
  return {quotient_to_S(g), AbelianVector(g.exponents())};
}

std::string to_string(const FPlusNormalForm& g) {
  std::string out;
  for (std::size_t n = 0; n < g.exponents().size(); ++n) {
    if (g.exponents()[n] == 0) continue;
    if (!out.empty()) out += '.';
    out += "g" + std::to_string(n + 1) + "^" + std::to_string(g.exponents()[n]);
  }
  return out.empty() ? "e" : out;
}

FPlusNormalForm parse_fplus(std::string_view text) {
  const std::string compact = strip(text);
  if (compact.empty() || compact == "e") return {};
  std::vector<Index> exponents;
  std::string_view body(compact);
  while (!body.empty()) {
    const auto dot = body.find('.');
    std::string_view factor = body.substr(0, dot);
    if (factor.empty() || factor.front() != 'g') {
      throw ValidationError("malformed F+ factor '" + std::string(factor) + "', expected gI^P");
    }
    factor.remove_prefix(1);
    const auto caret = factor.find('^');
    const Index gen = parse_index(factor.substr(0, caret), "generator");
    const Index power = caret == std::string_view::npos ? 1 : parse_index(factor.substr(caret + 1), "exponent");
    if (gen < 1 || power < 0) throw ValidationError("F+ generators are positive, exponents non-negative");
    if (exponents.size() >= static_cast<std::size_t>(gen)) {
      throw ValidationError("F+ factors must have increasing generators");
    }
    exponents.resize(static_cast<std::size_t>(gen), 0);
    exponents.back() = power;
    if (dot == std::string_view::npos) break;
    body.remove_prefix(dot + 1);
  }
  while (!exponents.empty() && exponents.back() == 0) exponents.pop_back();
  return FPlusNormalForm(std::move(exponents));
}

std::string to_string(const AbelianVector& t) {
  std::string out = "(";
  for (std::size_t p = 0; p < t.coords().size(); ++p) {
    if (p) out += ',';
    out += std::to_string(t.coords()[p]);
  }
  return out + ")";
}

AbelianVector parse_abelian(std::string_view text) {
  const std::string compact = strip(text);
  if (compact.size() < 2 || compact.front() != '(' || compact.back() != ')') {
    throw ValidationError("malformed vector '" + std::string(text) + "', expected (t1,t2,...)");
  }
  std::vector<Index> coords;
  std::string_view body = std::string_view(compact).substr(1, compact.size() - 2);
  while (!body.empty()) {
    const auto comma = body.find(',');
    std::string_view token = body.substr(0, comma);
    bool negative = !token.empty() && token.front() == '-';
    if (negative) token.remove_prefix(1);
    const Index v = parse_index(token, "coordinate");
    coords.push_back(negative ? -v : v);
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return AbelianVector(std::move(coords));
}

std::string to_string(const SemidirectElem& x) {
  return "(" + to_string(x.s_part) + ", " + to_string(x.t_part) + ")";
}

}  // namespace facial
