#pragma once

// The Thompson monoid F+ = < g_i : g_j g_i = g_i g_{j+1}, i < j >, its
// quotient onto S, and its embedding into the right semidirect product S x| T
// where T = Z[N] carries the right S-action
//
//   (t^{s_i})_n = t_n (n <= i),  0 (n = i + 1),  t_{n-1} (n >= i + 2).

#include <string>
#include <string_view>
#include <vector>

#include "facial/setmodel.hpp"
#include "facial/word.hpp"

namespace facial {

// g_1^{p_1} ... g_d^{p_d} with p_d != 0, or empty.
class FPlusNormalForm {
 public:
  FPlusNormalForm() = default;
  explicit FPlusNormalForm(std::vector<Index> exponents);

  const std::vector<Index>& exponents() const { return exponents_; }
  bool empty() const { return exponents_.empty(); }
  // The g-word g_1 .. g_1 g_2 .. g_2 ...
  Word to_word() const;

  friend bool operator==(const FPlusNormalForm&, const FPlusNormalForm&) = default;
  friend auto operator<=>(const FPlusNormalForm&, const FPlusNormalForm&) = default;

 private:
  std::vector<Index> exponents_;
};

// Finitely supported integer vector (t_1, t_2, ...); trailing zeros trimmed.
class AbelianVector {
 public:
  AbelianVector() = default;
  AbelianVector(std::initializer_list<Index> coords);
  explicit AbelianVector(std::vector<Index> coords);

  Index operator[](Index n) const;  // 1-based, zero beyond the support
  const std::vector<Index>& coords() const { return coords_; }
  bool is_zero() const { return coords_.empty(); }

  AbelianVector operator+(const AbelianVector& rhs) const;

  friend bool operator==(const AbelianVector&, const AbelianVector&) = default;

 private:
  void trim();
  std::vector<Index> coords_;
};

struct SemidirectElem {
  CanonSet s_part;
  AbelianVector t_part;
  friend bool operator==(const SemidirectElem&, const SemidirectElem&) = default;
};

FPlusNormalForm fplus_normalize(const Word& g_word);
FPlusNormalForm fplus_multiply(const FPlusNormalForm& a, const FPlusNormalForm& b);

// Image in S, as the flat normal form of the same letters.
CanonSet quotient_to_S(const FPlusNormalForm& g);

AbelianVector right_action(const AbelianVector& t, Index i);
// Letter by letter, left to right: t^{s s'} = (t^s)^{s'}.
AbelianVector right_action(const AbelianVector& t, const Word& s);

// (s, t)(s', t') = (s s', t^{s'} + t').
SemidirectElem semidirect_mul(const SemidirectElem& x, const SemidirectElem& y);

// g -> (image of g in S, exponent vector of g).
SemidirectElem embed_fplus(const FPlusNormalForm& g);

// `g1^p1.g2^p2...` listing non-zero exponents; `e` for the identity.
std::string to_string(const FPlusNormalForm& g);
FPlusNormalForm parse_fplus(std::string_view text);
// `(t1,t2,...)` with trailing zeros omitted.
std::string to_string(const AbelianVector& t);
AbelianVector parse_abelian(std::string_view text);
std::string to_string(const SemidirectElem& x);

}  // namespace facial
