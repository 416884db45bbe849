#pragma once

// Deletion maps on finite windows of sequence space X^L, X = {0, ..., |X|-1}:
//
//   [s_i w]_n = w_n for n < i,  w_{n+1} otherwise,
//
// mapping X^L to X^{L-1}. Measures on windows are exact rationals.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "facial/measures.hpp"

namespace facial {

class Window {
 public:
  Window(Index alphabet_size, std::vector<Index> entries);

  Index alphabet_size() const { return alphabet_size_; }
  Index length() const { return static_cast<Index>(entries_.size()); }
  const std::vector<Index>& entries() const { return entries_; }

  auto operator<=>(const Window&) const = default;

 private:
  Index alphabet_size_;
  std::vector<Index> entries_;
};

// Comma-separated symbols; "" or "e" is the empty window.
Window parse_window(std::string_view text, Index alphabet_size);
std::string to_string(const Window& w);

// Every window in X^L, lexicographic; |X|^L is capped at 10^6.
std::vector<Window> all_windows(Index alphabet_size, Index L);

Window delete_coord(Index i, const Window& w);

struct FaceFailure {
  Index i = 0;
  Index j = 0;
  Window w;
  Window lhs;  // s_j(s_i(w))
  Window rhs;  // s_i(s_{j+1}(w))
};

struct FaceReport {
  Index alphabet_size = 0;
  Index L = 0;
  Index index_bound = 0;
  std::size_t instances = 0;
  std::size_t failures = 0;
  std::vector<FaceFailure> first_failures;  // at most 10
  bool passes() const { return failures == 0; }
};

// s_j s_i = s_i s_{j+1} as maps X^L -> X^{L-2}, for 1 <= i <= j <= index_bound.
FaceReport verify_face_relations_windows(Index alphabet_size, Index L, Index index_bound);

class CylinderMeasure {
 public:
  // eta[x] is the mass of symbol x; zeros are allowed.
  CylinderMeasure(std::vector<Rational> eta, Index L);

  Index alphabet_size() const { return static_cast<Index>(eta_.size()); }
  Index length() const { return L_; }
  const std::vector<Rational>& eta() const { return eta_; }
  // eta^{|w|}(w) for a window of any length.
  Rational probability(const Window& w) const;

 private:
  std::vector<Rational> eta_;
  Index L_;
};

// "1/2,1/3,1/6".
CylinderMeasure parse_cylinder(std::string_view eta, Index L);

// A measure on X^L given by its atoms.
using WindowMeasure = std::map<Window, Rational>;

WindowMeasure product_window_measure(const CylinderMeasure& cm);

struct InvarianceReport {
  Rational lhs;  // mu(E)
  Rational rhs;  // mu(s_i^{-1} E)
  bool equal = false;
};

// lhs under eta^{L-1}, rhs under eta^L.
InvarianceReport product_invariance_check(const CylinderMeasure& cm, Index i, const std::vector<Window>& event);

// lhs from the marginal of rho on the first L-1 coordinates.
InvarianceReport window_invariance_check(const WindowMeasure& rho, Index i, const std::vector<Window>& event);

struct NegativeControl {
  std::string description;
  WindowMeasure rho;
  Index i = 0;
  std::vector<Window> event;
  InvarianceReport report;
};

// Searches measures uniform on {w : w_a = w_b} over singleton events and
// i >= 2, returning the first violation of invariance.
NegativeControl find_negative_control(Index alphabet_size, Index L);

}  // namespace facial
