#pragma once

// Exact, finitely supported probability distributions on finite subsets of N
// (equivalently strictly increasing tuples), total variation, pushforward
// under the deletions alpha_i, and laws of random walks on N.

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "facial/setmodel.hpp"

namespace facial {

using Rational = mpq_class;

// "num/den", always with a denominator.
std::string to_string(const Rational& q);
Rational parse_rational(std::string_view text);

class Dist {
 public:
  using Atoms = std::map<CanonSet, Rational>;

  // Masses must be positive and sum to exactly one.
  explicit Dist(Atoms atoms);
  static Dist point(CanonSet e);
  static Dist uniform(const std::vector<CanonSet>& support);

  const Atoms& atoms() const { return atoms_; }
  std::size_t support_size() const { return atoms_.size(); }
  Rational mass(const CanonSet& e) const;
  Rational probability(const std::function<bool(const CanonSet&)>& event) const;

  friend bool operator==(const Dist&, const Dist&) = default;

 private:
  Atoms atoms_;
};

// Step law of a walk on N: positive masses on positive integers, summing to one.
class BaseStep {
 public:
  explicit BaseStep(std::map<Index, Rational> atoms);
  static BaseStep uniform(Index lo, Index hi);

  const std::map<Index, Rational>& atoms() const { return atoms_; }
  Index max_support() const { return atoms_.rbegin()->first; }
  // nu({1, ..., y}).
  Rational cdf(Index y) const;

 private:
  std::map<Index, Rational> atoms_;
};

// Accepts `uniform:a..b`, `point:x`, or `x1:q1,x2:q2,...`.
BaseStep parse_base_step(std::string_view text);
std::string to_string(const BaseStep& nu);

// Half the l1 distance.
Rational tv(const Dist& p, const Dist& q);

// Pushforward under alpha_i; every atom must have at least i elements.
Dist push_alpha(Index i, const Dist& p);

// Refuses supports beyond this many atoms.
inline constexpr std::size_t kMaxWalkAtoms = 10'000'000;

// Exact law of (y_1, ..., y_k), y_i = x_1 + ... + x_i with x_j IID ~ nu.
Dist walk_measure(const BaseStep& nu, Index k);

// Law of the partial products x_1, x_1 * x_2, ... for independent, not
// necessarily identical steps. The operation must satisfy x * y > x on the
// supports involved, otherwise the tuples are not increasing.
Dist partial_product_law(const std::vector<BaseStep>& steps,
                         const std::function<Index(Index, Index)>& op);

struct NoRandomWalkReport {
  Index k = 0;
  Index M = 0;                 // min{y : nu([1, y]) > 1/2}
  Rational nu_k_A;             // A = {y_1 <= M} under nu_k
  Rational nu_k1_B;            // B = {y_2 <= M} = alpha_1^{-1} A under nu_{k+1}
  Rational nu_k1_B1;           // B1 = {y_1 <= M - 1}
  Rational nu_k1_B2;           // B2 = {y_2 - y_1 <= M - 1}
  Rational independence_bound; // nu([1, M - 1])^2 >= nu_{k+1}(B)
  Rational tv_value;           // tv(alpha_1 nu_{k+1}, nu_k)
  Rational event_gap;          // |nu_{k+1}(B) - nu_k(A)|
  bool chain_holds = false;    // every inequality of the bound chain holds
  bool passes = false;         // tv_value > 1/4
};

NoRandomWalkReport no_random_walk_check(const BaseStep& nu, Index k);

// Convex combination; the weights must be positive and sum to one.
Dist mixture(const std::vector<std::pair<Rational, Dist>>& parts);

// One line per atom, `<set> <num>/<den>`, in key order.
std::string serialize(const Dist& p);
Dist parse_dist(std::string_view text);

}  // namespace facial
