#pragma once

// Finite search for deletion-almost-invariant distributions: over
// distributions mu supported on a family of finite sets with at least k
// elements, minimise
//
//   defect(mu) = max_{1 <= i <= k} tv(alpha_i mu, mu).
//
// solve_lp returns the exact optimum; solve_subgradient is a float
// alternative. Both results carry a certificate recomputed with tv().

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "facial/measures.hpp"

namespace facial {

class Universe {
 public:
  // Every E subset of [1..N] with |E| >= k.
  Universe(Index N, Index k);
  // A caller-chosen family; each set needs at least k elements and max <= N.
  Universe(Index N, Index k, std::vector<CanonSet> sets);

  Index N() const { return N_; }
  Index k() const { return k_; }
  const std::vector<CanonSet>& sets() const { return sets_; }

 private:
  Index N_;
  Index k_;
  std::vector<CanonSet> sets_;
};

// Exact worst deletion defect over i = 1..k.
Rational deletion_defect(const Dist& mu, Index k);
double deletion_defect(const Universe& u, const std::vector<double>& weights);

enum class SearchMethod { lp, subgradient };
std::string to_string(SearchMethod m);

struct SearchResult {
  Dist mu;
  SearchMethod method = SearchMethod::lp;
  // Solver's own value: the exact LP optimum, or the float objective of the
  // best subgradient iterate.
  double epsilon = 0;
  std::optional<Rational> exact_objective;
  Rational certificate;  // deletion_defect(mu, k)
  std::size_t iterations = 0;  // simplex pivots or subgradient steps
  std::vector<double> best_history;  // best-so-far objective per step (subgradient)
};

inline constexpr std::size_t kMaxLpSets = 5000;

SearchResult solve_lp(const Universe& u);

struct SubgradientOptions {
  std::size_t iterations = 20000;
  std::uint64_t seed = 1;
  double initial_step = 0.02;
};

SearchResult solve_subgradient(const Universe& u, const SubgradientOptions& options = {});

struct CurvePoint {
  Index N = 0;
  Index k = 0;
  Rational epsilon;
  std::size_t support_size = 0;
};

// epsilon*(N) for N in [N_min, N_max]; throws InvariantViolation if the
// sequence ever increases.
std::vector<CurvePoint> epsilon_curve(Index k, Index N_min, Index N_max);

struct GeneratorDefect {
  Index generator = 0;
  Rational left_defect;   // |A \ s_i A| / |A|
  Rational right_defect;  // |s_i A \ A| / |A|
};

struct FolnerReport {
  std::vector<GeneratorDefect> defects;
  Rational klawe_max;  // max over i in {1, 2} of |A \ s_i A| / |A|
  bool klawe_pass = false;  // klawe_max >= 1/5
};

// A is a finite, duplicate-free family of elements of S given as flat
// normal forms; s_i A is computed with sigma(i, .). Generators 1 and 2 are
// always evaluated for the Klawe bound.
FolnerReport folner_defect(const std::vector<CanonSet>& A, const std::vector<Index>& generators);

}  // namespace facial
