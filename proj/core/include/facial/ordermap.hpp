#pragma once

// Order-preserving maps N -> N that are eventually translations,
//
//   f(n) = prefix[n-1]   for n <= N
//   f(n) = n + offset    for n >  N,
//
// together with the face maps s_i (surjective, offset -1), the degeneracies
// t_i (injective, offset +1), the pseudo-inverse f^-(x) = min{y : f(y) >= x},
// and the representations of S and S^op built from them.
//
// Composition convention: compose(f, g) is n -> f(g(n)), and a word
// a_1 ... a_n represents s_{a_1} o ... o s_{a_n}, so the rightmost letter acts
// first.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "facial/word.hpp"

namespace facial {

class OrderMap {
 public:
  // The identity.
  OrderMap() = default;
  // Validates monotonicity and positivity, then trims the prefix so that its
  // last entry is not already n + offset.
  OrderMap(std::vector<Index> prefix, Index offset);

  static OrderMap identity() { return {}; }

  Index operator()(Index n) const;
  const std::vector<Index>& prefix() const { return prefix_; }
  Index offset() const { return offset_; }
  // Every n > threshold() satisfies f(n) = n + offset.
  Index threshold() const { return static_cast<Index>(prefix_.size()); }

  friend bool operator==(const OrderMap&, const OrderMap&) = default;

 private:
  std::vector<Index> prefix_;
  Index offset_ = 0;
};

// n -> f(g(n)).
OrderMap compose(const OrderMap& f, const OrderMap& g);

// s_i(n) = n for n <= i, n - 1 otherwise.
OrderMap face_map(Index i);
// t_i(n) = n for n < i, n + 1 otherwise.
OrderMap degeneracy_map(Index i);

// s_{a_1} o ... o s_{a_n}.
OrderMap represent_S(const Word& w);
// t_{a_n} o ... o t_{a_1}.
OrderMap embed_Sop(const Word& w);

OrderMap pseudo_inverse(const OrderMap& f);

struct Classification {
  bool injective = false;
  bool surjective = false;
  Index offset = 0;
  friend bool operator==(const Classification&, const Classification&) = default;
};

// Decided through the pseudo-inverse (f^- f = Id, f f^- = Id) and
// cross-checked against the values directly; a disagreement throws
// InvariantViolation.
Classification classify(const OrderMap& f);

// For surjective f with fibre sizes m_i = |f^{-1}(i)|, the word
// s_N^{m_N - 1} ... s_1^{m_1 - 1}.
Word descending_factorization(const OrderMap& f);

// For injective f, a word b with embed_Sop(b) = f, built by peeling
// f = t_a f' where a is the first point moved.
Word sop_factorization(const OrderMap& f);

// Words (a, b) with f = represent_S(a) o embed_Sop(b).
std::pair<Word, Word> factor_end_tr(const OrderMap& f);

// One instance of a face/degeneracy identity, checked as a map equality.
struct RelationInstance {
  int family = 0;  // 1..5
  Index i = 0;
  Index j = 0;
  std::string lhs;
  std::string rhs;
  bool holds = false;
};

// The five simplicial identity families with faces s_i and degeneracies t_i:
//   1  s_i t_j = t_j s_{i-1}        j < i
//   2  s_i t_i = Id = s_i t_{i+1}
//   3  s_i t_j = t_{j-1} s_i        i + 1 < j
//   4  s_i s_j = s_j s_{i+1}        j <= i
//   5  s_i s_j = s_{j-1} s_i        i < j
// for all admissible 1 <= i, j <= index_bound.
std::vector<RelationInstance> verify_ez_relations(Index index_bound);

// The waltz map: 2n/3 on multiples of three, 2 floor(n/3) + 1 otherwise.
Index waltz(Index n);

struct ResidueDensity {
  Index residue = 0;
  double density = 0;             // |{n <= N : n = r mod p}| / N
  double shifted_density = 0;     // |{n <= N : s_1(n) = r mod p}| / N
  double waltz_preimage_density = 0;  // |{n <= N : w(n) = r mod p}| / N
};

struct WaltzReport {
  Index modulus = 0;
  Index horizon = 0;
  std::vector<Index> even_preimage;  // {n <= N : w(n) even}
  bool preimage_is_multiples_of_three = false;
  std::vector<ResidueDensity> residues;
};

WaltzReport waltz_congruence_check(Index modulus, Index horizon);

// The maps n -> 2n and n -> 2n + 1. They are order preserving but not
// eventual translations, so they are plain functions rather than OrderMaps.
Index doubling_map(Index n);
Index doubling_plus_one_map(Index n);
// Whether the two images are disjoint on [1..horizon].
bool doubling_images_disjoint(Index horizon);

// `prefix=[v1,...,vN] offset=k`.
std::string to_string(const OrderMap& f);
OrderMap parse_order_map(std::string_view text);

}  // namespace facial
