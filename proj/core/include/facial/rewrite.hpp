#pragma once

// String rewriting for the facial monoid
//
//   S = < s_i : s_j s_i = s_i s_{j+1}, 1 <= i <= j >
//
// Three length-preserving systems on two-letter windows are implemented:
//
//   flat        s_j s_i -> s_i s_{j+1}   (i <= j)   normal forms strictly increase
//   descending  s_i s_j -> s_{j-1} s_i   (i <  j)   normal forms never increase
//   fplus       g_j g_i -> g_i g_{j+1}   (i <  j)   Thompson monoid F+, powers persist
//
// All three terminate and are locally confluent; critical_pairs() checks the
// overlaps explicitly.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "facial/word.hpp"

namespace facial {

enum class RuleSystem { flat, descending, fplus };

std::string to_string(RuleSystem system);
RuleSystem parse_rule_system(std::string_view name);

// One application of a rule to the window starting at `position`.
struct RewriteStep {
  std::size_t position = 0;
  RuleSystem rule = RuleSystem::flat;
  Word before;
  Word after;

  // The rule instance used, as two-letter words (lhs -> rhs).
  Word lhs() const;
  Word rhs() const;
};

class RewriteTrace {
 public:
  void push(RewriteStep step) { steps_.push_back(std::move(step)); }
  const std::vector<RewriteStep>& steps() const { return steps_; }
  std::size_t size() const { return steps_.size(); }
  bool empty() const { return steps_.empty(); }

  // Every step is a genuine single rule application and consecutive steps
  // chain.
  bool well_formed() const;

  // One line per step: `pos=<p> rule=<lhs>-><rhs> word=<letters>`, with
  // positions 1-based and letters dot separated.
  std::string to_log() const;

 private:
  std::vector<RewriteStep> steps_;
};

struct ReductionStrategy {
  enum class Kind { leftmost, rightmost, randomized };
  Kind kind = Kind::leftmost;
  std::uint64_t seed = 0;

  static ReductionStrategy leftmost() { return {Kind::leftmost, 0}; }
  static ReductionStrategy rightmost() { return {Kind::rightmost, 0}; }
  static ReductionStrategy randomized(std::uint64_t seed) {
    return {Kind::randomized, seed};
  }
};

struct Reduction {
  Word normal_form;
  RewriteTrace trace;
};

// Whether the window (a, b) is a redex of `system`.
bool is_redex(RuleSystem system, Index a, Index b);

// Rewrites w to normal form in `system`, recording every step.
Reduction reduce(RuleSystem system, const Word& w,
                 ReductionStrategy strategy = ReductionStrategy::leftmost());

// Same normal form as reduce(), without a trace.
Word normal_form(RuleSystem system, const Word& w);

Reduction reduce_flat(const Word& w,
                      ReductionStrategy strategy = ReductionStrategy::leftmost());

// When max_index is given every letter of w must be <= *max_index; the
// result then also stays below it.
Reduction reduce_descending(
    const Word& w, std::optional<Index> max_index = std::nullopt,
    ReductionStrategy strategy = ReductionStrategy::leftmost());

// Product in S, returned in flat normal form.
Word multiply(const Word& a, const Word& b);

bool words_equal(const Word& a, const Word& b);

bool is_flat_normal(const Word& w);
bool is_descending_normal(const Word& w);

struct CriticalPair {
  Word peak;
  RewriteTrace left_path;   // rule applied at the first window first
  RewriteTrace right_path;  // rule applied at the second window first
  bool joined = false;
};

// Enumerates every three-letter overlap with letters <= index_bound:
//   flat        s_k s_j s_i   i <= j <= k
//   descending  s_i s_j s_k   i <  j <  k
//   fplus       g_k g_j g_i   i <  j <  k
std::vector<CriticalPair> critical_pairs(RuleSystem system, Index index_bound);

// h_j = |{ k > j : i_k <= i_j }| for j = 1..n-1. Every flat rule application
// strictly decreases this sequence lexicographically.
std::vector<std::int64_t> termination_measure(const Word& w);

// Whether multiply(s, x) == multiply(t, x) implies words_equal(s, t).
bool right_cancel_check(const Word& s, const Word& t, const Word& x);

// Descending normal form of a word over s_1..s_n. Two such words are equal
// in S exactly when these agree.
Word sn_membership_normal_form(const Word& w, Index n);

}  // namespace facial
