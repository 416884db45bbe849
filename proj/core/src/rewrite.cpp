#include "facial/rewrite.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "facial/error.hpp"

namespace facial {

std::string to_string(RuleSystem system) {
  switch (system) {
    case RuleSystem::flat: return "flat";
    case RuleSystem::descending: return "descending";
    case RuleSystem::fplus: return "fplus";
  }
  return "?";
}

RuleSystem parse_rule_system(std::string_view name) {
  if (name == "flat") return RuleSystem::flat;
  if (name == "descending") return RuleSystem::descending;
  if (name == "fplus") return RuleSystem::fplus;
  throw ValidationError("unknown rewriting system '" + std::string(name) + "'");
}

bool is_redex(RuleSystem system, Index a, Index b) {
  switch (system) {
    case RuleSystem::flat: return a >= b;
    case RuleSystem::descending: return a < b;
    case RuleSystem::fplus: return a > b;
  }
  return false;
}

namespace {

// Rewrites the redex (a, b) in place.
void apply_rule(RuleSystem system, Index& a, Index& b) {
  const Index x = a;
  const Index y = b;
  switch (system) {
    case RuleSystem::flat:
    case RuleSystem::fplus:
      a = y;
      b = x + 1;
      break;
    case RuleSystem::descending:
      a = y - 1;
      b = x;
      break;
  }
}

class Rewriter {
 public:
  Rewriter(RuleSystem system, const Word& w, ReductionStrategy strategy, bool record)
      : system_(system), letters_(w.letters().begin(), w.letters().end()),
        strategy_(strategy), rng_(strategy.seed), record_(record) {}

  Reduction run() {
    std::optional<std::size_t> pos = first_redex();
    while (pos) {
      step(*pos);
      pos = next_redex(*pos);
    }
    return {Word(letters_), std::move(trace_)};
  }

 private:
  bool redex_at(std::size_t p) const {
    return is_redex(system_, letters_[p], letters_[p + 1]);
  }

  std::optional<std::size_t> scan_left_from(std::size_t from) const {
    for (std::size_t p = from; p + 1 < letters_.size(); ++p) {
      if (redex_at(p)) return p;
    }
    return std::nullopt;
  }

  std::optional<std::size_t> scan_right_from(std::size_t from) const {
    if (letters_.size() < 2) return std::nullopt;
    std::size_t p = std::min(from, letters_.size() - 2);
    for (;;) {
      if (redex_at(p)) return p;
      if (p == 0) return std::nullopt;
      --p;
    }
  }

  std::optional<std::size_t> random_redex() {
    redexes_.clear();
    for (std::size_t p = 0; p + 1 < letters_.size(); ++p) {
      if (redex_at(p)) redexes_.push_back(p);
    }
    if (redexes_.empty()) return std::nullopt;
    std::uniform_int_distribution<std::size_t> pick(0, redexes_.size() - 1);
    return redexes_[pick(rng_)];
  }

  std::optional<std::size_t> first_redex() {
    switch (strategy_.kind) {
      case ReductionStrategy::Kind::leftmost: return scan_left_from(0);
      case ReductionStrategy::Kind::rightmost:
        return letters_.size() < 2 ? std::nullopt : scan_right_from(letters_.size() - 2);
      case ReductionStrategy::Kind::randomized: return random_redex();
    }
    return std::nullopt;
  }

  // Only the windows at p-1, p and p+1 change after rewriting at p.
  std::optional<std::size_t> next_redex(std::size_t p) {
    switch (strategy_.kind) {
      case ReductionStrategy::Kind::leftmost: return scan_left_from(p == 0 ? 0 : p - 1);
      case ReductionStrategy::Kind::rightmost: return scan_right_from(p + 1);
      case ReductionStrategy::Kind::randomized: return random_redex();
    }
    return std::nullopt;
  }

  void step(std::size_t p) {
    if (!record_) {
      apply_rule(system_, letters_[p], letters_[p + 1]);
      return;
    }
    RewriteStep s;
    s.position = p;
    s.rule = system_;
    s.before = Word(letters_);
    apply_rule(system_, letters_[p], letters_[p + 1]);
    s.after = Word(letters_);
    trace_.push(std::move(s));
  }

  RuleSystem system_;
  std::vector<Index> letters_;
  ReductionStrategy strategy_;
  std::mt19937_64 rng_;
  bool record_;
  RewriteTrace trace_;
  std::vector<std::size_t> redexes_;
};

}  // namespace

Word RewriteStep::lhs() const {
  return Word{before[position], before[position + 1]};
}

Word RewriteStep::rhs() const {
  return Word{after[position], after[position + 1]};
}

bool RewriteTrace::well_formed() const {
  for (std::size_t n = 0; n < steps_.size(); ++n) {
    const RewriteStep& s = steps_[n];
    if (s.before.size() != s.after.size() || s.position + 1 >= s.before.size()) {
      return false;
    }
    if (!is_redex(s.rule, s.before[s.position], s.before[s.position + 1])) return false;
    Index a = s.before[s.position];
    Index b = s.before[s.position + 1];
    apply_rule(s.rule, a, b);
    for (std::size_t p = 0; p < s.before.size(); ++p) {
      Index expected = p == s.position ? a : p == s.position + 1 ? b : s.before[p];
      if (s.after[p] != expected) return false;
    }
    if (n + 1 < steps_.size() && steps_[n + 1].before != s.after) return false;
  }
  return true;
}

std::string RewriteTrace::to_log() const {
  std::ostringstream out;
  for (const RewriteStep& s : steps_) {
    out << "pos=" << s.position + 1 << " rule=" << to_dotted(s.lhs()) << "->"
        << to_dotted(s.rhs()) << " word=" << to_dotted(s.after) << '\n';
  }
  return out.str();
}

Reduction reduce(RuleSystem system, const Word& w, ReductionStrategy strategy) {
  return Rewriter(system, w, strategy, true).run();
}

Word normal_form(RuleSystem system, const Word& w) {
  return Rewriter(system, w, ReductionStrategy::leftmost(), false).run().normal_form;
}

Reduction reduce_flat(const Word& w, ReductionStrategy strategy) {
  return reduce(RuleSystem::flat, w, strategy);
}

Reduction reduce_descending(const Word& w, std::optional<Index> max_index,
                            ReductionStrategy strategy) {
  if (max_index && w.max_letter() > *max_index) {
    throw ValidationError("word " + to_string(w) + " has a letter above the bound " +
                          std::to_string(*max_index));
  }
  Reduction r = reduce(RuleSystem::descending, w, strategy);
  if (max_index && r.normal_form.max_letter() > *max_index) {
    throw InvariantViolation("descending rewriting raised an index above the bound");
  }
  return r;
}

Word multiply(const Word& a, const Word& b) {
  return normal_form(RuleSystem::flat, a + b);
}

bool words_equal(const Word& a, const Word& b) {
  return normal_form(RuleSystem::flat, a) == normal_form(RuleSystem::flat, b);
}

bool is_flat_normal(const Word& w) {
  for (std::size_t p = 0; p + 1 < w.size(); ++p) {
    if (w[p] >= w[p + 1]) return false;
  }
  return true;
}

bool is_descending_normal(const Word& w) {
  for (std::size_t p = 0; p + 1 < w.size(); ++p) {
    if (w[p] < w[p + 1]) return false;
  }
  return true;
}

namespace {

// Applies the rule at `first` and then reduces leftmost, recording the whole
// path from the peak.
RewriteTrace branch(RuleSystem system, const Word& peak, std::size_t first) {
  std::vector<Index> letters(peak.letters().begin(), peak.letters().end());
  RewriteStep s;
  s.position = first;
  s.rule = system;
  s.before = peak;
  apply_rule(system, letters[first], letters[first + 1]);
  s.after = Word(letters);
  RewriteTrace trace;
  trace.push(s);
  Reduction rest = reduce(system, s.after);
  for (const RewriteStep& step : rest.trace.steps()) trace.push(step);
  return trace;
}

const Word& endpoint(const RewriteTrace& t) { return t.steps().back().after; }

}  // namespace

std::vector<CriticalPair> critical_pairs(RuleSystem system, Index index_bound) {
  if (index_bound < 2) {
    throw ValidationError("critical pair enumeration needs an index bound of at least 2");
  }
  std::vector<CriticalPair> out;
  for (Index k = 1; k <= index_bound; ++k) {
    for (Index j = 1; j <= index_bound; ++j) {
      for (Index i = 1; i <= index_bound; ++i) {
        Word peak;
        switch (system) {
          case RuleSystem::flat:
            if (!(i <= j && j <= k)) continue;
            peak = Word{k, j, i};
            break;
          case RuleSystem::descending:
            if (!(i < j && j < k)) continue;
            peak = Word{i, j, k};
            break;
          case RuleSystem::fplus:
            if (!(i < j && j < k)) continue;
            peak = Word{k, j, i};
            break;
        }
        CriticalPair cp;
        cp.peak = peak;
        cp.left_path = branch(system, peak, 0);
        cp.right_path = branch(system, peak, 1);
        cp.joined = endpoint(cp.left_path) == endpoint(cp.right_path);
        out.push_back(std::move(cp));
      }
    }
  }
  return out;
}

std::vector<std::int64_t> termination_measure(const Word& w) {
  if (w.size() < 2) {
    throw ValidationError("termination measure needs a word of length at least 2");
  }
  std::vector<std::int64_t> h(w.size() - 1, 0);
  for (std::size_t j = 0; j + 1 < w.size(); ++j) {
    for (std::size_t k = j + 1; k < w.size(); ++k) {
      if (w[k] <= w[j]) ++h[j];
    }
  }
  return h;
}

bool right_cancel_check(const Word& s, const Word& t, const Word& x) {
  if (multiply(s, x) != multiply(t, x)) return true;
  return words_equal(s, t);
}

Word sn_membership_normal_form(const Word& w, Index n) {
  return reduce_descending(w, n).normal_form;
}

}  // namespace facial
