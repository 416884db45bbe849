#pragma once

// Brute-force reference implementations used to cross-check the library.
// Nothing here calls into facial; everything is recomputed from definitions.

#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <vector>

#include <gmpxx.h>

namespace oracle {

using Letters = std::vector<std::int64_t>;

// F together with its i-th hole, by walking 1, 2, 3, ...
inline Letters fill_hole(std::int64_t i, const Letters& f) {
  std::set<std::int64_t> s(f.begin(), f.end());
  std::int64_t seen = 0;
  for (std::int64_t n = 1;; ++n) {
    if (s.count(n)) continue;
    if (++seen == i) {
      s.insert(n);
      break;
    }
  }
  return Letters(s.begin(), s.end());
}

// Left multiplication by s_i is hole filling, so a word acts on the empty set
// from its rightmost letter outwards.
inline Letters set_of_word(const Letters& w) {
  Letters f;
  for (auto it = w.rbegin(); it != w.rend(); ++it) f = fill_hole(*it, f);
  return f;
}

inline std::int64_t face(std::int64_t i, std::int64_t n) { return n <= i ? n : n - 1; }
inline std::int64_t degeneracy(std::int64_t i, std::int64_t n) { return n < i ? n : n + 1; }

// s_{a_1}(...(s_{a_k}(n))).
inline std::int64_t act_faces(const Letters& w, std::int64_t n) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) n = face(*it, n);
  return n;
}

// t_{a_k}(...(t_{a_1}(n))).
inline std::int64_t act_degeneracies(const Letters& w, std::int64_t n) {
  for (std::int64_t a : w) n = degeneracy(a, n);
  return n;
}

enum class System { flat, descending, fplus };

inline bool redex(System s, std::int64_t a, std::int64_t b) {
  switch (s) {
    case System::flat: return a >= b;
    case System::descending: return a < b;
    case System::fplus: return a > b;
  }
  return false;
}

inline std::pair<std::int64_t, std::int64_t> contract(System s, std::int64_t a, std::int64_t b) {
  if (s == System::descending) return {b - 1, a};
  return {b, a + 1};
}

// Every irreducible word reachable from w by any sequence of rewrites.
inline std::set<Letters> all_normal_forms(System s, const Letters& w) {
  std::set<Letters> seen{w};
  std::deque<Letters> queue{w};
  std::set<Letters> out;
  while (!queue.empty()) {
    Letters cur = queue.front();
    queue.pop_front();
    bool reducible = false;
    for (std::size_t p = 0; p + 1 < cur.size(); ++p) {
      if (!redex(s, cur[p], cur[p + 1])) continue;
      reducible = true;
      Letters next = cur;
      std::tie(next[p], next[p + 1]) = contract(s, cur[p], cur[p + 1]);
      if (seen.insert(next).second) queue.push_back(next);
    }
    if (!reducible) out.insert(cur);
  }
  return out;
}

// All words of the given length over 1..max_letter.
inline std::vector<Letters> all_words(std::int64_t max_letter, std::size_t len) {
  std::vector<Letters> out{{}};
  for (std::size_t l = 0; l < len; ++l) {
    std::vector<Letters> next;
    for (const auto& w : out) {
      for (std::int64_t a = 1; a <= max_letter; ++a) {
        next.push_back(w);
        next.back().push_back(a);
      }
    }
    out = std::move(next);
  }
  return out;
}

using Law = std::map<Letters, mpq_class>;

inline mpq_class total_variation(const Law& p, const Law& q) {
  std::set<Letters> keys;
  for (const auto& [k, v] : p) keys.insert(k);
  for (const auto& [k, v] : q) keys.insert(k);
  mpq_class total = 0;
  for (const auto& k : keys) {
    const mpq_class a = p.count(k) ? p.at(k) : mpq_class(0);
    const mpq_class b = q.count(k) ? q.at(k) : mpq_class(0);
    total += abs(a - b);
  }
  return total / 2;
}

inline Law drop_coordinate(std::size_t i, const Law& p) {
  Law out;
  for (const auto& [k, v] : p) {
    Letters t = k;
    t.erase(t.begin() + static_cast<std::ptrdiff_t>(i - 1));
    out[t] += v;
  }
  return out;
}

// Law of the partial sums of k IID steps with the given step law.
inline Law walk_law(const std::map<std::int64_t, mpq_class>& step, std::size_t k) {
  Law out{{{}, mpq_class(1)}};
  for (std::size_t j = 0; j < k; ++j) {
    Law next;
    for (const auto& [t, m] : out) {
      for (const auto& [x, w] : step) {
        Letters u = t;
        u.push_back((t.empty() ? 0 : t.back()) + x);
        next[u] += m * w;
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace oracle
