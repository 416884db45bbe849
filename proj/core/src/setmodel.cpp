#include "facial/setmodel.hpp"

#include <algorithm>
#include <charconv>

#include "facial/error.hpp"
#include "facial/rewrite.hpp"

namespace facial {

namespace {

void check_canonical(const std::vector<Index>& v) {
  for (std::size_t p = 0; p < v.size(); ++p) {
    if (v[p] < 1) throw ValidationError("set elements must be positive");
    if (p > 0 && v[p - 1] >= v[p]) {
      throw ValidationError("set elements must be strictly increasing");
    }
  }
}

}  // namespace

CanonSet::CanonSet(std::initializer_list<Index> elements) : elements_(elements) {
  check_canonical(elements_);
}

CanonSet::CanonSet(std::vector<Index> elements) : elements_(std::move(elements)) {
  check_canonical(elements_);
}

CanonSet CanonSet::from_unsorted(std::vector<Index> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  return CanonSet(std::move(elements));
}

Index CanonSet::max() const {
  if (elements_.empty()) throw ValidationError("max of the empty set");
  return elements_.back();
}

bool CanonSet::contains(Index x) const {
  return std::binary_search(elements_.begin(), elements_.end(), x);
}

bool is_pin_headed(const CanonSet& e) {
  return !e.empty() && !e.contains(e.max() - 1);
}

PinSet::PinSet(CanonSet e) : set_(std::move(e)) {
  if (!is_pin_headed(set_)) {
    throw ValidationError("set " + to_string(set_) + " is not pin-headed");
  }
}

CanonSet sigma(Index i, const CanonSet& f) {
  if (i < 1) throw ValidationError("sigma index must be positive");
  // Walk the candidates 1, 2, ... counting holes; the i-th hole is at most
  // max(F) + i.
  Index holes = 0;
  Index candidate = 0;
  std::size_t next = 0;
  while (holes < i) {
    ++candidate;
    if (next < f.size() && f[next] == candidate) {
      ++next;
    } else {
      ++holes;
    }
  }
  std::vector<Index> out = f.vec();
  out.insert(std::upper_bound(out.begin(), out.end(), candidate), candidate);
  return CanonSet(std::move(out));
}

CanonSet alpha(Index i, const CanonSet& e) {
  if (i < 1) throw ValidationError("alpha index must be positive");
  if (static_cast<std::size_t>(i) > e.size()) {
    throw ValidationError("alpha_" + std::to_string(i) + " is undefined on " + to_string(e) +
                          " (size " + std::to_string(e.size()) + ")");
  }
  std::vector<Index> out = e.vec();
  out.erase(out.begin() + (i - 1));
  return CanonSet(std::move(out));
}

namespace {

CanonSet interval_minus(Index top, const CanonSet& f) {
  std::vector<Index> out;
  for (Index x = 1; x <= top; ++x) {
    if (!f.contains(x)) out.push_back(x);
  }
  return CanonSet(std::move(out));
}

}  // namespace

CanonSet pin_to_fin(const PinSet& e) { return interval_minus(e.set().max(), e.set()); }

PinSet fin_to_pin(const CanonSet& f) {
  if (f.empty()) return PinSet(CanonSet{1});
  return PinSet(interval_minus(f.max() + 1, f));
}

CanonSet word_to_set(const Word& w) {
  Word nf = normal_form(RuleSystem::flat, w);
  return CanonSet(std::vector<Index>(nf.letters().begin(), nf.letters().end()));
}

Word set_to_word(const CanonSet& f) { return Word(f.vec()); }

CanonSet parse_set(std::string_view text) {
  std::string compact;
  for (char c : text) {
    if (c != ' ' && c != '\t' && c != '\n') compact += c;
  }
  if (compact.size() < 2 || compact.front() != '{' || compact.back() != '}') {
    throw ValidationError("malformed set '" + std::string(text) + "', expected {a,b,...}");
  }
  std::string_view body(compact);
  body = body.substr(1, body.size() - 2);
  std::vector<Index> out;
  while (!body.empty()) {
    std::size_t comma = body.find(',');
    std::string_view token = body.substr(0, comma);
    Index value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
      throw ValidationError("malformed set element '" + std::string(token) + "'");
    }
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
    if (body.empty()) throw ValidationError("trailing comma in set");
  }
  return CanonSet(std::move(out));
}

std::string to_string(const CanonSet& f) {
  std::string out = "{";
  for (std::size_t p = 0; p < f.size(); ++p) {
    if (p) out += ',';
    out += std::to_string(f[p]);
  }
  return out + "}";
}

std::vector<CanonSet> all_subsets(Index n) {
  if (n < 0 || n > 24) throw ValidationError("all_subsets: n must lie in [0, 24]");
  std::vector<CanonSet> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<Index> e;
    for (Index x = 1; x <= n; ++x) {
      if (mask >> (x - 1) & 1) e.push_back(x);
    }
    out.emplace_back(std::move(e));
  }
  return out;
}

}  // namespace facial
