#include "facial/ordermap.hpp"

#include <algorithm>
#include <charconv>
#include <map>

#include "facial/error.hpp"

namespace facial {

OrderMap::OrderMap(std::vector<Index> prefix, Index offset)
    : prefix_(std::move(prefix)), offset_(offset) {
  const Index n = threshold();
  for (std::size_t p = 0; p < prefix_.size(); ++p) {
    if (prefix_[p] < 1) throw ValidationError("order map values must be positive");
    if (p > 0 && prefix_[p - 1] > prefix_[p]) {
      throw ValidationError("order map prefix is not order preserving");
    }
  }
  if (n + 1 + offset_ < 1) {
    throw ValidationError("order map tail n + offset is not positive at n = " +
                          std::to_string(n + 1));
  }
  if (!prefix_.empty() && prefix_.back() > n + 1 + offset_) {
    throw ValidationError("order map decreases between prefix and tail");
  }
  while (!prefix_.empty() && prefix_.back() == threshold() + offset_) prefix_.pop_back();
}

Index OrderMap::operator()(Index n) const {
  if (n < 1) throw ValidationError("order maps are defined on positive integers");
  if (n <= threshold()) return prefix_[static_cast<std::size_t>(n - 1)];
  return n + offset_;
}

OrderMap compose(const OrderMap& f, const OrderMap& g) {
  const Index bound = std::max({g.threshold(), f.threshold() - g.offset(), Index{0}});
  std::vector<Index> prefix;
  prefix.reserve(static_cast<std::size_t>(bound));
  for (Index n = 1; n <= bound; ++n) prefix.push_back(f(g(n)));
  return OrderMap(std::move(prefix), f.offset() + g.offset());
}

OrderMap face_map(Index i) {
  if (i < 1) throw ValidationError("face map index must be positive");
  std::vector<Index> prefix;
  for (Index n = 1; n <= i; ++n) prefix.push_back(n);
  return OrderMap(std::move(prefix), -1);
}

OrderMap degeneracy_map(Index i) {
  if (i < 1) throw ValidationError("degeneracy map index must be positive");
  std::vector<Index> prefix;
  for (Index n = 1; n < i; ++n) prefix.push_back(n);
  return OrderMap(std::move(prefix), 1);
}

OrderMap represent_S(const Word& w) {
  OrderMap f;
  for (std::size_t p = w.size(); p-- > 0;) f = compose(face_map(w[p]), f);
  return f;
}

OrderMap embed_Sop(const Word& w) {
  OrderMap f;
  for (std::size_t p = 0; p < w.size(); ++p) f = compose(degeneracy_map(w[p]), f);
  return f;
}

OrderMap pseudo_inverse(const OrderMap& f) {
  // For x > N + 1 + k no prefix point reaches x and the minimum is x - k.
  const Index k = f.offset();
  const Index bound = std::max(f.threshold() + 1 + k, Index{0});
  std::vector<Index> prefix;
  Index y = 1;
  for (Index x = 1; x <= bound; ++x) {
    while (f(y) < x) ++y;
    prefix.push_back(y);
  }
  return OrderMap(std::move(prefix), -k);
}

namespace {

bool directly_injective(const OrderMap& f) {
  for (Index n = 1; n <= f.threshold(); ++n) {
    if (f(n) >= f(n + 1)) return false;
  }
  return true;
}

bool directly_surjective(const OrderMap& f) {
  if (f(1) != 1) return false;
  for (Index n = 1; n <= f.threshold(); ++n) {
    if (f(n + 1) - f(n) > 1) return false;
  }
  return true;
}

}  // namespace

Classification classify(const OrderMap& f) {
  const OrderMap inv = pseudo_inverse(f);
  Classification c;
  c.injective = compose(inv, f) == OrderMap::identity();
  c.surjective = compose(f, inv) == OrderMap::identity();
  c.offset = f.offset();
  if (c.injective != directly_injective(f) || c.surjective != directly_surjective(f)) {
    throw InvariantViolation("pseudo-inverse classification disagrees with direct check for " +
                             to_string(f));
  }
  return c;
}

Word descending_factorization(const OrderMap& f) {
  if (!classify(f).surjective) {
    throw ValidationError("descending factorization needs a surjective map, got " +
                          to_string(f));
  }
  // Values above f(N + 1) have exactly one preimage.
  std::map<Index, Index> multiplicity;
  for (Index n = 1; n <= f.threshold() + 1; ++n) ++multiplicity[f(n)];
  std::vector<Index> letters;
  for (auto it = multiplicity.rbegin(); it != multiplicity.rend(); ++it) {
    for (Index r = 1; r < it->second; ++r) letters.push_back(it->first);
  }
  return Word(std::move(letters));
}

Word sop_factorization(const OrderMap& f) {
  if (!classify(f).injective) {
    throw ValidationError("S^op factorization needs an injective map, got " + to_string(f));
  }
  std::vector<Index> peeled;
  OrderMap rest = f;
  while (!(rest == OrderMap::identity())) {
    Index a = 1;
    while (rest(a) == a) ++a;
    peeled.push_back(a);
    rest = compose(face_map(a), rest);
  }
  std::reverse(peeled.begin(), peeled.end());
  return Word(std::move(peeled));
}

std::pair<Word, Word> factor_end_tr(const OrderMap& f) {
  const Classification c = classify(f);
  if (c.injective && c.surjective) return {Word{}, Word{}};
  if (c.injective) return {Word{}, sop_factorization(f)};
  if (c.surjective) return {descending_factorization(f), Word{}};

  // f = h o g with g(n) = f(n) + n - 1 up to N + 1 and slope one afterwards,
  // and h filling the gaps g leaves open so that it is onto.
  const Index top = f.threshold() + 1;
  std::vector<Index> g_prefix;
  std::vector<Index> h_prefix;
  for (Index m = 1; m < f(1); ++m) h_prefix.push_back(m);
  for (Index n = 1; n <= top; ++n) {
    g_prefix.push_back(f(n) + n - 1);
    if (n > 1) {
      for (Index m = 1; m <= f(n) - f(n - 1); ++m) {
        h_prefix.push_back(std::min(f(n - 1) + m, f(n)));
      }
    }
    h_prefix.push_back(f(n));
  }
  const Index g_last = g_prefix.back();
  const Index h_last = h_prefix.back();
  const OrderMap g(std::move(g_prefix), g_last - top);
  const OrderMap h(std::move(h_prefix), h_last - g_last);

  std::pair<Word, Word> out{descending_factorization(h), sop_factorization(g)};
  if (!(compose(represent_S(out.first), embed_Sop(out.second)) == f)) {
    throw InvariantViolation("S S^op factorization failed for " + to_string(f));
  }
  return out;
}

std::vector<RelationInstance> verify_ez_relations(Index index_bound) {
  if (index_bound < 2) throw ValidationError("relation check needs an index bound of at least 2");
  std::vector<RelationInstance> out;
  auto name = [](char op, Index i) { return std::string(1, op) + std::to_string(i); };
  auto record = [&](int family, Index i, Index j, std::string lhs, std::string rhs,
                    const OrderMap& l, const OrderMap& r) {
    out.push_back({family, i, j, std::move(lhs), std::move(rhs), l == r});
  };
  for (Index i = 1; i <= index_bound; ++i) {
    for (Index j = 1; j <= index_bound; ++j) {
      if (j < i) {
        record(1, i, j, name('s', i) + " " + name('t', j), name('t', j) + " " + name('s', i - 1),
               compose(face_map(i), degeneracy_map(j)), compose(degeneracy_map(j), face_map(i - 1)));
      }
      if (i + 1 < j) {
        record(3, i, j, name('s', i) + " " + name('t', j), name('t', j - 1) + " " + name('s', i),
               compose(face_map(i), degeneracy_map(j)), compose(degeneracy_map(j - 1), face_map(i)));
      }
      if (j <= i) {
        record(4, i, j, name('s', i) + " " + name('s', j), name('s', j) + " " + name('s', i + 1),
               compose(face_map(i), face_map(j)), compose(face_map(j), face_map(i + 1)));
      }
      if (i < j) {
        record(5, i, j, name('s', i) + " " + name('s', j), name('s', j - 1) + " " + name('s', i),
               compose(face_map(i), face_map(j)), compose(face_map(j - 1), face_map(i)));
      }
    }
    record(2, i, i, name('s', i) + " " + name('t', i), "Id",
           compose(face_map(i), degeneracy_map(i)), OrderMap::identity());
    record(2, i, i + 1, name('s', i) + " " + name('t', i + 1), "Id",
           compose(face_map(i), degeneracy_map(i + 1)), OrderMap::identity());
  }
  return out;
}

Index waltz(Index n) {
  if (n < 1) throw ValidationError("waltz map is defined on positive integers");
  return n % 3 == 0 ? 2 * n / 3 : 2 * (n / 3) + 1;
}

WaltzReport waltz_congruence_check(Index modulus, Index horizon) {
  if (modulus < 2) throw ValidationError("modulus must be at least 2");
  if (horizon < modulus) throw ValidationError("horizon must be at least the modulus");
  WaltzReport report;
  report.modulus = modulus;
  report.horizon = horizon;
  bool exact = true;
  for (Index n = 1; n <= horizon; ++n) {
    const bool even = waltz(n) % 2 == 0;
    if (even) report.even_preimage.push_back(n);
    if (even != (n % 3 == 0)) exact = false;
  }
  report.preimage_is_multiples_of_three = exact;
  const OrderMap s1 = face_map(1);
  for (Index r = 0; r < modulus; ++r) {
    Index plain = 0, shifted = 0, pulled = 0;
    for (Index n = 1; n <= horizon; ++n) {
      if (n % modulus == r) ++plain;
      if (s1(n) % modulus == r) ++shifted;
      if (waltz(n) % modulus == r) ++pulled;
    }
    const double total = static_cast<double>(horizon);
    report.residues.push_back({r, plain / total, shifted / total, pulled / total});
  }
  return report;
}

Index doubling_map(Index n) { return 2 * n; }
Index doubling_plus_one_map(Index n) { return 2 * n + 1; }

bool doubling_images_disjoint(Index horizon) {
  std::vector<Index> a, b;
  for (Index n = 1; n <= horizon; ++n) {
    a.push_back(doubling_map(n));
    b.push_back(doubling_plus_one_map(n));
  }
  std::vector<Index> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  return common.empty();
}

std::string to_string(const OrderMap& f) {
  std::string out = "prefix=[";
  for (std::size_t p = 0; p < f.prefix().size(); ++p) {
    if (p) out += ',';
    out += std::to_string(f.prefix()[p]);
  }
  return out + "] offset=" + std::to_string(f.offset());
}

OrderMap parse_order_map(std::string_view text) {
  std::string compact;
  for (char c : text) {
    if (c != ' ' && c != '\t' && c != '\n') compact += c;
  }
  if (compact == "identity" || compact == "id") return OrderMap::identity();
  const std::string head = "prefix=[";
  const auto close = compact.find(']');
  const auto off = compact.find("offset=");
  if (compact.rfind(head, 0) != 0 || close == std::string::npos || off == std::string::npos ||
      off < close) {
    throw ValidationError("malformed order map '" + std::string(text) +
                          "', expected prefix=[v1,...] offset=k");
  }
  auto parse_int = [&](std::string_view token) {
    Index value = 0;
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
      throw ValidationError("malformed integer '" + std::string(token) + "' in order map");
    }
    return value;
  };
  std::vector<Index> prefix;
  std::string_view body = std::string_view(compact).substr(head.size(), close - head.size());
  while (!body.empty()) {
    const auto comma = body.find(',');
    prefix.push_back(parse_int(body.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  const Index offset = parse_int(std::string_view(compact).substr(off + 7));
  return OrderMap(std::move(prefix), offset);
}

}  // namespace facial
