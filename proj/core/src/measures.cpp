#include "facial/measures.hpp"

#include <charconv>
#include <limits>
#include <sstream>

#include "facial/error.hpp"

namespace facial {

std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  Rational q;
  try {
    q = Rational(std::string(text));
  } catch (const std::invalid_argument&) {
    throw ValidationError("malformed rational '" + std::string(text) + "'");
  }
  if (q.get_den() == 0) throw ValidationError("zero denominator in '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

Dist::Dist(Atoms atoms) : atoms_(std::move(atoms)) {
  Rational total = 0;
  for (const auto& [e, m] : atoms_) {
    if (m <= 0) throw ValidationError("atom " + to_string(e) + " has non-positive mass");
    total += m;
  }
  if (total != 1) {
    throw ValidationError("distribution masses sum to " + to_string(total) + ", not 1");
  }
}

Dist Dist::point(CanonSet e) {
  Atoms a;
  a.emplace(std::move(e), Rational(1));
  return Dist(std::move(a));
}

Dist Dist::uniform(const std::vector<CanonSet>& support) {
  if (support.empty()) throw ValidationError("uniform distribution on an empty support");
  Atoms a;
  const Rational w(1, support.size());
  for (const CanonSet& e : support) {
    if (!a.emplace(e, w).second) throw ValidationError("duplicate atom " + to_string(e));
  }
  return Dist(std::move(a));
}

Rational Dist::mass(const CanonSet& e) const {
  auto it = atoms_.find(e);
  return it == atoms_.end() ? Rational(0) : it->second;
}

Rational Dist::probability(const std::function<bool(const CanonSet&)>& event) const {
  Rational total = 0;
  for (const auto& [e, m] : atoms_) {
    if (event(e)) total += m;
  }
  return total;
}

BaseStep::BaseStep(std::map<Index, Rational> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw ValidationError("step law has empty support");
  Rational total = 0;
  for (const auto& [x, m] : atoms_) {
    if (x < 1) throw ValidationError("step law support must be positive integers");
    if (m <= 0) throw ValidationError("step law masses must be positive");
    total += m;
  }
  if (total != 1) throw ValidationError("step law masses sum to " + to_string(total));
}

BaseStep BaseStep::uniform(Index lo, Index hi) {
  if (lo < 1 || hi < lo) throw ValidationError("uniform step law needs 1 <= lo <= hi");
  std::map<Index, Rational> a;
  const Rational w(1, static_cast<unsigned long>(hi - lo + 1));
  for (Index x = lo; x <= hi; ++x) a.emplace(x, w);
  return BaseStep(std::move(a));
}

Rational BaseStep::cdf(Index y) const {
  Rational total = 0;
  for (const auto& [x, m] : atoms_) {
    if (x > y) break;
    total += m;
  }
  return total;
}

namespace {

Index parse_positive(std::string_view token) {
  Index v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
    throw ValidationError("malformed integer '" + std::string(token) + "'");
  }
  return v;
}

}  // namespace

BaseStep parse_base_step(std::string_view text) {
  if (text.rfind("uniform:", 0) == 0) {
    std::string_view range = text.substr(8);
    const auto dots = range.find("..");
    if (dots == std::string_view::npos) throw ValidationError("expected uniform:a..b");
    return BaseStep::uniform(parse_positive(range.substr(0, dots)), parse_positive(range.substr(dots + 2)));
  }
  if (text.rfind("point:", 0) == 0) {
    std::map<Index, Rational> a;
    a.emplace(parse_positive(text.substr(6)), Rational(1));
    return BaseStep(std::move(a));
  }
  std::map<Index, Rational> a;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) throw ValidationError("expected x:mass in step law");
    if (!a.emplace(parse_positive(item.substr(0, colon)), parse_rational(item.substr(colon + 1))).second) {
      throw ValidationError("duplicate support point in step law");
    }
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return BaseStep(std::move(a));
}

std::string to_string(const BaseStep& nu) {
  std::string out;
  for (const auto& [x, m] : nu.atoms()) {
    if (!out.empty()) out += ',';
    out += std::to_string(x) + ":" + to_string(m);
  }
  return out;
}

Rational tv(const Dist& p, const Dist& q) {
  Rational total = 0;
  auto a = p.atoms().begin();
  auto b = q.atoms().begin();
  while (a != p.atoms().end() || b != q.atoms().end()) {
    if (b == q.atoms().end() || (a != p.atoms().end() && a->first < b->first)) {
      total += a->second;
      ++a;
    } else if (a == p.atoms().end() || b->first < a->first) {
      total += b->second;
      ++b;
    } else {
      total += abs(a->second - b->second);
      ++a;
      ++b;
    }
  }
  return total / 2;
}

Dist push_alpha(Index i, const Dist& p) {
  Dist::Atoms out;
  for (const auto& [e, m] : p.atoms()) {
    if (static_cast<std::size_t>(i) > e.size() || i < 1) {
      throw ValidationError("push_alpha(" + std::to_string(i) + ") meets atom " + to_string(e));
    }
    out[alpha(i, e)] += m;
  }
  return Dist(std::move(out));
}

namespace {

void check_walk_size(std::size_t support, Index k, Index max_step) {
  double atoms = 1;
  for (Index j = 0; j < k; ++j) atoms *= static_cast<double>(support);
  if (atoms > static_cast<double>(kMaxWalkAtoms)) {
    throw ValidationError("walk law would have up to " + std::to_string(static_cast<long long>(atoms)) +
                          " atoms, above the guardrail");
  }
  if (max_step > std::numeric_limits<Index>::max() / 4 / std::max<Index>(k, 1)) {
    throw ValidationError("walk positions would overflow");
  }
}

}  // namespace

Dist partial_product_law(const std::vector<BaseStep>& steps,
                         const std::function<Index(Index, Index)>& op) {
  if (steps.empty()) throw ValidationError("partial product law needs at least one step");
  Index max_step = 0;
  for (const BaseStep& s : steps) max_step = std::max(max_step, s.max_support());
  double atoms = 1;
  for (const BaseStep& s : steps) atoms *= static_cast<double>(s.atoms().size());
  if (atoms > static_cast<double>(kMaxWalkAtoms)) {
    throw ValidationError("partial product law exceeds the atom guardrail");
  }

  std::vector<std::pair<std::vector<Index>, Rational>> layer;
  for (const auto& [x, m] : steps.front().atoms()) layer.push_back({{x}, m});
  for (std::size_t j = 1; j < steps.size(); ++j) {
    std::vector<std::pair<std::vector<Index>, Rational>> next;
    next.reserve(layer.size() * steps[j].atoms().size());
    for (const auto& [tuple, m] : layer) {
      for (const auto& [x, w] : steps[j].atoms()) {
        const Index y = op(tuple.back(), x);
        if (y <= tuple.back()) {
          throw ValidationError("step operation is not increasing: " + std::to_string(tuple.back()) +
                                " * " + std::to_string(x) + " = " + std::to_string(y));
        }
        std::vector<Index> t = tuple;
        t.push_back(y);
        next.push_back({std::move(t), m * w});
      }
    }
    layer = std::move(next);
  }
  Dist::Atoms out;
  for (auto& [tuple, m] : layer) out[CanonSet(std::move(tuple))] += m;
  return Dist(std::move(out));
}

Dist walk_measure(const BaseStep& nu, Index k) {
  if (k < 1) throw ValidationError("walk length must be at least 1");
  check_walk_size(nu.atoms().size(), k, nu.max_support());
  return partial_product_law(std::vector<BaseStep>(static_cast<std::size_t>(k), nu),
                             [](Index a, Index b) { return a + b; });
}

NoRandomWalkReport no_random_walk_check(const BaseStep& nu, Index k) {
  if (k < 2) throw ValidationError("the random walk bound needs k >= 2");
  NoRandomWalkReport r;
  r.k = k;
  Rational acc = 0;
  for (const auto& [x, m] : nu.atoms()) {
    acc += m;
    if (acc > Rational(1, 2)) {
      r.M = x;
      break;
    }
  }
  const Dist nu_k = walk_measure(nu, k);
  const Dist nu_k1 = walk_measure(nu, k + 1);
  const Index M = r.M;
  r.nu_k_A = nu_k.probability([M](const CanonSet& e) { return e[0] <= M; });
  r.nu_k1_B = nu_k1.probability([M](const CanonSet& e) { return e[1] <= M; });
  r.nu_k1_B1 = nu_k1.probability([M](const CanonSet& e) { return e[0] <= M - 1; });
  r.nu_k1_B2 = nu_k1.probability([M](const CanonSet& e) { return e[1] - e[0] <= M - 1; });
  const Rational below = nu.cdf(M - 1);
  r.independence_bound = below * below;
  r.tv_value = tv(push_alpha(1, nu_k1), nu_k);
  r.event_gap = abs(r.nu_k1_B - r.nu_k_A);
  const Rational half(1, 2);
  const Rational quarter(1, 4);
  r.chain_holds = r.nu_k_A > half && r.nu_k1_B1 == below && r.nu_k1_B2 == below &&
                  below <= half && r.nu_k1_B <= r.independence_bound &&
                  r.independence_bound <= quarter && r.tv_value >= r.event_gap &&
                  r.event_gap > quarter;
  r.passes = r.tv_value > quarter;
  return r;
}

Dist mixture(const std::vector<std::pair<Rational, Dist>>& parts) {
  if (parts.empty()) throw ValidationError("mixture of no distributions");
  Rational total = 0;
  Dist::Atoms out;
  for (const auto& [w, d] : parts) {
    if (w <= 0) throw ValidationError("mixture weights must be positive");
    total += w;
    for (const auto& [e, m] : d.atoms()) out[e] += w * m;
  }
  if (total != 1) throw ValidationError("mixture weights sum to " + to_string(total) + ", not 1");
  return Dist(std::move(out));
}

std::string serialize(const Dist& p) {
  std::ostringstream out;
  for (const auto& [e, m] : p.atoms()) out << to_string(e) << ' ' << to_string(m) << '\n';
  return out.str();
}

Dist parse_dist(std::string_view text) {
  Dist::Atoms atoms;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto close = line.find('}');
    if (close == std::string_view::npos) throw ValidationError("malformed distribution line");
    CanonSet e = parse_set(line.substr(0, close + 1));
    std::string_view mass = line.substr(close + 1);
    while (!mass.empty() && mass.front() == ' ') mass.remove_prefix(1);
    if (!atoms.emplace(std::move(e), parse_rational(mass)).second) {
      throw ValidationError("duplicate atom in distribution");
    }
  }
  return Dist(std::move(atoms));
}

}  // namespace facial
