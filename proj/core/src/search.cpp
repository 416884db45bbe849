#include "facial/search.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "facial/error.hpp"
#include "facial/lp.hpp"

namespace facial {

Universe::Universe(Index N, Index k) : N_(N), k_(k) {
  if (k < 1) throw ValidationError("deletion depth k must be at least 1");
  if (N < k) throw ValidationError("ground set [1..N] must have at least k elements");
  if (N > 16) throw ValidationError("N above 16 is outside the enumeration guardrail");
  for (CanonSet& e : all_subsets(N)) {
    if (static_cast<Index>(e.size()) >= k) sets_.push_back(std::move(e));
  }
}

Universe::Universe(Index N, Index k, std::vector<CanonSet> sets) : N_(N), k_(k), sets_(std::move(sets)) {
  if (k < 1) throw ValidationError("deletion depth k must be at least 1");
  if (sets_.empty()) throw ValidationError("universe has no sets");
  std::set<CanonSet> seen;
  for (const CanonSet& e : sets_) {
    if (static_cast<Index>(e.size()) < k) {
      throw ValidationError("universe set " + to_string(e) + " has fewer than k elements");
    }
    if (e.max() > N) throw ValidationError("universe set " + to_string(e) + " exceeds N");
    if (!seen.insert(e).second) throw ValidationError("duplicate universe set " + to_string(e));
  }
}

Rational deletion_defect(const Dist& mu, Index k) {
  Rational worst = 0;
  for (Index i = 1; i <= k; ++i) worst = std::max(worst, tv(push_alpha(i, mu), mu));
  return worst;
}

std::string to_string(SearchMethod m) { return m == SearchMethod::lp ? "lp" : "subgradient"; }

namespace {

// For each deletion index, the sets that carry a difference term and, per
// universe set, where its own mass and its alpha_i image land.
struct DefectLayout {
  struct Level {
    std::vector<CanonSet> targets;
    std::vector<std::size_t> image_of;  // per universe set
    std::vector<std::size_t> self_of;   // per universe set
  };
  std::vector<Level> levels;

  explicit DefectLayout(const Universe& u) {
    for (Index i = 1; i <= u.k(); ++i) {
      std::map<CanonSet, std::size_t> slot;
      for (const CanonSet& e : u.sets()) {
        slot.emplace(e, 0);
        slot.emplace(alpha(i, e), 0);
      }
      Level level;
      for (auto& [f, id] : slot) {
        id = level.targets.size();
        level.targets.push_back(f);
      }
      for (const CanonSet& e : u.sets()) {
        level.image_of.push_back(slot.at(alpha(i, e)));
        level.self_of.push_back(slot.at(e));
      }
      levels.push_back(std::move(level));
    }
  }
};

Dist dist_from_weights(const Universe& u, const std::vector<Rational>& w) {
  Dist::Atoms atoms;
  for (std::size_t e = 0; e < u.sets().size(); ++e) {
    if (sgn(w[e]) > 0) atoms.emplace(u.sets()[e], w[e]);
  }
  return Dist(std::move(atoms));
}

}  // namespace

double deletion_defect(const Universe& u, const std::vector<double>& weights) {
  const DefectLayout layout(u);
  double worst = 0;
  for (const auto& level : layout.levels) {
    std::vector<double> diff(level.targets.size(), 0.0);
    for (std::size_t e = 0; e < weights.size(); ++e) {
      diff[level.image_of[e]] += weights[e];
      diff[level.self_of[e]] -= weights[e];
    }
    double l1 = 0;
    for (double d : diff) l1 += std::abs(d);
    worst = std::max(worst, l1 / 2);
  }
  return worst;
}

SearchResult solve_lp(const Universe& u) {
  if (u.sets().size() > kMaxLpSets) {
    throw ValidationError("universe has " + std::to_string(u.sets().size()) +
                          " sets, above the exact LP guardrail of " + std::to_string(kMaxLpSets));
  }
  const DefectLayout layout(u);
  const std::size_t n_mu = u.sets().size();
  const std::size_t t_var = n_mu;

  // Variables: mu_E, t, then (p_{i,F}, n_{i,F}) with p - n = (alpha_i mu - mu)(F).
  lp::Problem prob;
  std::size_t next = t_var + 1;
  std::vector<lp::Row> tv_rows;
  for (const auto& level : layout.levels) {
    const std::size_t first = next;
    next += 2 * level.targets.size();
    std::vector<lp::Row> diff_rows(level.targets.size());
    for (std::size_t f = 0; f < level.targets.size(); ++f) {
      auto& row = diff_rows[f];
      row.relation = lp::Relation::equal;
      row.coeffs.push_back({first + 2 * f, Rational(1)});
      row.coeffs.push_back({first + 2 * f + 1, Rational(-1)});
      row.basis_hint = first + 2 * f;
    }
    for (std::size_t e = 0; e < n_mu; ++e) {
      diff_rows[level.image_of[e]].coeffs.push_back({e, Rational(-1)});
      diff_rows[level.self_of[e]].coeffs.push_back({e, Rational(1)});
    }
    lp::Row tv_row;
    for (std::size_t v = first; v < next; ++v) tv_row.coeffs.push_back({v, Rational(1)});
    tv_row.coeffs.push_back({t_var, Rational(-2)});
    tv_rows.push_back(std::move(tv_row));
    for (auto& r : diff_rows) prob.rows.push_back(std::move(r));
  }
  for (auto& r : tv_rows) prob.rows.push_back(std::move(r));
  lp::Row simplex;
  simplex.relation = lp::Relation::equal;
  simplex.rhs = 1;
  for (std::size_t e = 0; e < n_mu; ++e) simplex.coeffs.push_back({e, Rational(1)});
  prob.rows.push_back(std::move(simplex));
  prob.num_vars = next;
  prob.objective.assign(next, Rational(0));
  prob.objective[t_var] = 1;

  const lp::Solution sol = lp::solve(prob);
  if (sol.status != lp::Status::optimal) {
    throw InvariantViolation("deletion-defect LP did not reach an optimum");
  }
  std::vector<Rational> w(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(n_mu));
  SearchResult result{dist_from_weights(u, w), SearchMethod::lp, sol.value.get_d(), sol.value,
                      Rational(0), sol.pivots, {}};
  result.certificate = deletion_defect(result.mu, u.k());
  if (result.certificate != sol.value) {
    throw InvariantViolation("LP objective " + to_string(sol.value) + " differs from certificate " +
                             to_string(result.certificate));
  }
  return result;
}

namespace {

// Euclidean projection onto the probability simplex.
void project_to_simplex(std::vector<double>& v) {
  std::vector<double> s = v;
  std::sort(s.begin(), s.end(), std::greater<>());
  double cumulative = 0;
  double theta = 0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    cumulative += s[j];
    const double candidate = (cumulative - 1) / static_cast<double>(j + 1);
    if (s[j] - candidate > 0) theta = candidate;
  }
  for (double& x : v) x = std::max(x - theta, 0.0);
}

}  // namespace

SearchResult solve_subgradient(const Universe& u, const SubgradientOptions& options) {
  const DefectLayout layout(u);
  const std::size_t n = u.sets().size();
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.5, 1.5);
  std::vector<double> mu(n);
  for (double& x : mu) x = unit(rng);
  project_to_simplex(mu);

  std::vector<double> best = mu;
  double best_value = 2;
  std::vector<double> history;
  history.reserve(options.iterations);
  std::vector<std::vector<double>> diffs(layout.levels.size());
  std::vector<double> grad(n);

  for (std::size_t it = 0; it < options.iterations; ++it) {
    double worst = -1;
    std::size_t arg = 0;
    for (std::size_t l = 0; l < layout.levels.size(); ++l) {
      const auto& level = layout.levels[l];
      auto& diff = diffs[l];
      diff.assign(level.targets.size(), 0.0);
      for (std::size_t e = 0; e < n; ++e) {
        diff[level.image_of[e]] += mu[e];
        diff[level.self_of[e]] -= mu[e];
      }
      double l1 = 0;
      for (double d : diff) l1 += std::abs(d);
      if (l1 / 2 > worst) {
        worst = l1 / 2;
        arg = l;
      }
    }
    if (worst < best_value) {
      best_value = worst;
      best = mu;
    }
    history.push_back(best_value);

    const auto& level = layout.levels[arg];
    const auto& diff = diffs[arg];
    auto sign = [](double x) { return x > 0 ? 1.0 : x < 0 ? -1.0 : 0.0; };
    for (std::size_t e = 0; e < n; ++e) {
      grad[e] = 0.5 * (sign(diff[level.image_of[e]]) - sign(diff[level.self_of[e]]));
    }
    const double step = options.initial_step / std::sqrt(static_cast<double>(it) + 1);
    for (std::size_t e = 0; e < n; ++e) mu[e] -= step * grad[e];
    project_to_simplex(mu);
  }

  // Exact certificate for the best iterate snapped to a 2^-30 grid.
  std::vector<Rational> w(n);
  Rational total = 0;
  for (std::size_t e = 0; e < n; ++e) {
    w[e] = Rational(static_cast<long>(std::llround(std::ldexp(best[e], 30))), 1L << 30);
    w[e].canonicalize();
    total += w[e];
  }
  if (sgn(total) == 0) {
    throw InvariantViolation("subgradient iterate vanished after snapping to the grid");
  }
  for (auto& x : w) x /= total;

  SearchResult result{dist_from_weights(u, w), SearchMethod::subgradient, best_value, std::nullopt,
                      Rational(0), options.iterations, std::move(history)};
  result.certificate = deletion_defect(result.mu, u.k());
  return result;
}

std::vector<CurvePoint> epsilon_curve(Index k, Index N_min, Index N_max) {
  if (N_min < k || N_max < N_min) throw ValidationError("need k <= N_min <= N_max");
  std::vector<CurvePoint> out;
  for (Index N = N_min; N <= N_max; ++N) {
    const SearchResult r = solve_lp(Universe(N, k));
    if (!out.empty() && *r.exact_objective > out.back().epsilon) {
      throw InvariantViolation("epsilon* increased from N=" + std::to_string(N - 1) + " to N=" +
                               std::to_string(N));
    }
    out.push_back({N, k, *r.exact_objective, r.mu.support_size()});
  }
  return out;
}

FolnerReport folner_defect(const std::vector<CanonSet>& A, const std::vector<Index>& generators) {
  if (A.empty()) throw ValidationError("Folner defect needs a non-empty family");
  const std::set<CanonSet> members(A.begin(), A.end());
  if (members.size() != A.size()) throw ValidationError("Folner family has duplicates");

  std::vector<Index> gens = generators;
  gens.push_back(1);
  gens.push_back(2);
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());

  FolnerReport report;
  const Rational size(static_cast<long>(A.size()));
  for (Index i : gens) {
    std::set<CanonSet> image;
    for (const CanonSet& e : A) image.insert(sigma(i, e));
    long left = 0;
    for (const CanonSet& e : members) left += image.count(e) == 0;
    long right = 0;
    for (const CanonSet& e : image) right += members.count(e) == 0;
    GeneratorDefect d{i, Rational(left) / size, Rational(right) / size};
    if (i <= 2) report.klawe_max = std::max(report.klawe_max, d.left_defect);
    if (std::find(generators.begin(), generators.end(), i) != generators.end() || i <= 2) {
      report.defects.push_back(d);
    }
  }
  report.klawe_pass = report.klawe_max >= Rational(1, 5);
  return report;
}

}  // namespace facial
