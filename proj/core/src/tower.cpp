#include "facial/tower.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include <mpfr.h>

#include "facial/error.hpp"

namespace facial {

namespace {

class Real {
 public:
  explicit Real(long prec) { mpfr_init2(v_, prec); }
  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(Real o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

// Closed interval [lo, hi] with outward rounding.
struct Interval {
  Real lo;
  Real hi;
  explicit Interval(long prec) : lo(prec), hi(prec) {
    mpfr_set_zero(lo.get(), 1);
    mpfr_set_zero(hi.get(), 1);
  }
};

void require_finite(const Interval& a) {
  if (!mpfr_number_p(a.lo.get()) || !mpfr_number_p(a.hi.get())) {
    throw ValidationError("tower value leaves the floating-point exponent range; reduce n or the schedule");
  }
}

Interval from_rational(const Rational& q, long prec) {
  Interval out(prec);
  mpfr_set_q(out.lo.get(), q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(out.hi.get(), q.get_mpq_t(), MPFR_RNDU);
  return out;
}

Interval add(const Interval& a, const Interval& b, long prec) {
  Interval out(prec);
  mpfr_add(out.lo.get(), a.lo.get(), b.lo.get(), MPFR_RNDD);
  mpfr_add(out.hi.get(), a.hi.get(), b.hi.get(), MPFR_RNDU);
  return out;
}

// Both factors non-negative.
Interval mul(const Interval& a, const Interval& b, long prec) {
  Interval out(prec);
  mpfr_mul(out.lo.get(), a.lo.get(), b.lo.get(), MPFR_RNDD);
  mpfr_mul(out.hi.get(), a.hi.get(), b.hi.get(), MPFR_RNDU);
  return out;
}

Interval exp(const Interval& a, long prec) {
  Interval out(prec);
  mpfr_exp(out.lo.get(), a.lo.get(), MPFR_RNDD);
  mpfr_exp(out.hi.get(), a.hi.get(), MPFR_RNDU);
  require_finite(out);
  return out;
}

// Floor of the interval if both ends agree.
std::optional<Real> common_floor(const Interval& a, long prec) {
  Real lo(prec);
  Real hi(prec);
  mpfr_floor(lo.get(), a.lo.get());
  mpfr_floor(hi.get(), a.hi.get());
  if (!mpfr_equal_p(lo.get(), hi.get())) return std::nullopt;
  return lo;
}

// Values with log log z below this are floored directly.
constexpr double kDirectLogLog = 6.0;

Index checked_power(Index m, Index e) {
  Index out = 1;
  for (Index i = 0; i < e; ++i) {
    if (out > kMaxTowerTuples / m) return kMaxTowerTuples + 1;
    out *= m;
  }
  return out;
}

std::string decimal(const Interval& a) {
  Real mid(mpfr_get_prec(a.lo.get()));
  mpfr_add(mid.get(), a.lo.get(), a.hi.get(), MPFR_RNDN);
  mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
  char* text = nullptr;
  mpfr_asprintf(&text, "%.10Rg", mid.get());
  std::string out(text);
  mpfr_free_str(text);
  return out;
}

}  // namespace

struct TowerValue::Impl {
  TowerConfig cfg;
  std::map<long, std::vector<Interval>> schedules;
  std::map<std::vector<Index>, Interval> base_cache;
  TowerStats stats;

  explicit Impl(TowerConfig c) : cfg(std::move(c)) {}

  const std::vector<Interval>& schedule(long prec) {
    auto it = schedules.find(prec);
    if (it != schedules.end()) return it->second;
    const std::size_t len = static_cast<std::size_t>(2 * cfg.n);
    std::vector<Interval> r;
    if (cfg.r) {
      for (const Rational& q : *cfg.r) r.push_back(from_rational(q, prec));
    } else {
      std::vector<Interval> rev;
      rev.push_back(from_rational(cfg.r_last, prec));
      const Interval C = from_rational(cfg.C, prec);
      const Interval one = from_rational(Rational(1), prec);
      while (rev.size() < len) rev.push_back(add(mul(C, exp(rev.back(), prec), prec), one, prec));
      r.assign(std::make_move_iterator(rev.rbegin()), std::make_move_iterator(rev.rend()));
    }
    return schedules.emplace(prec, std::move(r)).first->second;
  }

  Interval x(Index j, long prec) const { return from_rational(Rational(2 * j - 1, 2 * cfg.m), prec); }

  Interval loglog(const std::vector<Index>& g, long prec) {
    const bool base = prec == cfg.precision;
    if (base) {
      auto it = base_cache.find(g);
      if (it != base_cache.end()) return it->second;
    }
    const auto& r = schedule(prec);
    Interval u(prec);
    for (std::size_t l = g.size(); l >= 2; --l) {
      u = exp(add(mul(r[l - 1], x(g[l - 1], prec), prec), u, prec), prec);
    }
    Interval L = add(mul(r[0], x(g[0], prec), prec), u, prec);
    require_finite(L);
    if (base) base_cache.emplace(g, L);
    return L;
  }

  long next_precision(long prec) const { return std::min(prec * 2, cfg.max_precision); }
};

TowerConfig parse_tower_config(std::string_view text) {
  TowerConfig cfg;
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
  };
  auto integer = [](std::string_view key, std::string_view v) {
    long out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
      throw ValidationError("tower config: '" + std::string(key) + "' needs an integer");
    }
    return out;
  };
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ValidationError("tower config: expected key=value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key == "k") {
      cfg.k = integer(key, value);
    } else if (key == "n") {
      cfg.n = integer(key, value);
    } else if (key == "m") {
      cfg.m = integer(key, value);
    } else if (key == "C") {
      cfg.C = parse_rational(value);
    } else if (key == "r_last") {
      cfg.r_last = parse_rational(value);
    } else if (key == "precision") {
      cfg.precision = integer(key, value);
    } else if (key == "max_precision") {
      cfg.max_precision = integer(key, value);
    } else if (key == "r") {
      std::vector<Rational> r;
      std::string_view rest = value;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        r.push_back(parse_rational(trim(rest.substr(0, comma))));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
      }
      cfg.r = std::move(r);
    } else {
      throw ValidationError("tower config: unknown key '" + std::string(key) + "'");
    }
  }
  validate(cfg);
  return cfg;
}

std::string to_string(const TowerConfig& cfg) {
  std::ostringstream out;
  out << "k=" << cfg.k << "\nn=" << cfg.n << "\nm=" << cfg.m << "\nC=" << cfg.C.get_str()
      << "\nr_last=" << cfg.r_last.get_str() << '\n';
  if (cfg.r) {
    out << "r=";
    for (std::size_t i = 0; i < cfg.r->size(); ++i) out << (i ? "," : "") << (*cfg.r)[i].get_str();
    out << '\n';
  }
  out << "precision=" << cfg.precision << "\nmax_precision=" << cfg.max_precision << '\n';
  return out.str();
}

void validate(const TowerConfig& cfg) {
  if (cfg.n < 1) throw ValidationError("tower config: n must be at least 1");
  if (cfg.m < 1) throw ValidationError("tower config: m must be at least 1");
  if (cfg.k < 1 || cfg.k > cfg.n + 1) {
    throw ValidationError("tower config: k must lie in [1, n+1] so every deletion is defined");
  }
  if (checked_power(cfg.m, 2 * cfg.n) > kMaxTowerTuples) {
    throw ValidationError("tower config: m^(2n) grid tuples exceed the guardrail of 10^6");
  }
  if (cfg.C < 1) throw ValidationError("tower config: C must be at least 1");
  if (cfg.r_last <= 0) throw ValidationError("tower config: r_last must be positive");
  if (cfg.precision < 64 || cfg.max_precision < cfg.precision || cfg.max_precision > (1L << 20)) {
    throw ValidationError("tower config: need 64 <= precision <= max_precision <= 2^20");
  }
  if (!cfg.r) return;
  const auto& r = *cfg.r;
  if (static_cast<Index>(r.size()) != 2 * cfg.n) {
    throw ValidationError("tower config: schedule r needs exactly 2n entries");
  }
  const long prec = cfg.precision;
  const Interval C = from_rational(cfg.C, prec);
  for (std::size_t l = 0; l < r.size(); ++l) {
    if (r[l] <= 0) throw ValidationError("tower config: schedule entries must be positive");
    if (l == 0) continue;
    const Interval bound = mul(C, exp(from_rational(r[l], prec), prec), prec);
    const Interval prev = from_rational(r[l - 1], prec);
    if (mpfr_less_p(prev.lo.get(), bound.hi.get())) {
      throw ValidationError("tower config: schedule violates r_{l-1} >= C exp(r_l) at l=" +
                            std::to_string(l + 1));
    }
  }
}

std::string to_string(TowerOrder o) {
  switch (o) {
    case TowerOrder::less: return "less";
    case TowerOrder::equal_floor: return "equal_floor";
    case TowerOrder::greater: return "greater";
    case TowerOrder::distinct_same_floor: return "distinct_same_floor";
  }
  return "?";
}

std::string TowerValue::symbolic() const {
  std::string expr;
  for (std::size_t l = grid_.size(); l >= 1; --l) {
    const std::string y = "y" + std::to_string(l);
    expr = expr.empty() ? y : y + "^(" + expr + ")";
  }
  std::string at;
  for (Index j : grid_) at += (at.empty() ? "" : ",") + std::to_string(j);
  return expr + " @ (" + at + ")";
}

std::pair<double, double> TowerValue::loglog_bounds() const {
  const Interval L = impl_->loglog(grid_, impl_->cfg.precision);
  return {mpfr_get_d(L.lo.get(), MPFR_RNDD), mpfr_get_d(L.hi.get(), MPFR_RNDU)};
}

namespace {

// b - a >= a e^{La} (Lb - La), so b - a >= 1 once e^{La} + La + log(Lb - La) >= 0.
bool gap_at_least_one(const Interval& La, const Interval& Lb, long prec) {
  Real gap(prec);
  mpfr_sub(gap.get(), Lb.lo.get(), La.hi.get(), MPFR_RNDD);
  if (mpfr_sgn(gap.get()) <= 0) return false;
  Real t(prec);
  Real s(prec);
  mpfr_log(s.get(), gap.get(), MPFR_RNDD);
  mpfr_exp(t.get(), La.lo.get(), MPFR_RNDD);
  mpfr_add(t.get(), t.get(), La.lo.get(), MPFR_RNDD);
  mpfr_add(t.get(), t.get(), s.get(), MPFR_RNDD);
  return mpfr_sgn(t.get()) >= 0;
}

}  // namespace

TowerOrder compare(const TowerValue& a, const TowerValue& b) {
  if (a.impl_ != b.impl_) throw ValidationError("compared tower values come from different towers");
  auto& impl = *a.impl_;
  ++impl.stats.comparisons;
  if (a.grid_ == b.grid_) return TowerOrder::equal_floor;

  for (long prec = impl.cfg.precision;; prec = impl.next_precision(prec)) {
    if (prec != impl.cfg.precision) ++impl.stats.escalations;
    const Interval La = impl.loglog(a.grid_, prec);
    const Interval Lb = impl.loglog(b.grid_, prec);
    if (mpfr_cmp_d(La.hi.get(), kDirectLogLog) < 0 && mpfr_cmp_d(Lb.hi.get(), kDirectLogLog) < 0) {
      const auto fa = common_floor(exp(exp(La, prec), prec), prec);
      const auto fb = common_floor(exp(exp(Lb, prec), prec), prec);
      if (fa && fb) {
        const int c = mpfr_cmp(fa->get(), fb->get());
        return c < 0 ? TowerOrder::less : c > 0 ? TowerOrder::greater : TowerOrder::distinct_same_floor;
      }
    } else if (mpfr_less_p(La.hi.get(), Lb.lo.get())) {
      if (gap_at_least_one(La, Lb, prec)) return TowerOrder::less;
    } else if (mpfr_less_p(Lb.hi.get(), La.lo.get())) {
      if (gap_at_least_one(Lb, La, prec)) return TowerOrder::greater;
    }
    if (prec >= impl.cfg.max_precision) break;
  }
  throw AmbiguousComparison("cannot separate " + a.symbolic() + " and " + b.symbolic() + " at " +
                            std::to_string(impl.cfg.max_precision) + " bits");
}

Tower::Tower(TowerConfig cfg) {
  validate(cfg);
  impl_ = std::make_shared<TowerValue::Impl>(std::move(cfg));
}

const TowerConfig& Tower::config() const { return impl_->cfg; }

std::vector<std::string> Tower::schedule() const {
  std::vector<std::string> out;
  for (const Interval& r : impl_->schedule(impl_->cfg.precision)) out.push_back(decimal(r));
  return out;
}

TowerValue Tower::value(std::vector<Index> grid) const {
  if (grid.empty() || static_cast<Index>(grid.size()) > 2 * impl_->cfg.n) {
    throw ValidationError("tower value needs between 1 and 2n grid indices");
  }
  for (Index j : grid) {
    if (j < 1 || j > impl_->cfg.m) throw ValidationError("grid index outside [1..m]");
  }
  return TowerValue(impl_, std::move(grid));
}

Index Tower::loglog_bin(const TowerValue& v) const {
  if (v.impl_ != impl_) throw ValidationError("tower value comes from a different tower");
  auto& impl = *impl_;
  for (long prec = impl.cfg.precision;; prec = impl.next_precision(prec)) {
    if (prec != impl.cfg.precision) ++impl.stats.escalations;
    const Interval L = impl.loglog(v.grid_, prec);
    const Interval& r1 = impl.schedule(prec)[0];
    Interval q(prec);
    mpfr_mul_si(q.lo.get(), L.lo.get(), impl.cfg.m, MPFR_RNDD);
    mpfr_div(q.lo.get(), q.lo.get(), r1.hi.get(), MPFR_RNDD);
    mpfr_mul_si(q.hi.get(), L.hi.get(), impl.cfg.m, MPFR_RNDU);
    mpfr_div(q.hi.get(), q.hi.get(), r1.lo.get(), MPFR_RNDU);
    if (auto f = common_floor(q, prec)) {
      if (!mpfr_fits_slong_p(f->get(), MPFR_RNDN)) throw ValidationError("log log bin out of range");
      return mpfr_get_si(f->get(), MPFR_RNDN);
    }
    if (prec >= impl.cfg.max_precision) break;
  }
  throw AmbiguousComparison("cannot bin " + v.symbolic() + " at " +
                            std::to_string(impl.cfg.max_precision) + " bits");
}

TowerStats Tower::stats() const { return impl_->stats; }

FloorClasses::FloorClasses(const Tower& tower, const std::vector<std::vector<Index>>& prefixes) {
  std::vector<TowerValue> values;
  std::vector<std::vector<Index>> unique = prefixes;
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  for (auto& p : unique) values.push_back(tower.value(p));
  std::sort(values.begin(), values.end(), [](const TowerValue& a, const TowerValue& b) {
    return compare(a, b) == TowerOrder::less;
  });
  Index rank = 0;
  for (std::size_t v = 0; v < values.size(); ++v) {
    if (v == 0) {
      rank = 1;
    } else {
      const TowerOrder o = compare(values[v - 1], values[v]);
      if (o == TowerOrder::greater) throw InvariantViolation("floor classes are not sorted");
      if (o == TowerOrder::less) ++rank;
    }
    ranks_.emplace_back(values[v].grid_indices(), rank);
  }
  classes_ = static_cast<std::size_t>(rank);
  std::sort(ranks_.begin(), ranks_.end());
}

Index FloorClasses::rank(const std::vector<Index>& prefix) const {
  auto it = std::lower_bound(ranks_.begin(), ranks_.end(), prefix,
                             [](const auto& entry, const auto& key) { return entry.first < key; });
  if (it == ranks_.end() || it->first != prefix) throw ValidationError("prefix has no floor class");
  return it->second;
}

std::vector<std::vector<Index>> grid_tuples(Index m, Index len) {
  if (m < 1 || len < 0) throw ValidationError("grid needs m >= 1 and len >= 0");
  if (checked_power(m, len) > kMaxTowerTuples) throw ValidationError("m^len exceeds the guardrail of 10^6");
  std::vector<std::vector<Index>> out{{}};
  for (Index l = 0; l < len; ++l) {
    std::vector<std::vector<Index>> next;
    next.reserve(out.size() * static_cast<std::size_t>(m));
    for (const auto& t : out) {
      for (Index j = 1; j <= m; ++j) {
        next.push_back(t);
        next.back().push_back(j);
      }
    }
    out = std::move(next);
  }
  return out;
}

namespace {

std::vector<std::vector<Index>> prefixes_up_to(Index m, Index len) {
  std::vector<std::vector<Index>> out;
  for (Index l = 1; l <= len; ++l) {
    auto level = grid_tuples(m, l);
    out.insert(out.end(), std::make_move_iterator(level.begin()), std::make_move_iterator(level.end()));
  }
  return out;
}

}  // namespace

Dist tower_law(const Tower& tower, const FloorClasses& classes, Index length) {
  const TowerConfig& cfg = tower.config();
  if (length < 0 || length > 2 * cfg.n) throw ValidationError("tower law length must lie in [0, 2n]");
  if (length == 0) return Dist::point(CanonSet{});
  const auto tuples = grid_tuples(cfg.m, length);
  const Rational w(1, static_cast<unsigned long>(tuples.size()));
  Dist::Atoms atoms;
  for (const auto& t : tuples) {
    std::vector<Index> floors;
    std::vector<Index> prefix;
    for (Index j : t) {
      prefix.push_back(j);
      floors.push_back(classes.rank(prefix));
      if (floors.size() >= 2 && floors[floors.size() - 2] >= floors.back()) {
        throw InvariantViolation("consecutive tower floors are not increasing at " +
                                 tower.value(prefix).symbolic());
      }
    }
    atoms[CanonSet(std::move(floors))] += w;
  }
  return Dist(std::move(atoms));
}

Dist tower_law(const TowerConfig& cfg, Index length) {
  const Tower tower(cfg);
  if (length == 0) return Dist::point(CanonSet{});
  const FloorClasses classes(tower, prefixes_up_to(cfg.m, length));
  return tower_law(tower, classes, length);
}

TowerReport tower_defect(const TowerConfig& cfg) {
  const Tower tower(cfg);
  TowerReport report;
  report.config = cfg;
  report.schedule = tower.schedule();
  try {
    const auto prefixes = prefixes_up_to(cfg.m, 2 * cfg.n);
    report.values = prefixes.size();
    const FloorClasses classes(tower, prefixes);
    report.floor_classes = classes.num_classes();

    std::vector<std::pair<Rational, Dist>> parts;
    for (Index len = cfg.n + 1; len <= 2 * cfg.n; ++len) {
      parts.emplace_back(Rational(1, static_cast<unsigned long>(cfg.n)), tower_law(tower, classes, len));
    }
    const Dist mu = mixture(parts);
    for (Index i = 1; i <= cfg.k; ++i) report.deletion_tv.push_back(tv(push_alpha(i, mu), mu));

    std::vector<Dist> floor_laws;
    std::vector<Dist> bin_laws;
    for (Index l = 1; l <= cfg.n + 1; ++l) {
      const auto tuples = grid_tuples(cfg.m, l);
      const Rational w(1, static_cast<unsigned long>(tuples.size()));
      Dist::Atoms floors;
      Dist::Atoms bins;
      for (const auto& t : tuples) {
        floors[CanonSet{classes.rank(t)}] += w;
        bins[CanonSet{tower.loglog_bin(tower.value(t)) + 1}] += w;
      }
      floor_laws.emplace_back(std::move(floors));
      bin_laws.emplace_back(std::move(bins));
    }
    for (Index i = 1; i <= cfg.n + 1; ++i) {
      for (Index j = i + 1; j <= cfg.n + 1; ++j) {
        report.marginals.push_back({i, j, tv(floor_laws[i - 1], floor_laws[j - 1]),
                                    tv(bin_laws[i - 1], bin_laws[j - 1])});
      }
    }
  } catch (const AmbiguousComparison& e) {
    report.inconclusive = true;
    report.ambiguous = 1;
    report.message = e.what();
  }
  const TowerStats stats = tower.stats();
  report.comparisons = stats.comparisons;
  report.escalations = stats.escalations;
  return report;
}

std::vector<TowerReport> schedule_sweep(const TowerConfig& base, const std::vector<Rational>& Cs) {
  std::vector<TowerReport> out;
  for (const Rational& C : Cs) {
    TowerConfig cfg = base;
    cfg.C = C;
    cfg.r.reset();
    out.push_back(tower_defect(cfg));
  }
  return out;
}

std::string report_tsv(const TowerReport& report) {
  std::ostringstream out;
  const std::string status = report.inconclusive ? "ambiguous" : "exact";
  out << "level\ti\ttv\tstatus\n";
  if (report.inconclusive) {
    out << "alpha\t-\t-\tambiguous\n";
    return out.str();
  }
  for (std::size_t i = 0; i < report.deletion_tv.size(); ++i) {
    out << "alpha\t" << i + 1 << '\t' << to_string(report.deletion_tv[i]) << '\t' << status << '\n';
  }
  for (const auto& mg : report.marginals) {
    out << "marginal-floor\t" << mg.i << '-' << mg.j << '\t' << to_string(mg.floor_tv) << '\t' << status
        << '\n';
    out << "marginal-binned\t" << mg.i << '-' << mg.j << '\t' << to_string(mg.binned_tv) << '\t'
        << status << '\n';
  }
  return out.str();
}

}  // namespace facial
