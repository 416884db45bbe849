#pragma once

// EXPERIMENTAL. Grid-discretized exponential towers.
//
// For grid points x_l = (2 j_l - 1) / (2m) put y_l = exp(exp(r_l x_l)) and
//
//   z_i = y_1 ^ (y_2 ^ ( ... ^ y_i)).
//
// The z_i are far too large to write down, so each value is carried as its
// grid prefix (j_1, ..., j_i) together with a rigorous MPFR enclosure of
//
//   log log z_i = r_1 x_1 + u_2,   u_l = exp(r_l x_l + u_{l+1}),   u_{i+1} = 0.
//
// Floors are never materialised: values are sorted with certified
// comparisons and replaced by the rank of their floor class, which is an
// order isomorphism on floors and therefore preserves every TV distance.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "facial/measures.hpp"

namespace facial {

struct TowerConfig {
  Index k = 2;  // deletion indices measured: 1..k
  Index n = 1;  // Cesaro mixture over tuple lengths n+1..2n
  Index m = 16;  // grid resolution
  // Schedule r_1 > ... > r_{2n}. Either explicit, or generated from
  // r_{2n} = r_last and r_{l-1} = C exp(r_l) + 1.
  Rational C = 1;
  Rational r_last = 2;
  std::optional<std::vector<Rational>> r;
  long precision = 256;
  long max_precision = 16384;
};

inline constexpr std::int64_t kMaxTowerTuples = 1'000'000;

// Plain key=value lines: k, n, m, C, r_last, r (comma separated), precision,
// max_precision. '#' starts a comment.
TowerConfig parse_tower_config(std::string_view text);
std::string to_string(const TowerConfig& cfg);
void validate(const TowerConfig& cfg);

class Tower;
class TowerValue;

enum class TowerOrder { less, equal_floor, greater, distinct_same_floor };
std::string to_string(TowerOrder o);

// Identical grid prefixes give equal_floor. Otherwise the order is certified
// from interval enclosures, together with either a proof that the values
// differ by at least 1 or exact floors. Precision doubles up to
// max_precision; after that AmbiguousComparison is thrown.
TowerOrder compare(const TowerValue& a, const TowerValue& b);

class TowerValue {
 public:
  const std::vector<Index>& grid_indices() const { return grid_; }
  Index level() const { return static_cast<Index>(grid_.size()); }
  // y1^(y2^(y3)) style expression.
  std::string symbolic() const;
  // Enclosure of log log z at the configured starting precision.
  std::pair<double, double> loglog_bounds() const;

 private:
  friend class Tower;
  friend TowerOrder compare(const TowerValue& a, const TowerValue& b);
  struct Impl;
  TowerValue(std::shared_ptr<Impl> impl, std::vector<Index> grid)
      : impl_(std::move(impl)), grid_(std::move(grid)) {}
  std::shared_ptr<Impl> impl_;
  std::vector<Index> grid_;
};

struct TowerStats {
  std::size_t comparisons = 0;
  std::size_t escalations = 0;
};

class Tower {
 public:
  explicit Tower(TowerConfig cfg);

  const TowerConfig& config() const;
  // Decimal renderings of r_1..r_{2n}.
  std::vector<std::string> schedule() const;
  TowerValue value(std::vector<Index> grid) const;
  // floor(log log z * m / r_1), certified.
  Index loglog_bin(const TowerValue& v) const;
  TowerStats stats() const;

 private:
  std::shared_ptr<TowerValue::Impl> impl_;
};

// Ranks of floor classes for a family of values: equal ranks iff equal
// floors, and ranks increase with the floors.
class FloorClasses {
 public:
  FloorClasses(const Tower& tower, const std::vector<std::vector<Index>>& prefixes);
  Index rank(const std::vector<Index>& prefix) const;
  std::size_t num_classes() const { return classes_; }

 private:
  std::vector<std::pair<std::vector<Index>, Index>> ranks_;  // sorted by prefix
  std::size_t classes_ = 0;
};

// Every grid tuple in [1..m]^len, lexicographic.
std::vector<std::vector<Index>> grid_tuples(Index m, Index len);

// Law of (floor z_1, ..., floor z_len) under the uniform grid, with floors
// replaced by class ranks.
Dist tower_law(const TowerConfig& cfg, Index length);
Dist tower_law(const Tower& tower, const FloorClasses& classes, Index length);

struct TowerMarginal {
  Index i = 0;
  Index j = 0;
  Rational floor_tv;   // TV of the laws of floor z_i and floor z_j
  Rational binned_tv;  // TV of the laws of the log log bins of z_i and z_j
};

struct TowerReport {
  TowerConfig config;
  std::vector<std::string> schedule;
  std::vector<Rational> deletion_tv;  // entry i-1 is tv(alpha_i mu, mu)
  std::vector<TowerMarginal> marginals;  // pairs i < j in 1..n+1
  std::size_t values = 0;
  std::size_t floor_classes = 0;
  std::size_t comparisons = 0;
  std::size_t escalations = 0;
  std::size_t ambiguous = 0;
  bool inconclusive = false;
  std::string message;
};

TowerReport tower_defect(const TowerConfig& cfg);

// One report per C, with the schedule regenerated from r_last.
std::vector<TowerReport> schedule_sweep(const TowerConfig& base, const std::vector<Rational>& Cs);

// `level  i  tv  status` lines.
std::string report_tsv(const TowerReport& report);

}  // namespace facial
