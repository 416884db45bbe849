#include "doctest.h"

#include <cmath>

#include "facial/error.hpp"
#include "facial/tower.hpp"

using namespace facial;

namespace {

Rational Q(long n, long d = 1) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

TowerConfig level_one(Index m, std::vector<Rational> r) {
  TowerConfig cfg;
  cfg.n = 1;
  cfg.k = 2;
  cfg.m = m;
  cfg.r = std::move(r);
  return cfg;
}

}  // namespace

TEST_CASE("config parsing and validation") {
  const TowerConfig cfg = parse_tower_config("k=2\nn=1 # half width\nm=8\nC=4\n");
  CHECK(cfg.m == 8);
  CHECK(cfg.C == 4);
  CHECK(parse_tower_config(to_string(cfg)).m == 8);
  CHECK(parse_tower_config("r=3,1\n").r->size() == 2);
  CHECK_THROWS_AS(parse_tower_config("q=1"), ValidationError);
  CHECK_THROWS_AS(parse_tower_config("m"), ValidationError);

  TowerConfig bad;
  bad.k = 3;
  CHECK_THROWS_AS(validate(bad), ValidationError);
  bad = TowerConfig{};
  bad.m = 2000;
  CHECK_THROWS_AS(validate(bad), ValidationError);
  bad = TowerConfig{};
  bad.C = Q(1, 2);
  CHECK_THROWS_AS(validate(bad), ValidationError);
  // 2 < e^1, so the schedule condition fails.
  CHECK_THROWS_AS(validate(level_one(4, {Q(2), Q(1)})), ValidationError);
  CHECK_NOTHROW(validate(level_one(4, {Q(3), Q(1)})));
}

TEST_CASE("default schedule") {
  const Tower t(TowerConfig{});
  const auto s = t.schedule();
  REQUIRE(s.size() == 2);
  // r_1 = exp(2) + 1.
  CHECK(std::stod(s[0]) == doctest::Approx(std::exp(2.0) + 1).epsilon(1e-9));
  CHECK(std::stod(s[1]) == doctest::Approx(2.0));
}

TEST_CASE("values and comparison at level one") {
  const Tower t(level_one(2, {Q(3), Q(1)}));
  const TowerValue a = t.value({1});
  const TowerValue b = t.value({2});
  // z = exp(exp(3/4)) ~ 8.3 and exp(exp(9/4)) ~ 1.3e4.
  const auto [lo, hi] = a.loglog_bounds();
  CHECK(lo <= 0.75);
  CHECK(hi >= 0.75);
  CHECK(hi - lo < 1e-12);
  CHECK(compare(a, a) == TowerOrder::equal_floor);
  CHECK(compare(a, t.value({1})) == TowerOrder::equal_floor);
  CHECK(compare(a, b) == TowerOrder::less);
  CHECK(compare(b, a) == TowerOrder::greater);
  CHECK(a.symbolic().find("y1") != std::string::npos);
  CHECK_THROWS_AS(t.value({3}), ValidationError);
  CHECK_THROWS_AS(t.value({}), ValidationError);
  const Tower other(level_one(2, {Q(3), Q(1)}));
  CHECK_THROWS_AS(compare(a, other.value({1})), ValidationError);
}

TEST_CASE("same floor is detected") {
  // exp(exp(r x)) for x = 1/64, 3/64 with r = 11/10 both lie in [2, 3).
  const Tower t(level_one(32, {Q(11, 10), Q(1, 100)}));
  CHECK(compare(t.value({1}), t.value({2})) == TowerOrder::distinct_same_floor);
  const double z1 = std::exp(std::exp(1.1 / 64));
  const double z2 = std::exp(std::exp(1.1 * 3 / 64));
  CHECK(std::floor(z1) == std::floor(z2));
}

TEST_CASE("level two pairs at the default schedule are certified") {
  TowerConfig cfg;
  cfg.m = 6;
  const Tower t(cfg);
  const auto tuples = grid_tuples(6, 2);
  std::vector<TowerValue> vals;
  for (const auto& g : tuples) vals.push_back(t.value(g));
  for (std::size_t a = 0; a < vals.size(); ++a) {
    for (std::size_t b = a + 1; b < vals.size(); ++b) {
      const TowerOrder o = compare(vals[a], vals[b]);
      CHECK((o == TowerOrder::less || o == TowerOrder::greater));
      // Antisymmetry.
      const TowerOrder r = compare(vals[b], vals[a]);
      CHECK(r == (o == TowerOrder::less ? TowerOrder::greater : TowerOrder::less));
    }
  }
  // Transitivity over mixed levels.
  std::vector<TowerValue> mixed;
  for (Index j = 1; j <= 6; ++j) mixed.push_back(t.value({j}));
  for (std::size_t i = 0; i < 12; ++i) mixed.push_back(vals[i * 3]);
  for (const auto& x : mixed)
    for (const auto& y : mixed)
      for (const auto& z : mixed) {
        if (compare(x, y) == TowerOrder::less && compare(y, z) == TowerOrder::less) {
          CHECK(compare(x, z) == TowerOrder::less);
        }
      }
}

TEST_CASE("floor classes and laws") {
  CHECK(grid_tuples(3, 2).size() == 9);
  CHECK(grid_tuples(3, 0).size() == 1);
  TowerConfig cfg;
  cfg.m = 4;
  const Tower t(cfg);
  std::vector<std::vector<Index>> prefixes = grid_tuples(4, 1);
  for (const auto& g : grid_tuples(4, 2)) prefixes.push_back(g);
  const FloorClasses classes(t, prefixes);
  CHECK(classes.num_classes() == 20);

  CHECK(tower_law(cfg, 0) == Dist::point(CanonSet{}));
  const Dist one = tower_law(t, classes, 1);
  CHECK(one.support_size() == 4);
  const Dist two = tower_law(t, classes, 2);
  CHECK(two.support_size() == 16);
  CHECK(tower_law(cfg, 2) == tower_law(cfg, 2));

  // Deleting a coordinate after identification equals identifying the
  // deleted tuple.
  for (Index i = 1; i <= 2; ++i) {
    Dist::Atoms expect;
    for (const auto& g : grid_tuples(4, 2)) {
      std::vector<Index> ranks{classes.rank({g[0]}), classes.rank(g)};
      ranks.erase(ranks.begin() + (i - 1));
      expect[CanonSet(ranks)] += Q(1, 16);
    }
    CHECK(push_alpha(i, two) == Dist(expect));
  }
  CHECK_THROWS_AS(classes.rank({9}), ValidationError);
}

TEST_CASE("degenerate grid") {
  TowerConfig cfg;
  cfg.m = 1;
  const TowerReport r = tower_defect(cfg);
  CHECK_FALSE(r.inconclusive);
  REQUIRE(r.deletion_tv.size() == 2);
  for (const auto& v : r.deletion_tv) CHECK((v == 0 || v == 1));
  for (const auto& mg : r.marginals) {
    CHECK((mg.floor_tv == 0 || mg.floor_tv == 1));
    CHECK((mg.binned_tv == 0 || mg.binned_tv == 1));
  }
}

TEST_CASE("defect report and sweep") {
  TowerConfig cfg;
  cfg.m = 8;
  const TowerReport r = tower_defect(cfg);
  CHECK_FALSE(r.inconclusive);
  CHECK(r.ambiguous == 0);
  REQUIRE(r.deletion_tv.size() == 2);
  REQUIRE(r.marginals.size() == 1);
  CHECK(r.marginals[0].i == 1);
  CHECK(r.marginals[0].j == 2);
  CHECK(r.values == 8 + 64);
  const std::string tsv = report_tsv(r);
  CHECK(tsv.rfind("level\ti\ttv\tstatus\n", 0) == 0);
  CHECK(tsv.find("alpha\t1\t") != std::string::npos);
  CHECK(tsv.find("marginal-binned") != std::string::npos);

  const auto sweep = schedule_sweep(cfg, {Q(1), Q(4), Q(16)});
  REQUIRE(sweep.size() == 3);
  CHECK(sweep[0].config.C == 1);
  CHECK(sweep[2].config.C == 16);
  CHECK(std::stod(sweep[2].schedule[0]) > std::stod(sweep[0].schedule[0]));
}
