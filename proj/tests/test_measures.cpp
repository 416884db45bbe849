#include "doctest.h"

#include <random>

#include "facial/error.hpp"
#include "facial/measures.hpp"
#include "oracles.hpp"

using namespace facial;

namespace {

Rational Q(long n, long d = 1) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

oracle::Law to_law(const Dist& p) {
  oracle::Law out;
  for (const auto& [k, v] : p.atoms()) out[k.vec()] = v;
  return out;
}

Dist random_dist(std::mt19937_64& rng, Index n, std::size_t atoms) {
  std::uniform_int_distribution<unsigned> mask(1, (1u << n) - 1);
  std::uniform_int_distribution<long> w(1, 9);
  Dist::Atoms a;
  Rational total = 0;
  for (std::size_t i = 0; i < atoms; ++i) {
    std::vector<Index> s;
    const unsigned m = mask(rng);
    for (Index b = 0; b < n; ++b)
      if (m & (1u << b)) s.push_back(b + 1);
    const Rational x = w(rng);
    a[CanonSet(s)] += x;
    total += x;
  }
  for (auto& [k, v] : a) v /= total;
  return Dist(a);
}

}  // namespace

TEST_CASE("rational text format") {
  CHECK(to_string(Q(3, 4)) == "3/4");
  CHECK(to_string(Q(2)) == "2/1");
  CHECK(parse_rational("6/8") == Q(3, 4));
  CHECK(parse_rational("5") == Q(5));
  CHECK_THROWS_AS(parse_rational("1/0"), ValidationError);
}

TEST_CASE("distribution invariants") {
  CHECK_THROWS_AS(Dist(Dist::Atoms{{CanonSet{1}, Q(1, 2)}}), ValidationError);
  CHECK_THROWS_AS(Dist(Dist::Atoms{{CanonSet{1}, Q(3, 2)}, {CanonSet{2}, Q(-1, 2)}}), ValidationError);
  const Dist u = Dist::uniform({CanonSet{1}, CanonSet{2}});
  CHECK(u.mass(CanonSet{1}) == Q(1, 2));
  CHECK(u.mass(CanonSet{3}) == 0);
  CHECK(u.probability([](const CanonSet& e) { return e.contains(2); }) == Q(1, 2));
  CHECK(parse_dist(serialize(u)) == u);
}

TEST_CASE("total variation") {
  const Dist a = Dist::point(CanonSet{1});
  const Dist b = Dist::point(CanonSet{2});
  const Dist u = Dist::uniform({CanonSet{1}, CanonSet{2}});
  CHECK(tv(a, a) == 0);
  CHECK(tv(a, b) == 1);
  CHECK(tv(u, a) == Q(1, 2));

  std::mt19937_64 rng(4);
  for (int t = 0; t < 300; ++t) {
    const Dist p = random_dist(rng, 5, 4), q = random_dist(rng, 5, 4), r = random_dist(rng, 5, 4);
    CHECK(tv(p, q) == tv(q, p));
    CHECK(tv(p, q) == oracle::total_variation(to_law(p), to_law(q)));
    CHECK(tv(p, r) <= tv(p, q) + tv(q, r));
    CHECK(tv(p, q) >= 0);
    CHECK(tv(p, q) <= 1);
  }
}

TEST_CASE("pushforward under deletion") {
  CHECK(push_alpha(1, Dist::point(CanonSet{3, 5})) == Dist::point(CanonSet{5}));
  const Dist m = Dist::uniform({CanonSet{1, 2}, CanonSet{1, 3}});
  CHECK(push_alpha(2, m) == Dist::point(CanonSet{1}));
  CHECK_THROWS_AS(push_alpha(3, m), ValidationError);

  std::mt19937_64 rng(8);
  for (int t = 0; t < 200; ++t) {
    const Dist p = random_dist(rng, 6, 5);
    Index smallest = 99;
    for (const auto& [k, v] : p.atoms()) smallest = std::min<Index>(smallest, static_cast<Index>(k.size()));
    if (smallest < 1) continue;
    const Dist pushed = push_alpha(1, p);
    Rational total = 0;
    for (const auto& [k, v] : pushed.atoms()) total += v;
    CHECK(total == 1);
    CHECK(to_law(pushed) == oracle::drop_coordinate(1, to_law(p)));
    // Linearity against mixtures.
    const Dist q = random_dist(rng, 6, 3);
    bool q_ok = true;
    for (const auto& [k, v] : q.atoms()) q_ok &= !k.empty();
    if (!q_ok) continue;
    const Dist mix = mixture({{Q(1, 3), p}, {Q(2, 3), q}});
    CHECK(push_alpha(1, mix) == mixture({{Q(1, 3), push_alpha(1, p)}, {Q(2, 3), push_alpha(1, q)}}));
  }
}

TEST_CASE("walk measures") {
  const Dist w = walk_measure(BaseStep::uniform(1, 2), 2);
  CHECK(w.support_size() == 4);
  for (const CanonSet& e : {CanonSet{1, 2}, CanonSet{1, 3}, CanonSet{2, 3}, CanonSet{2, 4}}) {
    CHECK(w.mass(e) == Q(1, 4));
  }
  CHECK(walk_measure(parse_base_step("point:1"), 3) == Dist::point(CanonSet{1, 2, 3}));
  const Dist w3 = walk_measure(BaseStep::uniform(1, 2), 3);
  CHECK(w3.support_size() == 8);

  std::map<Index, Rational> step{{1, Q(1, 3)}, {2, Q(1, 6)}, {4, Q(1, 2)}};
  for (Index k = 1; k <= 4; ++k) {
    CHECK(to_law(walk_measure(BaseStep(step), k)) == oracle::walk_law(step, static_cast<std::size_t>(k)));
  }
  CHECK_THROWS_AS(walk_measure(BaseStep::uniform(1, 2), 0), ValidationError);
  CHECK_THROWS_AS(walk_measure(BaseStep::uniform(1, 100), 5), ValidationError);
}

TEST_CASE("base step text format") {
  CHECK(parse_base_step("uniform:1..3").atoms().size() == 3);
  CHECK(parse_base_step("1:1/2,3:1/2").cdf(2) == Q(1, 2));
  CHECK(to_string(parse_base_step("1:1/2,3:1/2")) == "1:1/2,3:1/2");
  CHECK_THROWS_AS(parse_base_step("1:1/2"), ValidationError);
  CHECK_THROWS_AS(parse_base_step("0:1"), ValidationError);
}

TEST_CASE("impossibility bound") {
  const auto r = no_random_walk_check(BaseStep::uniform(1, 2), 2);
  CHECK(r.M == 2);
  CHECK(r.nu_k_A == 1);
  CHECK(r.nu_k1_B == Q(1, 4));
  CHECK(r.tv_value == Q(3, 4));
  CHECK(r.passes);
  CHECK(r.chain_holds);

  const auto d = no_random_walk_check(parse_base_step("point:1"), 2);
  CHECK(d.M == 1);
  CHECK(d.tv_value == 1);
  CHECK(d.passes);

  const auto six = no_random_walk_check(BaseStep::uniform(1, 6), 3);
  CHECK(six.tv_value > Q(1, 4));

  // Independent recomputation for a skewed law.
  std::map<Index, Rational> step{{1, Q(2, 3)}, {5, Q(1, 3)}};
  for (Index k = 2; k <= 4; ++k) {
    const auto rep = no_random_walk_check(BaseStep(step), k);
    const auto lhs = oracle::drop_coordinate(1, oracle::walk_law(step, static_cast<std::size_t>(k + 1)));
    CHECK(rep.tv_value == oracle::total_variation(lhs, oracle::walk_law(step, static_cast<std::size_t>(k))));
    CHECK(rep.tv_value >= rep.event_gap);
    CHECK(rep.passes);
  }
}

TEST_CASE("mixtures") {
  const Dist p = Dist::point(CanonSet{1});
  CHECK(mixture({{Q(1), p}}) == p);
  CHECK(mixture({{Q(1, 2), p}, {Q(1, 2), Dist::point(CanonSet{2})}}).support_size() == 2);
  CHECK_THROWS_AS(mixture({{Q(1, 2), p}}), ValidationError);
  const Dist ces = mixture({{Q(1, 2), walk_measure(BaseStep::uniform(1, 2), 3)},
                            {Q(1, 2), walk_measure(BaseStep::uniform(1, 2), 4)}});
  CHECK(ces.support_size() == 24);
  CHECK(ces.mass(CanonSet{1, 2, 3}) == Q(1, 16));
  CHECK(ces.mass(CanonSet{1, 2, 3, 4}) == Q(1, 32));
}

TEST_CASE("partial products") {
  // With + this is the walk law, for non-identical steps too.
  const BaseStep a = BaseStep::uniform(1, 2);
  const BaseStep b = parse_base_step("point:3");
  const Dist p = partial_product_law({a, b}, [](Index x, Index y) { return x + y; });
  CHECK(p == Dist::uniform({CanonSet{1, 4}, CanonSet{2, 5}}));
  const Dist m = partial_product_law({parse_base_step("uniform:2..3"), parse_base_step("point:2")},
                                     [](Index x, Index y) { return x * y; });
  CHECK(m == Dist::uniform({CanonSet{2, 4}, CanonSet{3, 6}}));
  CHECK_THROWS_AS(partial_product_law({a, a}, [](Index x, Index) { return x; }), ValidationError);
}
