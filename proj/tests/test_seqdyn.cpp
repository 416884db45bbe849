#include "doctest.h"

#include <random>
#include <set>

#include "facial/error.hpp"
#include "facial/seqdyn.hpp"

using namespace facial;

namespace {

Rational Q(long n, long d = 1) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

Window win(std::vector<Index> e, Index x = 3) { return Window(x, std::move(e)); }

// mu(s_i^{-1} E) by listing every window of length L.
Rational preimage_mass(const CylinderMeasure& cm, Index i, const std::set<std::vector<Index>>& event) {
  Rational total = 0;
  for (const Window& w : all_windows(cm.alphabet_size(), cm.length())) {
    std::vector<Index> d = w.entries();
    d.erase(d.begin() + (i - 1));
    if (!event.count(d)) continue;
    Rational p = 1;
    for (Index s : w.entries()) p *= cm.eta()[static_cast<std::size_t>(s)];
    total += p;
  }
  return total;
}

}  // namespace

TEST_CASE("windows") {
  CHECK(parse_window("0,2,1", 3) == win({0, 2, 1}));
  CHECK(parse_window("e", 2).length() == 0);
  CHECK(to_string(win({0, 2, 1})) == "0,2,1");
  CHECK_THROWS_AS(parse_window("3", 3), ValidationError);
  CHECK(all_windows(2, 3).size() == 8);
  CHECK(all_windows(3, 0).size() == 1);
}

TEST_CASE("deletion on windows") {
  const Window w = win({0, 1, 2});
  CHECK(delete_coord(1, w) == win({1, 2}));
  CHECK(delete_coord(2, w) == win({0, 2}));
  CHECK(delete_coord(3, w) == win({0, 1}));
  CHECK_THROWS_AS(delete_coord(4, w), ValidationError);
  const Window abcd = win({0, 1, 2, 0});
  CHECK(delete_coord(1, delete_coord(1, abcd)) == win({2, 0}));
  CHECK(delete_coord(1, delete_coord(2, abcd)) == win({2, 0}));
}

TEST_CASE("face relations on windows") {
  const auto r = verify_face_relations_windows(2, 5, 3);
  CHECK(r.passes());
  CHECK(r.instances == 32 * 6);
  const auto vac = verify_face_relations_windows(2, 3, 0);
  CHECK(vac.passes());
  CHECK(vac.instances == 0);
  CHECK_THROWS_AS(verify_face_relations_windows(2, 4, 3), ValidationError);
}

TEST_CASE("cylinder measures") {
  const CylinderMeasure cm = parse_cylinder("1/2,1/3,1/6", 2);
  CHECK(cm.probability(win({0, 1})) == Q(1, 6));
  CHECK(cm.probability(win({})) == 1);
  CHECK_THROWS_AS(parse_cylinder("1/2,1/3", 2), ValidationError);
  const WindowMeasure pm = product_window_measure(cm);
  CHECK(pm.size() == 9);
  CHECK(pm.at(win({2, 2})) == Q(1, 36));
}

TEST_CASE("product invariance") {
  const CylinderMeasure fair = parse_cylinder("1/2,1/2", 3);
  for (Index i = 1; i <= 3; ++i) {
    const auto r = product_invariance_check(fair, i, {Window(2, {0, 1})});
    CHECK(r.equal);
    CHECK(r.lhs == Q(1, 4));
  }
  const auto full = product_invariance_check(fair, 2, all_windows(2, 2));
  CHECK(full.lhs == 1);
  CHECK(full.rhs == 1);

  std::mt19937_64 rng(6);
  for (int t = 0; t < 20; ++t) {
    std::uniform_int_distribution<long> w(0, 5);
    std::vector<Rational> eta(3);
    Rational s = 0;
    for (auto& x : eta) {
      x = w(rng);
      s += x;
    }
    if (s == 0) continue;
    for (auto& x : eta) x /= s;
    const CylinderMeasure cm(eta, 4);
    std::vector<Window> ev;
    std::set<std::vector<Index>> keys;
    for (const Window& x : all_windows(3, 3)) {
      if (rng() % 3 == 0) {
        ev.push_back(x);
        keys.insert(x.entries());
      }
    }
    for (Index i = 1; i <= 4; ++i) {
      const auto r = product_invariance_check(cm, i, ev);
      CHECK(r.equal);
      CHECK(r.rhs == preimage_mass(cm, i, keys));
    }
  }
}

TEST_CASE("negative control") {
  const NegativeControl nc = find_negative_control(2, 3);
  CHECK_FALSE(nc.report.equal);
  CHECK(nc.i >= 2);
  // Uniform on {w : w_1 = w_2}: mu(E) and mu(s_2^{-1} E) for E = {(0,0)}.
  CHECK(nc.description.find("w_1 = w_2") != std::string::npos);
  CHECK(nc.report.lhs == Q(1, 2));
  CHECK(nc.report.rhs == Q(1, 4));
  const auto again = window_invariance_check(nc.rho, nc.i, nc.event);
  CHECK(again.lhs == nc.report.lhs);
  CHECK(again.rhs == nc.report.rhs);
}
