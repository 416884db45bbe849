#include "doctest.h"

#include <random>

#include "facial/error.hpp"
#include "facial/rewrite.hpp"
#include "oracles.hpp"

using namespace facial;

namespace {

Word W(std::initializer_list<Index> l) { return Word(l); }

oracle::Letters letters(const Word& w) {
  return oracle::Letters(w.letters().begin(), w.letters().end());
}

Word random_word(std::mt19937_64& rng, std::size_t max_len, Index max_letter) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<Index> letter(1, max_letter);
  std::vector<Index> v(len(rng));
  for (auto& x : v) x = letter(rng);
  return Word(v);
}

}  // namespace

TEST_CASE("word text format") {
  CHECK(parse_word("2 1") == W({2, 1}));
  CHECK(parse_word("2.1") == W({2, 1}));
  CHECK(parse_word("e").empty());
  CHECK(parse_word("").empty());
  CHECK(to_string(Word{}) == "e");
  CHECK(to_string(W({1, 3})) == "1 3");
  CHECK(to_dotted(W({1, 3})) == "1.3");
  CHECK_THROWS_AS(parse_word("0"), ValidationError);
  CHECK_THROWS_AS(parse_word("x"), ValidationError);
}

TEST_CASE("flat reduction examples") {
  CHECK(reduce_flat(W({2, 1})).normal_form == W({1, 3}));
  CHECK(reduce_flat(Word{}).normal_form.empty());
  CHECK(reduce_flat(W({3, 2, 1})).normal_form == W({1, 3, 5}));
  CHECK(reduce_flat(W({1, 1})).normal_form == W({1, 2}));
  // Oracle agreement on the same inputs.
  for (const Word& w : {W({2, 1}), W({3, 2, 1}), W({1, 1})}) {
    auto forms = oracle::all_normal_forms(oracle::System::flat, letters(w));
    REQUIRE(forms.size() == 1);
    CHECK(letters(normal_form(RuleSystem::flat, w)) == *forms.begin());
  }
}

TEST_CASE("descending reduction examples") {
  CHECK(reduce_descending(W({1, 2})).normal_form == W({1, 1}));
  CHECK(reduce_descending(W({1, 2, 3})).normal_form == W({1, 1, 1}));
  CHECK(reduce_descending(W({3})).normal_form == W({3}));
  CHECK_THROWS_AS(reduce_descending(W({4}), 3), ValidationError);
}

TEST_CASE("multiply and words_equal") {
  CHECK(multiply(W({1}), W({1, 3})) == W({1, 2, 3}));
  CHECK(multiply(Word{}, W({5})) == W({5}));
  CHECK(multiply(W({1}), W({2})) == W({1, 2}));
  CHECK(words_equal(W({2, 1}), W({1, 3})));
  CHECK_FALSE(words_equal(W({1}), W({2})));
  for (Index i = 1; i <= 8; ++i) {
    std::vector<Index> up, ones(static_cast<std::size_t>(i), 1);
    for (Index a = 1; a <= i; ++a) up.push_back(a);
    CHECK(words_equal(Word(up), Word(ones)));
  }
}

TEST_CASE("every strategy reaches the unique oracle normal form") {
  for (std::size_t len = 0; len <= 5; ++len) {
    for (const auto& l : oracle::all_words(4, len)) {
      const Word w{std::vector<Index>(l)};
      const auto flat = oracle::all_normal_forms(oracle::System::flat, l);
      const auto desc = oracle::all_normal_forms(oracle::System::descending, l);
      REQUIRE(flat.size() == 1);
      REQUIRE(desc.size() == 1);
      CHECK(letters(reduce_flat(w, ReductionStrategy::rightmost()).normal_form) == *flat.begin());
      CHECK(letters(reduce_flat(w, ReductionStrategy::randomized(7)).normal_form) == *flat.begin());
      CHECK(letters(reduce_descending(w).normal_form) == *desc.begin());
    }
  }
}

TEST_CASE("traces are well formed and serialise one step per line") {
  const auto r = reduce_flat(W({3, 2, 1}));
  CHECK(r.trace.well_formed());
  CHECK(r.trace.size() == 3);
  const std::string log = r.trace.to_log();
  CHECK(std::count(log.begin(), log.end(), '\n') == 3);
  CHECK(log.rfind("pos=", 0) == 0);
  CHECK(log.find("word=1.3.5") != std::string::npos);
  CHECK(reduce_flat(W({1, 2})).trace.empty());
}

TEST_CASE("critical pairs") {
  for (auto sys : {RuleSystem::flat, RuleSystem::descending, RuleSystem::fplus}) {
    for (Index n = 2; n <= 5; ++n) {
      for (const auto& cp : critical_pairs(sys, n)) {
        CHECK(cp.joined);
        CHECK(cp.left_path.well_formed());
        CHECK(cp.right_path.well_formed());
      }
    }
  }
  // Flat peaks s_k s_j s_i with i <= j <= k <= 3: C(5,3) = 10.
  const auto flat3 = critical_pairs(RuleSystem::flat, 3);
  CHECK(flat3.size() == 10);
  bool found = false;
  for (const auto& cp : flat3) {
    if (cp.peak == W({3, 2, 1})) {
      found = true;
      CHECK(cp.left_path.steps().back().after == W({1, 3, 5}));
    }
  }
  CHECK(found);
  const auto desc3 = critical_pairs(RuleSystem::descending, 3);
  REQUIRE(desc3.size() == 1);
  CHECK(desc3[0].peak == W({1, 2, 3}));
  CHECK(desc3[0].left_path.steps().back().after == W({1, 1, 1}));
  CHECK(critical_pairs(RuleSystem::fplus, 2).empty());
}

TEST_CASE("termination measure") {
  CHECK(termination_measure(W({2, 1})) == std::vector<std::int64_t>{1});
  CHECK(termination_measure(W({1, 3})) == std::vector<std::int64_t>{0});
  CHECK(termination_measure(W({3, 2, 1})) == std::vector<std::int64_t>{2, 1});
  CHECK_THROWS_AS(termination_measure(W({1})), ValidationError);

  std::mt19937_64 rng(11);
  for (int t = 0; t < 300; ++t) {
    Word w = random_word(rng, 8, 6);
    if (w.size() < 2) continue;
    const auto r = reduce_flat(w);
    for (const auto& step : r.trace.steps()) {
      CHECK(termination_measure(step.after) < termination_measure(step.before));
    }
  }
}

TEST_CASE("right cancellation") {
  CHECK(right_cancel_check(W({1}), W({2}), W({1})));
  CHECK(right_cancel_check(W({3, 1}), W({3, 1}), W({2})));
  std::mt19937_64 rng(5);
  for (int t = 0; t < 2000; ++t) {
    CHECK(right_cancel_check(random_word(rng, 5, 6), random_word(rng, 5, 6), random_word(rng, 5, 6)));
  }
}

TEST_CASE("sn membership") {
  const Word f = sn_membership_normal_form(W({2, 3, 1}), 3);
  CHECK(is_descending_normal(f));
  CHECK(f.max_letter() <= 3);
  CHECK(words_equal(f, W({2, 3, 1})));
  CHECK(sn_membership_normal_form(W({4}), 4) == W({4}));
  CHECK_THROWS_AS(sn_membership_normal_form(W({4}), 3), ValidationError);
}

TEST_CASE("normal form predicates") {
  CHECK(is_flat_normal(W({1, 3, 5})));
  CHECK_FALSE(is_flat_normal(W({1, 1})));
  CHECK(is_descending_normal(W({3, 3, 1})));
  CHECK_FALSE(is_descending_normal(W({1, 2})));
  CHECK(parse_rule_system("descending") == RuleSystem::descending);
  CHECK_THROWS_AS(parse_rule_system("sideways"), ValidationError);
}
