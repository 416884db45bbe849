#include "doctest.h"

#include <random>
#include <set>

#include "facial/error.hpp"
#include "facial/rewrite.hpp"
#include "facial/thompson.hpp"
#include "oracles.hpp"

using namespace facial;

namespace {

AbelianVector random_vector(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(0, 6);
  std::uniform_int_distribution<Index> val(-3, 3);
  std::vector<Index> v(static_cast<std::size_t>(len(rng)));
  for (auto& x : v) x = val(rng);
  return AbelianVector(v);
}

Word random_word(std::mt19937_64& rng, std::size_t max_len, Index max_letter) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<Index> letter(1, max_letter);
  std::vector<Index> v(len(rng));
  for (auto& x : v) x = letter(rng);
  return Word(v);
}

}  // namespace

TEST_CASE("F+ normal forms") {
  CHECK(fplus_normalize(Word{2, 1}) == FPlusNormalForm({1, 0, 1}));
  CHECK(fplus_normalize(Word{1, 1}) == FPlusNormalForm({2}));
  CHECK(fplus_normalize(Word{}).empty());
  CHECK(to_string(FPlusNormalForm({1, 0, 1})) == "g1^1.g3^1");
  CHECK(to_string(FPlusNormalForm{}) == "e");
  CHECK(parse_fplus("g1^2.g3^1") == FPlusNormalForm({2, 0, 1}));
  CHECK(FPlusNormalForm({2, 0, 1}).to_word() == Word{1, 1, 3});
  CHECK_THROWS_AS(FPlusNormalForm({1, 0}), ValidationError);

  for (std::size_t len = 0; len <= 5; ++len) {
    for (const auto& l : oracle::all_words(4, len)) {
      const auto forms = oracle::all_normal_forms(oracle::System::fplus, l);
      REQUIRE(forms.size() == 1);
      const Word w{std::vector<Index>(l)};
      CHECK(fplus_normalize(w).to_word() == Word(std::vector<Index>(*forms.begin())));
    }
  }
}

TEST_CASE("quotient onto S") {
  CHECK(quotient_to_S(FPlusNormalForm({1, 0, 1})) == CanonSet{1, 3});
  CHECK(quotient_to_S(FPlusNormalForm({2})) == CanonSet{1, 2});
  CHECK(quotient_to_S(FPlusNormalForm{}) == CanonSet{});
}

TEST_CASE("right action") {
  // (a,b,c) acted on by s_2 becomes (a,b,0,c).
  CHECK(right_action(AbelianVector{4, 5, 6}, 2) == AbelianVector{4, 5, 0, 6});
  CHECK(right_action(AbelianVector{}, 3).is_zero());
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    const AbelianVector v = random_vector(rng);
    CHECK(right_action(v, Word{2, 1}) == right_action(v, Word{1, 3}));
    const Word s = random_word(rng, 4, 5);
    const Word s2 = random_word(rng, 4, 5);
    CHECK(right_action(v, s + s2) == right_action(right_action(v, s), s2));
    CHECK(right_action(v, s) == right_action(v, normal_form(RuleSystem::flat, s)));
  }
  CHECK(to_string(AbelianVector{1, 0, 2}) == "(1,0,2)");
  CHECK(parse_abelian("(1,0,2,0)") == AbelianVector{1, 0, 2});
}

TEST_CASE("semidirect product") {
  const SemidirectElem e_t{CanonSet{}, AbelianVector{1, 2}};
  const SemidirectElem e_t2{CanonSet{}, AbelianVector{0, 3}};
  CHECK(semidirect_mul(e_t, e_t2) == SemidirectElem{CanonSet{}, AbelianVector{1, 5}});
  CHECK(semidirect_mul(SemidirectElem{CanonSet{2}, {}}, SemidirectElem{CanonSet{1}, {}}) ==
        SemidirectElem{CanonSet{1, 3}, {}});
  CHECK(semidirect_mul(SemidirectElem{CanonSet{1}, AbelianVector{1}},
                       SemidirectElem{CanonSet{2}, AbelianVector{0, 1}}) ==
        SemidirectElem{CanonSet{1, 2}, AbelianVector{1, 1}});

  std::mt19937_64 rng(2);
  auto rnd = [&] {
    return SemidirectElem{word_to_set(random_word(rng, 4, 5)), random_vector(rng)};
  };
  for (int t = 0; t < 1000; ++t) {
    const auto x = rnd(), y = rnd(), z = rnd();
    CHECK(semidirect_mul(semidirect_mul(x, y), z) == semidirect_mul(x, semidirect_mul(y, z)));
  }
}

TEST_CASE("embedding of F+") {
  CHECK(embed_fplus(FPlusNormalForm({1})) == SemidirectElem{CanonSet{1}, AbelianVector{1}});
  std::vector<FPlusNormalForm> forms;
  for (std::size_t len = 0; len <= 3; ++len) {
    for (const auto& l : oracle::all_words(4, len)) {
      forms.push_back(fplus_normalize(Word(std::vector<Index>(l))));
    }
  }
  for (const auto& g : forms) {
    CHECK(embed_fplus(g).s_part == quotient_to_S(g));
    for (const auto& h : forms) {
      CHECK(embed_fplus(fplus_multiply(g, h)) == semidirect_mul(embed_fplus(g), embed_fplus(h)));
    }
  }
  // Injective on exponents p_i <= 3, d <= 4.
  std::set<std::string> images;
  std::size_t count = 0;
  for (Index a = 0; a <= 3; ++a)
    for (Index b = 0; b <= 3; ++b)
      for (Index c = 0; c <= 3; ++c)
        for (Index d = 0; d <= 3; ++d) {
          std::vector<Index> p{a, b, c, d};
          while (!p.empty() && p.back() == 0) p.pop_back();
          images.insert(to_string(embed_fplus(FPlusNormalForm(p))));
          ++count;
        }
  CHECK(images.size() == count);
}
