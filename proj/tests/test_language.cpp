#include <doctest.h>

#include <random>

#include <subst/language.hpp>

#include "helpers.hpp"

using namespace subst;
using testing::fibonacci;
using testing::make_endo;

namespace {

//! Brute-force occurrence scan, the oracle for the KMP path.
std::vector<std::size_t> occurrences_brute(Word const& x, Word const& u) {
  std::vector<std::size_t> out;
  if (u.empty() || u.size() > x.size()) {
    return out;
  }
  for (std::size_t i = 0; i + u.size() <= x.size(); ++i) {
    bool hit = true;
    for (std::size_t j = 0; j < u.size() && hit; ++j) {
      hit = x[i + j] == u[j];
    }
    if (hit) {
      out.push_back(i);
    }
  }
  return out;
}

std::vector<Word> return_words_brute(Word const& x, Word const& u) {
  auto occ = occurrences_brute(x, u);
  std::set<Word> seen;
  for (std::size_t i = 0; i + 1 < occ.size(); ++i) {
    seen.insert(Word(x.begin() + occ[i], x.begin() + occ[i + 1]));
  }
  return std::vector<Word>(seen.begin(), seen.end());
}

SubstitutionSystem periodic_ab() {
  return SubstitutionSystem(make_endo("ab", {"ab", "ab"}), 0, "(ab)^w");
}

}  // namespace

TEST_CASE("occurrences") {
  auto fib = fibonacci();
  Word x = fib.alphabet().word_from_chars("01001010");
  Word u = fib.alphabet().word_from_chars("010");
  CHECK(occurrences(x, u) == std::vector<std::size_t>{0, 3, 5});

  CHECK(occurrences(x, fib.alphabet().word_from_chars("010010101")).empty());

  Alphabet a = Alphabet::from_chars("a");
  Word aaaa = a.word_from_chars("aaaa");
  CHECK(occurrences(aaaa, a.word_from_chars("aa"))
        == std::vector<std::size_t>{0, 1, 2});

  CHECK_THROWS_AS(occurrences(x, Word{}), validation_error);
}

TEST_CASE("occurrences match the brute-force oracle") {
  std::mt19937 rng(64);
  for (int trial = 0; trial < 300; ++trial) {
    Word x = testing::random_word(rng, 2, 200);
    Word u = testing::random_word(rng, 2, 1 + trial % 5);
    CHECK(occurrences(x, u) == occurrences_brute(x, u));
  }
}

TEST_CASE("fibonacci return words") {
  auto fib = fibonacci();
  Word x = fixed_point_prefix(fib, 10000);

  auto r0 = return_words(x, fib.alphabet().word_from_chars("0"));
  CHECK(r0.return_words == std::vector<Word>{
      fib.alphabet().word_from_chars("0"),
      fib.alphabet().word_from_chars("01")});
  CHECK(r0.return_words == return_words_brute(x, fib.alphabet().word_from_chars("0")));
  CHECK(r0.max_gap == 2);

  auto r00 = return_words(x, fib.alphabet().word_from_chars("00"));
  CHECK(r00.return_words == std::vector<Word>{
      fib.alphabet().word_from_chars("001"),
      fib.alphabet().word_from_chars("00101")});
  CHECK(r00.return_words == return_words_brute(x, fib.alphabet().word_from_chars("00")));
}

TEST_CASE("periodic return words") {
  auto ab = periodic_ab();
  Word x = fixed_point_prefix(ab, 1000);
  auto r = return_words(x, ab.alphabet().word_from_chars("ab"));
  CHECK(r.return_words == std::vector<Word>{ab.alphabet().word_from_chars("ab")});

  CHECK_THROWS_AS(return_words(x, ab.alphabet().word_from_chars("ba" "b" "b")),
                  validation_error);
}

TEST_CASE("return word decomposition") {
  auto fib = fibonacci();
  Word x = fixed_point_prefix(fib, 2000);
  for (std::string const s : {"0", "01", "010", "00"}) {
    Word u = fib.alphabet().word_from_chars(s);
    auto idx = return_words(x, u);
    Word cat;
    for (std::size_t i = 0; i + 1 < idx.occurrence_positions.size(); ++i) {
      Word w(x.begin() + idx.occurrence_positions[i],
             x.begin() + idx.occurrence_positions[i + 1]);
      cat.insert(cat.end(), w.begin(), w.end());
    }
    Word expect(x.begin() + idx.occurrence_positions.front(),
                x.begin() + idx.occurrence_positions.back());
    CHECK(cat == expect);
    // every return word starts the next occurrence of u
    for (auto const& w : idx.return_words) {
      Word wu = w;
      wu.insert(wu.end(), u.begin(), u.end());
      CHECK(occurrences(wu, u).size() == 2);
      CHECK(Word(wu.begin(), wu.begin() + u.size()) == u);
    }
  }
}

TEST_CASE("max gap profiles") {
  auto ab = periodic_ab();
  auto p1 = max_gap_profile(ab, ab.alphabet().word_from_chars("a"),
                            {100, 1000, 10000});
  for (auto const& [n, gap] : p1) {
    CHECK(gap == 2);
  }

  auto fib = fibonacci();
  auto p2 = max_gap_profile(fib, fib.alphabet().word_from_chars("0"),
                            {100, 1000, 10000});
  CHECK(p2.back().second == 2);
  CHECK(p2[1].second == p2[2].second);

  auto tm = testing::thue_morse();
  auto p3 = max_gap_profile(tm, tm.alphabet().word_from_chars("01"),
                            {1000, 10000, 100000});
  CHECK(p3.back().second <= 4);
  CHECK(p3[1].second == p3[2].second);

  CHECK_THROWS_AS(max_gap_profile(fib, fib.alphabet().word_from_chars("11"),
                                  {100}),
                  validation_error);
}

TEST_CASE("recurrence constants") {
  auto fib = fibonacci();
  auto est = recurrence_constants(fib, 20, 100000);
  CHECK(est.L.value() <= 3.0);
  CHECK(est.K <= 4);
  CHECK(est.factors_tested > 0);

  auto ab = recurrence_constants(periodic_ab(), 8, 10000);
  CHECK(ab.L.value() <= 2.0);

  auto tm = recurrence_constants(testing::thue_morse(), 16, 100000);
  CHECK(tm.L.value() < 12.0);
  CHECK(tm.K <= 12);
}

TEST_CASE("recurrence estimates are monotone in depth") {
  auto fib = fibonacci();
  auto e1 = recurrence_constants(fib, 12, 10000);
  auto e2 = recurrence_constants(fib, 12, 100000);
  CHECK(!e2.L.less_than(e1.L));
  CHECK(e2.K >= e1.K);
  // stabilization: equal at the two largest depths
  auto e3 = recurrence_constants(fib, 12, 1000000);
  CHECK(e3.L.num * e2.L.den == e2.L.num * e3.L.den);
  CHECK(e3.K == e2.K);
}

TEST_CASE("linear recurrence bounds hold with fitted constants") {
  auto fib = fibonacci();
  Word x = fixed_point_prefix(fib, 100000);
  auto est = recurrence_constants(fib, 20, 100000);
  for (std::size_t n = 1; n <= 20; ++n) {
    for (auto const& u : factors_of_prefix(
             Word(x.begin(), x.begin() + 5000), n)) {
      auto occ = occurrences(x, u);
      if (occ.size() < 2) {
        continue;
      }
      auto idx = return_words(x, u);
      CHECK(check_lr_bounds(idx, est.L, est.K));
    }
  }

  // adversarial L = 1 fails: 0 has the return word 01 of length 2
  auto idx0 = return_words(x, fib.alphabet().word_from_chars("0"));
  CHECK(!check_lr_bounds(idx0, Ratio{1, 1}, est.K));

  // periodic word with L = 1 and u = one period
  auto ab = periodic_ab();
  Word y = fixed_point_prefix(ab, 1000);
  auto idxp = return_words(y, ab.alphabet().word_from_chars("ab"));
  CHECK(check_lr_bounds(idxp, Ratio{1, 1}, 1));
}

TEST_CASE("concatenation bound") {
  auto fib = fibonacci();
  auto est = recurrence_constants(fib, 20, 10000);

  auto c1 = check_concatenation_bound(
      fib, fib.alphabet().word_from_chars("01"), 50, est.L, est.K);
  CHECK(c1.ok);
  CHECK(!c1.truncated);
  CHECK(c1.count > 1);

  // l too short for any return word: only the empty word counts
  auto c2 = check_concatenation_bound(
      fib, fib.alphabet().word_from_chars("010"), 1, est.L, est.K);
  CHECK(c2.count == 1);
  CHECK(c2.ok);
  // overlapping occurrences admit return words shorter than u
  auto c2b = check_concatenation_bound(
      fib, fib.alphabet().word_from_chars("010"), 2, est.L, est.K);
  CHECK(c2b.count == 2);
  CHECK(c2b.ok);

  auto tm  = testing::thue_morse();
  auto et  = recurrence_constants(tm, 16, 10000);
  auto c3 = check_concatenation_bound(
      tm, tm.alphabet().word_from_chars("0110"), 64, et.L, et.K);
  CHECK(c3.ok);
}

TEST_CASE("recurrent factors") {
  auto ex = testing::three_letter_example();
  auto f1 = recurrent_factors(ex, 1, 30000);
  CHECK(f1.size() == 3);  // a, b, c all recur at desk scale

  // ab c^omega: only c survives in the tail
  auto tail = SubstitutionSystem(make_endo("abc", {"ab", "cc", "cc"}), 0);
  auto f2 = recurrent_factors(tail, 1, 10000);
  REQUIRE(f2.size() == 1);
  CHECK(tail.alphabet().render(f2[0]) == "c");

  auto fib = fibonacci();
  auto f3 = recurrent_factors(fib, 2, 100000);
  std::vector<std::string> rendered;
  for (auto const& w : f3) {
    rendered.push_back(fib.alphabet().render(w));
  }
  CHECK(rendered == std::vector<std::string>{"00", "01", "10"});
}

TEST_CASE("uniformly recurrent fixtures have full tail languages") {
  for (auto sys : {fibonacci(), testing::thue_morse()}) {
    Word x = image_prefix(sys, 100000);
    for (std::size_t n : {1, 2, 4, 8}) {
      auto rec = recurrent_factors(sys, n, 100000);
      auto all = factors_of_prefix(x, n);
      CHECK(rec == all);
    }
  }
}
