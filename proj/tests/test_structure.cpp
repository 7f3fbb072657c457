#include <doctest.h>

#include <random>

#include <subst/structure.hpp>

#include "helpers.hpp"

using namespace subst;
using testing::make_endo;

TEST_CASE("invariant subalphabets") {
  auto ex = make_endo("abc", {"aaab", "bc", "cb"});
  auto subs = invariant_subalphabets(ex);
  REQUIRE(subs.size() == 2);
  CHECK(subs[0] == std::vector<Letter>{1, 2});
  CHECK(subs[1] == std::vector<Letter>{0, 1, 2});

  auto fib = invariant_subalphabets(make_endo("01", {"01", "0"}));
  REQUIRE(fib.size() == 1);
  CHECK(fib[0] == std::vector<Letter>{0, 1});

  auto two = invariant_subalphabets(make_endo("ab", {"a", "b"}));
  REQUIRE(two.size() == 3);
  CHECK(two[0] == std::vector<Letter>{0});
  CHECK(two[1] == std::vector<Letter>{1});
  CHECK(two[2] == std::vector<Letter>{0, 1});
}

TEST_CASE("primitive sub-substitutions") {
  // none at power 1, at least one at power 2
  auto swapy = make_endo("012", {"010", "2", "1"});
  CHECK(primitive_sub_substitutions(swapy).empty());
  auto at2 = primitive_sub_substitutions(power(swapy, 2));
  CHECK(!at2.empty());
  CHECK(at2.front().letters.size() == 1);
  CHECK(at2.front().eigenvalue.integer_value() == 1);

  // exactly one: {1, 2} with eigenvalue 2
  auto notgood = make_endo("012", {"0100", "12", "21"});
  auto subs = primitive_sub_substitutions(notgood);
  REQUIRE(subs.size() == 1);
  CHECK(subs[0].letters == std::vector<Letter>{1, 2});
  CHECK(subs[0].eigenvalue.integer_value() == 2);

  // primitive whole system
  auto fib = primitive_sub_substitutions(make_endo("01", {"01", "0"}));
  REQUIRE(fib.size() == 1);
  CHECK(fib[0].letters == std::vector<Letter>{0, 1});
  CHECK(!fib[0].eigenvalue.is_integer());
}

TEST_CASE("goodness") {
  auto v1 = is_good(make_endo("012", {"0100", "12", "21"}));
  CHECK(!v1.good);
  CHECK(v1.reason.find("eigenvalue") != std::string::npos);

  auto v2 = is_good(make_endo("01", {"01", "0"}));
  CHECK(v2.good);
  REQUIRE(v2.witness.has_value());
  CHECK(v2.witness->letters == std::vector<Letter>{0, 1});

  auto v3 = is_good(make_endo("01", {"01", "1"}));
  CHECK(!v3.good);
  CHECK(v3.reason.find("not growing") != std::string::npos);
}

TEST_CASE("sub-substitution eigenvalues are dominated by the full system") {
  std::mt19937 rng(777);
  for (int trial = 0; trial < 60; ++trial) {
    auto m = testing::random_endo(rng, 5, 1, 5);
    auto alpha = dominant_eigenvalue(incidence_matrix(m));
    for (auto& s : primitive_sub_substitutions(m)) {
      CHECK(compare(s.eigenvalue, alpha) <= 0);
    }
  }
}

TEST_CASE("growing substitutions gain a primitive sub-substitution under powers") {
  std::mt19937 rng(888);
  int tested = 0;
  for (int trial = 0; trial < 120 && tested < 30; ++trial) {
    auto m = testing::random_endo(rng, 4, 1, 4);
    auto growing = growing_letters(m);
    bool all = true;
    for (bool g : growing) {
      all = all && g;
    }
    if (!all) {
      continue;
    }
    ++tested;
    bool found = false;
    for (std::size_t k = 1; k <= 24 && !found; ++k) {
      found = !primitive_sub_substitutions_of_power(m, k).empty();
    }
    CHECK(found);
  }
  CHECK(tested >= 30);
}

TEST_CASE("reduce picks the least workable power") {
  auto r1 = reduce(SubstitutionSystem(make_endo("012", {"010", "2", "1"}), 0));
  CHECK(r1.k == 2);
  CHECK(r1.has_primitive_sub);

  auto r2 = reduce(testing::fibonacci());
  CHECK(r2.k == 1);
  CHECK(r2.growing_or_flanked);
  CHECK(r2.has_primitive_sub);
  CHECK(r2.system.sigma() == testing::fibonacci().sigma());

  // erasing example goes through erasure elimination first
  auto r3 = reduce(testing::erasing_image_example());
  CHECK(!r3.notes.empty());
  CHECK(r3.system.sigma().is_non_erasing());
  CHECK(r3.has_primitive_sub);
  CHECK(r3.growing_or_flanked);
}

TEST_CASE("reduce output satisfies its claimed conditions") {
  std::mt19937 rng(999);
  for (int trial = 0; trial < 30; ++trial) {
    auto m = testing::random_endo(rng, 4, 1, 4);
    Word const& im = m.image(0);
    if (im.empty() || im[0] != 0 || !growing_letters(m)[0]) {
      continue;
    }
    detail::LetterGraph g(m);
    auto mask = g.reachable_from(0);
    bool all = true;
    for (bool x : mask) {
      all = all && x;
    }
    if (!all) {
      continue;
    }
    SubstitutionSystem sys(m, 0);
    auto r = reduce(sys);
    CHECK(r.system.sigma().is_non_erasing());
    if (r.has_primitive_sub) {
      CHECK(!primitive_sub_substitutions(r.system.sigma()).empty());
    }
    if (r.growing_or_flanked) {
      CHECK(detail::has_growing_or_flanked_letter(r.system.sigma()));
    }
  }
}
