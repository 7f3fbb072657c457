#include <doctest.h>

#include <cmath>
#include <random>

#include <subst/growth.hpp>
#include <subst/system.hpp>

#include "helpers.hpp"

using namespace subst;
using testing::make_endo;

TEST_CASE("mortal letters") {
  auto m1 = mortal_letters(make_endo("ab", {"b", ""}));
  CHECK(m1 == std::vector<Letter>{0, 1});
  auto m2 = mortal_letters(make_endo("ab", {"ab", ""}));
  CHECK(m2 == std::vector<Letter>{1});
  CHECK(mortal_letters(make_endo("01", {"01", "0"})).empty());
}

TEST_CASE("growth types of the three-letter example") {
  auto ex = make_endo("abc", {"aaab", "bc", "cb"});
  auto ga = growth_type(ex, 0);
  auto gb = growth_type(ex, 1);
  auto gc = growth_type(ex, 2);
  CHECK(ga.d == 0);
  CHECK(ga.theta.integer_value() == 3);
  CHECK(gb.d == 0);
  CHECK(gb.theta.integer_value() == 2);
  CHECK(growth_equal(gb, gc));
}

TEST_CASE("polynomial growth 0 -> 01, 1 -> 1") {
  auto m = make_endo("01", {"01", "1"});
  auto g0 = growth_type(m, 0);
  auto g1 = growth_type(m, 1);
  CHECK(g0.d == 1);
  CHECK(g0.theta.integer_value() == 1);
  CHECK(g1.d == 0);
  CHECK(g1.theta.integer_value() == 1);
  CHECK(!g1.is_growing());
  CHECK(g0.is_growing());
}

TEST_CASE("fibonacci growth") {
  auto fib = make_endo("01", {"01", "0"});
  auto g0 = growth_type(fib, 0);
  auto g1 = growth_type(fib, 1);
  CHECK(g0.d == 0);
  CHECK(!g0.theta.is_integer());
  CHECK(growth_equal(g0, g1));
  CHECK(std::abs(g0.theta.to_double() - 1.6180339887) < 1e-9);
}

TEST_CASE("growth summary") {
  auto s1 = substitution_growth(make_endo("abc", {"aaab", "bc", "cb"}));
  CHECK(s1.Theta.integer_value() == 3);
  CHECK(s1.D == 0);
  CHECK(s1.A_max == std::vector<Letter>{0});
  CHECK(s1.growing);
  CHECK(s1.diagnostics.empty());

  auto s2 = substitution_growth(make_endo("012", {"0100", "12", "21"}));
  CHECK(s2.Theta.integer_value() == 3);
  CHECK(s2.D == 0);
  CHECK(s2.A_max == std::vector<Letter>{0});
  CHECK(s2.growing);

  auto s3 = substitution_growth(make_endo("01", {"01", "1"}));
  CHECK(s3.Theta.integer_value() == 1);
  CHECK(s3.D == 1);
  CHECK(!s3.growing);
  CHECK(s3.diagnostics.empty());
}

TEST_CASE("erasing substitutions are rejected") {
  CHECK_THROWS_AS(growth_type(make_endo("ab", {"ab", ""}), 0),
                  validation_error);
}

TEST_CASE("empirical fits") {
  auto fib = make_endo("01", {"01", "0"});
  auto f = empirical_growth_fit(fib, 0, 30);
  CHECK(f.max_relative_residual < 0.05);

  auto lin = empirical_growth_fit(make_endo("01", {"01", "1"}), 0, 30);
  CHECK(lin.exact_polynomial);
  CHECK(lin.max_relative_residual == 0.0);
  CHECK(lin.c_estimate == doctest::Approx(1.0));

  auto dbl = empirical_growth_fit(make_endo("a", {"aa"}), 0, 20);
  CHECK(dbl.c_estimate == doctest::Approx(1.0));
  CHECK(dbl.max_relative_residual == 0.0);
}

TEST_CASE("oscillating polynomial growth is exact along the period") {
  // b <-> b' swap with a trailing fixed letter: |sigma^n(b)| = 1,2,2,3,3,...
  auto m = make_endo("bcw", {"cw", "b", "w"});
  auto g = growth_type(m, 0);
  CHECK(g.theta.integer_value() == 1);
  CHECK(g.d == 1);
  auto f = empirical_growth_fit(m, 0, 30);
  CHECK(f.exact_polynomial);
  CHECK(f.c_estimate == doctest::Approx(0.5));
}

TEST_CASE("growth of powers: Theta^k, D unchanged") {
  std::mt19937 rng(4242);
  int done = 0;
  for (int trial = 0; trial < 60 && done < 25; ++trial) {
    auto m = testing::random_endo(rng, 4, 1, 4);
    auto s1 = substitution_growth(m);
    auto sk = substitution_growth(power(m, 3));
    CHECK(sk.D == s1.D);
    auto c = compare_powers_interval(s1.Theta, 3, sk.Theta, 1);
    if (c.has_value()) {
      CHECK(*c == 0);
    }
    if (s1.Theta.is_integer()) {
      Int t = s1.Theta.integer_value();
      CHECK(sk.Theta.integer_value() == t * t * t);
    }
    ++done;
  }
  CHECK(done >= 25);
}

TEST_CASE("structural growth matches empirical growth on random substitutions") {
  std::mt19937 rng(31337);
  for (int trial = 0; trial < 40; ++trial) {
    auto m = testing::random_endo(rng, 5, 1, 6);
    auto summary = substitution_growth(m);
    CHECK(summary.diagnostics.empty());
    for (std::size_t a = 0; a < m.domain().size(); ++a) {
      auto fit = empirical_growth_fit(m, static_cast<Letter>(a), 30);
      auto g = summary.per_letter[a];
      if (g.theta.compare_int(1) > 0) {
        CHECK(fit.max_relative_residual < 0.10);
      } else {
        CHECK(fit.exact_polynomial);
      }
    }
  }
}

TEST_CASE("growth order is a strict weak order") {
  std::mt19937 rng(2025);
  std::vector<GrowthType> types;
  for (int trial = 0; trial < 12; ++trial) {
    auto m = testing::random_endo(rng, 4, 1, 4);
    for (std::size_t a = 0; a < m.domain().size(); ++a) {
      types.push_back(growth_type(m, static_cast<Letter>(a)));
    }
  }
  for (auto& x : types) {
    CHECK(!growth_less(x, x));
  }
  for (auto& x : types) {
    for (auto& y : types) {
      if (growth_less(x, y)) {
        CHECK(!growth_less(y, x));
        CHECK(!growth_equal(x, y));
      }
      bool equiv = !growth_less(x, y) && !growth_less(y, x);
      CHECK(equiv == growth_equal(x, y));
    }
  }
}
