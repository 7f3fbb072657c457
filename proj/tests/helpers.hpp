#ifndef SUBSTLIB_TESTS_HELPERS_HPP_
#define SUBSTLIB_TESTS_HELPERS_HPP_

#include <random>
#include <string>
#include <vector>

#include <subst/morphism.hpp>
#include <subst/system.hpp>
#include <subst/word.hpp>

namespace subst::testing {

inline Morphism make_endo(std::string const& chars,
                          std::vector<std::string> const& images) {
  Alphabet a = Alphabet::from_chars(chars);
  std::vector<Word> ims;
  for (auto const& s : images) {
    ims.push_back(a.word_from_chars(s));
  }
  return Morphism(a, a, std::move(ims));
}

inline SubstitutionSystem fibonacci() {
  return SubstitutionSystem(make_endo("01", {"01", "0"}), 0, "fibonacci");
}

inline SubstitutionSystem thue_morse() {
  return SubstitutionSystem(make_endo("01", {"01", "10"}), 0, "thue-morse");
}

// a -> aaab, b -> bc, c -> cb
inline SubstitutionSystem three_letter_example() {
  return SubstitutionSystem(make_endo("abc", {"aaab", "bc", "cb"}), 0);
}

// a -> ab, b -> bac, c -> ccc with phi erasing c
inline SubstitutionSystem erasing_image_example() {
  Morphism sigma = make_endo("abc", {"ab", "bac", "ccc"});
  Alphabet cod   = Alphabet::from_chars("ab");
  std::vector<Word> phi_images{Word{0}, Word{1}, Word{}};
  Morphism phi(sigma.domain(), cod, std::move(phi_images));
  return SubstitutionSystem(sigma, 0, phi);
}

// 0 -> 010, 1 -> 01a, a -> aaa with phi erasing a; image is Fibonacci.
inline SubstitutionSystem fibonacci_as_three_substitutive() {
  Morphism sigma = make_endo("01a", {"010", "01a", "aaa"});
  Alphabet cod   = Alphabet::from_chars("01");
  std::vector<Word> phi_images{Word{0}, Word{1}, Word{}};
  Morphism phi(sigma.domain(), cod, std::move(phi_images));
  return SubstitutionSystem(sigma, 0, phi);
}

//! Uniform random endomorphism over 1..max_letters letters with image
//! lengths in [min_len, max_len].
inline Morphism random_endo(std::mt19937& rng, std::size_t max_letters = 5,
                            std::size_t min_len = 1, std::size_t max_len = 6) {
  std::uniform_int_distribution<std::size_t> nd(1, max_letters);
  std::size_t n = nd(rng);
  std::vector<std::string> toks;
  for (std::size_t i = 0; i < n; ++i) {
    toks.push_back(std::string(1, static_cast<char>('a' + i)));
  }
  Alphabet alpha(toks);
  std::uniform_int_distribution<std::size_t> ld(min_len, max_len);
  std::uniform_int_distribution<std::size_t> letter(0, n - 1);
  std::vector<Word> images;
  for (std::size_t i = 0; i < n; ++i) {
    Word im(ld(rng));
    for (auto& x : im) {
      x = static_cast<Letter>(letter(rng));
    }
    images.push_back(std::move(im));
  }
  return Morphism(alpha, alpha, std::move(images));
}

inline Word random_word(std::mt19937& rng, std::size_t n_letters,
                        std::size_t len) {
  std::uniform_int_distribution<std::size_t> letter(0, n_letters - 1);
  Word w(len);
  for (auto& x : w) {
    x = static_cast<Letter>(letter(rng));
  }
  return w;
}

}  // namespace subst::testing

#endif
