#ifndef SUBSTLIB_MORPHISM_HPP_
#define SUBSTLIB_MORPHISM_HPP_

#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "word.hpp"

namespace subst {

//! A monoid morphism between free monoids, given by one image word per
//! domain letter. Immutable after construction; the erasing / coding /
//! endomorphism flags are computed once.
//!
//! Codings are letter-to-letter and onto, following the convention that the
//! codomain carries no unused letters.
class Morphism {
 public:
  Morphism() = default;

  Morphism(Alphabet domain, Alphabet codomain, std::vector<Word> images)
      : domain_(std::move(domain)),
        codomain_(std::move(codomain)),
        images_(std::move(images)) {
    if (images_.size() != domain_.size()) {
      throw validation_error("morphism needs exactly one image per domain letter");
    }
    std::vector<bool> hit(codomain_.size(), false);
    bool letter_to_letter = true;
    for (auto const& im : images_) {
      if (im.empty()) {
        erasing_ = true;
      }
      if (im.size() != 1) {
        letter_to_letter = false;
      }
      for (Letter x : im) {
        if (x >= codomain_.size()) {
          throw validation_error("image letter id out of range for codomain");
        }
        hit[x] = true;
      }
    }
    bool onto = true;
    for (bool h : hit) {
      onto = onto && h;
    }
    coding_        = letter_to_letter && onto;
    endomorphism_  = (domain_ == codomain_);
  }

  static Morphism identity(Alphabet const& a) {
    std::vector<Word> images(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      images[i] = Word{static_cast<Letter>(i)};
    }
    return Morphism(a, a, std::move(images));
  }

  Alphabet const& domain() const noexcept { return domain_; }
  Alphabet const& codomain() const noexcept { return codomain_; }

  Word const& image(Letter a) const { return images_.at(a); }
  std::vector<Word> const& images() const noexcept { return images_; }

  bool is_erasing() const noexcept { return erasing_; }
  bool is_non_erasing() const noexcept { return !erasing_; }
  bool is_coding() const noexcept { return coding_; }
  bool is_endomorphism() const noexcept { return endomorphism_; }

  bool is_letter_to_letter() const {
    for (auto const& im : images_) {
      if (im.size() != 1) {
        return false;
      }
    }
    return true;
  }

  bool is_identity() const {
    if (!endomorphism_) {
      return false;
    }
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (images_[i].size() != 1 || images_[i][0] != i) {
        return false;
      }
    }
    return true;
  }

  //! Apply by concatenation.
  Word operator()(Word const& w) const {
    std::size_t total = 0;
    for (Letter a : w) {
      if (a >= images_.size()) {
        throw validation_error("alphabet mismatch: letter id "
                               + std::to_string(a) + " not in domain");
      }
      total += images_[a].size();
    }
    Word out;
    out.reserve(total);
    for (Letter a : w) {
      Word const& im = images_[a];
      out.insert(out.end(), im.begin(), im.end());
    }
    return out;
  }

  bool operator==(Morphism const& other) const {
    return domain_ == other.domain_ && codomain_ == other.codomain_
           && images_ == other.images_;
  }
  bool operator!=(Morphism const& other) const { return !(*this == other); }

 private:
  Alphabet          domain_;
  Alphabet          codomain_;
  std::vector<Word> images_;
  bool              erasing_       = false;
  bool              coding_        = false;
  bool              endomorphism_  = false;
};

//! compose(m1, m2) applies m1 first: the result maps a to m2(m1(a)).
inline Morphism compose(Morphism const& m1, Morphism const& m2) {
  if (m1.codomain() != m2.domain()) {
    throw validation_error("alphabet mismatch: codomain of first morphism "
                           "differs from domain of second");
  }
  std::vector<Word> images;
  images.reserve(m1.domain().size());
  for (std::size_t a = 0; a < m1.domain().size(); ++a) {
    images.push_back(m2(m1.image(static_cast<Letter>(a))));
  }
  return Morphism(m1.domain(), m2.codomain(), std::move(images));
}

//! Iterated self-composition, k >= 1.
inline Morphism power(Morphism const& sigma, std::size_t k) {
  if (!sigma.is_endomorphism()) {
    throw validation_error("power requires an endomorphism");
  }
  if (k < 1) {
    throw validation_error("power requires k >= 1");
  }
  Morphism acc = sigma;
  for (std::size_t i = 1; i < k; ++i) {
    acc = compose(acc, sigma);
  }
  return acc;
}

}  // namespace subst

#endif  // SUBSTLIB_MORPHISM_HPP_
