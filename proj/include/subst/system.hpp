#ifndef SUBSTLIB_SYSTEM_HPP_
#define SUBSTLIB_SYSTEM_HPP_

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "graph.hpp"
#include "morphism.hpp"
#include "word.hpp"

namespace subst {

//! Prolongable on a: sigma(a) starts with a and |sigma^n(a)| tends to
//! infinity. The growth condition is decided exactly on the mortal-stripped
//! letter graph, so sigma(a) = a . (mortal suffix) is rejected.
inline bool is_prolongable(Morphism const& sigma, Letter a) {
  if (!sigma.is_endomorphism()) {
    throw validation_error("prolongability requires an endomorphism");
  }
  Word const& im = sigma.image(a);
  if (im.empty() || im[0] != a) {
    return false;
  }
  return growing_letters(sigma)[a];
}

//! The (sigma, start, phi) triple: an endomorphism prolongable on the start
//! letter, plus a morphism phi applied to the fixed point (identity when the
//! system is purely substitutive). Every alphabet letter must occur in
//! sigma^omega(start), i.e. be reachable from the start letter.
class SubstitutionSystem {
 public:
  SubstitutionSystem() = default;

  SubstitutionSystem(Morphism sigma, Letter start, Morphism phi,
                     std::string label = "")
      : sigma_(std::move(sigma)),
        start_(start),
        phi_(std::move(phi)),
        label_(std::move(label)) {
    validate();
  }

  SubstitutionSystem(Morphism sigma, Letter start, std::string label = "")
      : sigma_(std::move(sigma)), start_(start), label_(std::move(label)) {
    phi_ = Morphism::identity(sigma_.domain());
    validate();
  }

  Morphism const& sigma() const noexcept { return sigma_; }
  Morphism const& phi() const noexcept { return phi_; }
  Letter start() const noexcept { return start_; }
  Alphabet const& alphabet() const noexcept { return sigma_.domain(); }
  Alphabet const& image_alphabet() const noexcept { return phi_.codomain(); }
  std::string const& label() const noexcept { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  bool sigma_erasing() const noexcept { return sigma_.is_erasing(); }
  bool phi_identity() const { return phi_.is_identity(); }
  bool phi_coding() const noexcept { return phi_.is_coding(); }

  //! True when phi maps some letter to the empty word, so the image sequence
  //! drops letters of the fixed point.
  bool phi_erasing() const noexcept { return phi_.is_erasing(); }

  bool operator==(SubstitutionSystem const& o) const {
    return sigma_ == o.sigma_ && start_ == o.start_ && phi_ == o.phi_;
  }

 private:
  void validate() {
    if (!sigma_.is_endomorphism()) {
      throw validation_error("sigma must be an endomorphism");
    }
    if (phi_.domain() != sigma_.domain()) {
      throw validation_error("phi must be defined on sigma's alphabet");
    }
    if (start_ >= sigma_.domain().size()) {
      throw validation_error("start letter id out of range");
    }
    Word const& im = sigma_.image(start_);
    std::string const& tok = sigma_.domain().token(start_);
    if (im.empty() || im[0] != start_ || !growing_letters(sigma_)[start_]) {
      throw validation_error("sigma is not prolongable on \"" + tok + "\"");
    }
    detail::LetterGraph g(sigma_);
    auto mask = g.reachable_from(start_);
    std::string missing;
    for (std::size_t a = 0; a < mask.size(); ++a) {
      if (!mask[a]) {
        if (!missing.empty()) {
          missing += ", ";
        }
        missing += "\"" + sigma_.domain().token(static_cast<Letter>(a)) + "\"";
      }
    }
    if (!missing.empty()) {
      throw validation_error(
          "letters with no occurrence in the fixed point from \"" + tok
          + "\": " + missing);
    }
  }

  Morphism    sigma_;
  Letter      start_ = 0;
  Morphism    phi_;
  std::string label_;
};

// ---------------------------------------------------------------------------
// Substitution file format (see README): '#' comments; directives
//   alphabet <tok> <tok> ...
//   start <tok>
//   rule <tok> -> <tok> ...     (empty right side = erasing rule)
//   code <tok> -> <tok> ...     (phi; empty right side allowed; default id)
// ---------------------------------------------------------------------------

inline SubstitutionSystem parse_substitution_file(std::string const& text,
                                                  std::string label = "") {
  std::optional<Alphabet> alpha;
  std::optional<std::string> start_tok;
  std::size_t start_line = 0;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rule_lines;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> code_lines;

  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) {
      toks.push_back(t);
    }
    if (toks.empty()) {
      continue;
    }
    std::string const& kw = toks[0];
    if (kw == "alphabet") {
      if (alpha) {
        throw parse_error(lineno, "duplicate alphabet declaration");
      }
      if (toks.size() < 2) {
        throw parse_error(lineno, "alphabet needs at least one token");
      }
      try {
        alpha = Alphabet(std::vector<std::string>(toks.begin() + 1, toks.end()));
      } catch (validation_error const& e) {
        throw parse_error(lineno, e.what());
      }
    } else if (kw == "start") {
      if (start_tok) {
        throw parse_error(lineno, "duplicate start declaration");
      }
      if (toks.size() != 2) {
        throw parse_error(lineno, "start needs exactly one token");
      }
      start_tok  = toks[1];
      start_line = lineno;
    } else if (kw == "rule" || kw == "code") {
      if (toks.size() < 3 || toks[2] != "->") {
        throw parse_error(lineno, kw + " must be: " + kw + " <tok> -> <tok> ...");
      }
      auto& dest = (kw == "rule") ? rule_lines : code_lines;
      dest.emplace_back(lineno,
                        std::vector<std::string>(toks.begin() + 1, toks.end()));
    } else {
      throw parse_error(lineno, "unknown directive \"" + kw + "\"");
    }
  }

  if (!alpha) {
    throw parse_error(lineno, "missing alphabet declaration");
  }
  if (!start_tok) {
    throw parse_error(lineno, "missing start declaration");
  }
  if (!alpha->contains(*start_tok)) {
    throw parse_error(start_line, "start token \"" + *start_tok
                                      + "\" is not in the alphabet");
  }

  std::size_t const n = alpha->size();
  std::vector<std::optional<Word>> images(n);
  for (auto const& [ln, toks] : rule_lines) {
    if (!alpha->contains(toks[0])) {
      throw parse_error(ln, "unknown token \"" + toks[0] + "\" in rule");
    }
    Letter a = alpha->id(toks[0]);
    if (images[a]) {
      throw parse_error(ln, "duplicate rule for \"" + toks[0] + "\"");
    }
    Word im;
    for (std::size_t i = 2; i < toks.size(); ++i) {
      if (!alpha->contains(toks[i])) {
        throw parse_error(ln, "unknown token \"" + toks[i] + "\" in rule");
      }
      im.push_back(alpha->id(toks[i]));
    }
    images[a] = std::move(im);
  }
  std::vector<Word> sigma_images(n);
  for (std::size_t a = 0; a < n; ++a) {
    if (!images[a]) {
      throw validation_error("missing rule for \""
                             + alpha->token(static_cast<Letter>(a)) + "\"");
    }
    sigma_images[a] = std::move(*images[a]);
  }
  Morphism sigma(*alpha, *alpha, std::move(sigma_images));

  Morphism phi;
  if (code_lines.empty()) {
    phi = Morphism::identity(*alpha);
  } else {
    std::vector<std::optional<std::vector<std::string>>> phi_toks(n);
    for (auto const& [ln, toks] : code_lines) {
      if (!alpha->contains(toks[0])) {
        throw parse_error(ln, "unknown token \"" + toks[0] + "\" in code");
      }
      Letter a = alpha->id(toks[0]);
      if (phi_toks[a]) {
        throw parse_error(ln, "duplicate code for \"" + toks[0] + "\"");
      }
      phi_toks[a] = std::vector<std::string>(toks.begin() + 2, toks.end());
    }
    // Letters without an explicit code line map to their own token. The
    // codomain collects tokens in first-use order, so phi is always onto it.
    std::vector<std::string> cod_tokens;
    auto cod_id = [&cod_tokens](std::string const& tok) {
      for (std::size_t i = 0; i < cod_tokens.size(); ++i) {
        if (cod_tokens[i] == tok) {
          return static_cast<Letter>(i);
        }
      }
      cod_tokens.push_back(tok);
      return static_cast<Letter>(cod_tokens.size() - 1);
    };
    std::vector<std::vector<Letter>> raw_images(n);
    for (std::size_t a = 0; a < n; ++a) {
      std::vector<std::string> toks =
          phi_toks[a] ? *phi_toks[a]
                      : std::vector<std::string>{alpha->token(static_cast<Letter>(a))};
      for (auto const& t : toks) {
        raw_images[a].push_back(cod_id(t));
      }
    }
    if (cod_tokens.empty()) {
      throw validation_error("phi erases every letter; image alphabet empty");
    }
    Alphabet cod(std::move(cod_tokens));
    std::vector<Word> phi_images(n);
    for (std::size_t a = 0; a < n; ++a) {
      phi_images[a] = Word(raw_images[a].begin(), raw_images[a].end());
    }
    phi = Morphism(*alpha, cod, std::move(phi_images));
  }

  return SubstitutionSystem(std::move(sigma), alpha->id(*start_tok),
                            std::move(phi), std::move(label));
}

inline std::string emit_substitution_file(SubstitutionSystem const& sys) {
  std::ostringstream out;
  out << "alphabet";
  for (auto const& t : sys.alphabet().tokens()) {
    out << ' ' << t;
  }
  out << "\nstart " << sys.alphabet().token(sys.start()) << '\n';
  for (std::size_t a = 0; a < sys.alphabet().size(); ++a) {
    out << "rule " << sys.alphabet().token(static_cast<Letter>(a)) << " ->";
    for (Letter b : sys.sigma().image(static_cast<Letter>(a))) {
      out << ' ' << sys.alphabet().token(b);
    }
    out << '\n';
  }
  if (!sys.phi_identity()) {
    for (std::size_t a = 0; a < sys.alphabet().size(); ++a) {
      out << "code " << sys.alphabet().token(static_cast<Letter>(a)) << " ->";
      for (Letter b : sys.phi().image(static_cast<Letter>(a))) {
        out << ' ' << sys.image_alphabet().token(b);
      }
      out << '\n';
    }
  }
  return out.str();
}

inline constexpr std::size_t kDefaultLetterBudget = std::size_t(1) << 27;

//! Lazily generated prefix of sigma^omega(start), before phi. The buffer is
//! extended by expanding its own letters in order, so producing N letters
//! costs O(N * max |sigma(a)|) time and O(N) space. Single consumer.
class FixedPointStream {
 public:
  explicit FixedPointStream(SubstitutionSystem sys,
                            std::size_t budget = kDefaultLetterBudget)
      : sys_(std::move(sys)), budget_(budget) {
    if (sys_.sigma_erasing()) {
      throw validation_error(
          "erasing substitution: eliminate erasure (normalize) first");
    }
    buffer_ = sys_.sigma().image(sys_.start());
    expand_pos_ = 1;
  }

  SubstitutionSystem const& system() const noexcept { return sys_; }
  std::size_t generated() const noexcept { return buffer_.size(); }

  void ensure(std::size_t n) {
    if (n > budget_) {
      throw validation_error("prefix length " + std::to_string(n)
                             + " exceeds letter budget");
    }
    while (buffer_.size() < n) {
      // expand_pos_ < buffer_.size() always: the buffer stays strictly ahead
      // because |sigma(start)| >= 2 and sigma is non-erasing.
      Word const& im = sys_.sigma().image(buffer_[expand_pos_]);
      buffer_.insert(buffer_.end(), im.begin(), im.end());
      ++expand_pos_;
    }
  }

  Letter at(std::size_t i) {
    ensure(i + 1);
    return buffer_[i];
  }

  Word prefix(std::size_t n) {
    ensure(n);
    return Word(buffer_.begin(), buffer_.begin() + n);
  }

 private:
  SubstitutionSystem sys_;
  Word               buffer_;
  std::size_t        expand_pos_ = 0;
  std::size_t        budget_;
};

namespace detail {

//! Whether phi(sigma^omega(start)) is an infinite sequence: some letter with
//! a non-empty phi-image must recur in the fixed point.
inline bool image_is_infinite(SubstitutionSystem const& sys) {
  auto rec = recurrent_letters(sys.sigma(), sys.start());
  for (std::size_t a = 0; a < rec.size(); ++a) {
    if (rec[a] && !sys.phi().image(static_cast<Letter>(a)).empty()) {
      return true;
    }
  }
  return false;
}

//! Prefix of sigma^omega(start) computed by whole-word iteration; supports
//! erasing sigma (where streaming expansion cannot run). Used by the
//! normalization verifier and tests.
inline Word iterate_fixed_point_prefix(SubstitutionSystem const& sys,
                                       std::size_t N,
                                       std::size_t budget = kDefaultLetterBudget) {
  Word w{sys.start()};
  while (w.size() < N) {
    Word next = sys.sigma()(w);
    if (next.size() > budget) {
      throw validation_error("fixed point iteration exceeds letter budget");
    }
    if (next.size() == w.size()) {
      // sigma^n(start) is a prefix of sigma^{n+1}(start); a length plateau
      // therefore repeats forever, contradicting prolongability.
      throw validation_error("fixed point is finite; sigma not prolongable");
    }
    w = std::move(next);
  }
  w.resize(N);
  return w;
}

//! Prefix of the phi-image, supporting erasing sigma via iteration.
inline Word iterate_image_prefix(SubstitutionSystem const& sys, std::size_t N,
                                 std::size_t budget = kDefaultLetterBudget) {
  if (N == 0) {
    return {};
  }
  if (!image_is_infinite(sys)) {
    throw validation_error("image sequence is finite");
  }
  Word w{sys.start()};
  while (true) {
    Word next = sys.sigma()(w);
    if (next.size() > budget) {
      throw validation_error("fixed point iteration exceeds letter budget");
    }
    std::size_t img_len = 0;
    for (Letter a : next) {
      img_len += sys.phi().image(a).size();
    }
    bool stalled = next == w;
    w = std::move(next);
    if (img_len >= N) {
      break;
    }
    if (stalled) {
      throw validation_error("image sequence is finite");
    }
  }
  Word out;
  out.reserve(N);
  for (Letter a : w) {
    Word const& im = sys.phi().image(a);
    for (Letter b : im) {
      out.push_back(b);
      if (out.size() == N) {
        return out;
      }
    }
  }
  return out;
}

}  // namespace detail

//! Streaming prefix of the phi-image of the fixed point; sigma must be
//! non-erasing (erasing systems go through normalization first).
class ImageStream {
 public:
  explicit ImageStream(SubstitutionSystem sys,
                       std::size_t budget = kDefaultLetterBudget)
      : raw_(std::move(sys), budget), budget_(budget) {
    if (raw_.system().phi_erasing()
        && !detail::image_is_infinite(raw_.system())) {
      throw validation_error("image sequence is finite");
    }
  }

  SubstitutionSystem const& system() const noexcept { return raw_.system(); }

  void ensure(std::size_t n) {
    if (n > budget_) {
      throw validation_error("prefix length " + std::to_string(n)
                             + " exceeds letter budget");
    }
    while (out_.size() < n) {
      Word const& im = raw_.system().phi().image(raw_.at(raw_pos_));
      ++raw_pos_;
      out_.insert(out_.end(), im.begin(), im.end());
    }
  }

  Letter at(std::size_t i) {
    ensure(i + 1);
    return out_[i];
  }

  Word prefix(std::size_t n) {
    ensure(n);
    return Word(out_.begin(), out_.begin() + n);
  }

 private:
  FixedPointStream raw_;
  Word             out_;
  std::size_t      raw_pos_ = 0;
  std::size_t      budget_;
};

//! First N letters of phi(sigma^omega(start)).
inline Word fixed_point_prefix(SubstitutionSystem const& sys, std::size_t N,
                               std::size_t budget = kDefaultLetterBudget) {
  if (N == 0) {
    return {};
  }
  ImageStream stream(sys, budget);
  return stream.prefix(N);
}

}  // namespace subst

#endif  // SUBSTLIB_SYSTEM_HPP_
