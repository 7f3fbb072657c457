#ifndef SUBSTLIB_WORD_HPP_
#define SUBSTLIB_WORD_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace subst {

//! Letters are dense integer ids; display tokens live in the Alphabet and
//! only appear at I/O boundaries. Alphabets are capped at 255 letters so a
//! word is a plain byte vector.
using Letter = std::uint8_t;
using Word   = std::vector<Letter>;

inline constexpr std::size_t kMaxAlphabetSize = 255;

struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct parse_error : std::runtime_error {
  parse_error(std::size_t line, std::string const& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg),
        line(line) {}
  std::size_t line;
};

//! An ordered set of distinct display tokens. The position of a token in the
//! declaration order is its letter id.
class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
    if (tokens_.empty()) {
      throw validation_error("alphabet must be non-empty");
    }
    if (tokens_.size() > kMaxAlphabetSize) {
      throw validation_error("alphabet has " + std::to_string(tokens_.size())
                             + " letters, limit is "
                             + std::to_string(kMaxAlphabetSize));
    }
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      if (tokens_[i].empty()) {
        throw validation_error("empty alphabet token");
      }
      auto [it, inserted] = ids_.emplace(tokens_[i], static_cast<Letter>(i));
      if (!inserted) {
        throw validation_error("duplicate alphabet token \"" + tokens_[i] + "\"");
      }
    }
  }

  //! Convenience for tests and fixtures: one letter per character.
  static Alphabet from_chars(std::string_view chars) {
    std::vector<std::string> toks;
    toks.reserve(chars.size());
    for (char c : chars) {
      toks.emplace_back(1, c);
    }
    return Alphabet(std::move(toks));
  }

  std::size_t size() const noexcept { return tokens_.size(); }

  std::string const& token(Letter id) const { return tokens_.at(id); }

  bool contains(std::string const& tok) const { return ids_.count(tok) != 0; }

  Letter id(std::string const& tok) const {
    auto it = ids_.find(tok);
    if (it == ids_.end()) {
      throw validation_error("unknown token \"" + tok + "\"");
    }
    return it->second;
  }

  Word word_from_tokens(std::vector<std::string> const& toks) const {
    Word w;
    w.reserve(toks.size());
    for (auto const& t : toks) {
      w.push_back(id(t));
    }
    return w;
  }

  //! One letter per character; only valid when every token is a single char.
  Word word_from_chars(std::string_view chars) const {
    Word w;
    w.reserve(chars.size());
    for (char c : chars) {
      w.push_back(id(std::string(1, c)));
    }
    return w;
  }

  //! Render a word with tokens. Single-char alphabets concatenate, otherwise
  //! tokens are space separated.
  std::string render(Word const& w) const {
    bool compact = true;
    for (auto const& t : tokens_) {
      if (t.size() != 1) {
        compact = false;
        break;
      }
    }
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!compact && i > 0) {
        out += ' ';
      }
      out += token(w[i]);
    }
    return out;
  }

  bool operator==(Alphabet const& other) const { return tokens_ == other.tokens_; }
  bool operator!=(Alphabet const& other) const { return !(*this == other); }

  std::vector<std::string> const& tokens() const noexcept { return tokens_; }

 private:
  std::vector<std::string>                tokens_;
  std::unordered_map<std::string, Letter> ids_;
};

inline std::size_t count_letter(Word const& w, Letter a) {
  std::size_t n = 0;
  for (Letter x : w) {
    if (x == a) {
      ++n;
    }
  }
  return n;
}

}  // namespace subst

#endif  // SUBSTLIB_WORD_HPP_
