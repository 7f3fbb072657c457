#ifndef SUBSTLIB_LANGUAGE_HPP_
#define SUBSTLIB_LANGUAGE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "system.hpp"
#include "word.hpp"

namespace subst {

namespace detail {

//! Failure function (border array) of w.
inline std::vector<std::size_t> border_array(Word const& w) {
  std::vector<std::size_t> b(w.size(), 0);
  std::size_t k = 0;
  for (std::size_t i = 1; i < w.size(); ++i) {
    while (k > 0 && w[i] != w[k]) {
      k = b[k - 1];
    }
    if (w[i] == w[k]) {
      ++k;
    }
    b[i] = k;
  }
  return b;
}

inline std::string_view view_of(Word const& w, std::size_t pos, std::size_t len) {
  return std::string_view(reinterpret_cast<char const*>(w.data()) + pos, len);
}

}  // namespace detail

//! Prefix of the image sequence, supporting erasing sigma via whole-word
//! iteration.
inline Word image_prefix(SubstitutionSystem const& sys, std::size_t N,
                         std::size_t budget = kDefaultLetterBudget) {
  if (sys.sigma_erasing()) {
    return detail::iterate_image_prefix(sys, N, budget);
  }
  return fixed_point_prefix(sys, N, budget);
}

//! All occurrence positions of u in x, overlaps included (KMP).
inline std::vector<std::size_t> occurrences(Word const& x, Word const& u) {
  if (u.empty()) {
    throw validation_error("occurrences of the empty word are undefined");
  }
  std::vector<std::size_t> out;
  if (u.size() > x.size()) {
    return out;
  }
  auto border = detail::border_array(u);
  std::size_t k = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    while (k > 0 && x[i] != u[k]) {
      k = border[k - 1];
    }
    if (x[i] == u[k]) {
      ++k;
    }
    if (k == u.size()) {
      out.push_back(i + 1 - u.size());
      k = border[k - 1];
    }
  }
  return out;
}

inline bool contains_factor(Word const& x, Word const& u) {
  if (u.empty()) {
    return true;
  }
  return !occurrences(x, u).empty();
}

//! Return words to u within a prefix of x: the pieces between consecutive
//! occurrences. Each return word w satisfies: u is a prefix of wu and u
//! occurs exactly twice in wu.
struct ReturnWordIndex {
  Word                     u;
  std::vector<std::size_t> occurrence_positions;
  std::vector<Word>        return_words;  // deduplicated, sorted
  std::size_t              max_gap    = 0;
  std::size_t              prefix_len = 0;
};

inline ReturnWordIndex return_words(Word const& x, Word const& u) {
  ReturnWordIndex idx;
  idx.u          = u;
  idx.prefix_len = x.size();
  idx.occurrence_positions = occurrences(x, u);
  if (idx.occurrence_positions.size() < 2) {
    throw validation_error("u needs at least two occurrences in the prefix");
  }
  std::set<Word> seen;
  for (std::size_t i = 0; i + 1 < idx.occurrence_positions.size(); ++i) {
    std::size_t const p = idx.occurrence_positions[i];
    std::size_t const q = idx.occurrence_positions[i + 1];
    idx.max_gap = std::max(idx.max_gap, q - p);
    seen.insert(Word(x.begin() + p, x.begin() + q));
  }
  idx.return_words.assign(seen.begin(), seen.end());
  return idx;
}

//! Max gap between successive occurrences of u in each prefix checkpoint.
//! A plateau across checkpoints is evidence of bounded gaps, never proof.
inline std::vector<std::pair<std::size_t, std::size_t>> max_gap_profile(
    SubstitutionSystem const& sys, Word const& u,
    std::vector<std::size_t> const& checkpoints) {
  if (checkpoints.empty()) {
    return {};
  }
  std::size_t const N = *std::max_element(checkpoints.begin(), checkpoints.end());
  Word x = image_prefix(sys, N);
  auto occ = occurrences(x, u);
  if (occ.empty()) {
    throw validation_error("u does not occur in the analyzed prefix");
  }
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t cp : checkpoints) {
    std::size_t gap = 0;
    for (std::size_t i = 0; i + 1 < occ.size(); ++i) {
      if (occ[i + 1] + u.size() > cp) {
        break;
      }
      gap = std::max(gap, occ[i + 1] - occ[i]);
    }
    out.emplace_back(cp, gap);
  }
  return out;
}

//! Exact ratio kept alongside the rendered estimate.
struct Ratio {
  std::size_t num = 0;
  std::size_t den = 1;
  double value() const { return den == 0 ? 0.0 : double(num) / double(den); }
  //! max-comparison of fractions num/den
  bool less_than(Ratio const& o) const { return num * o.den < o.num * den; }
};

struct RecurrenceEstimate {
  Ratio       L;               // sup over tested u of max |w| / |u|
  std::size_t K = 0;           // max #R_x(u) seen
  std::size_t min_len = 1, max_len = 0;
  std::size_t prefix_len = 0;
  std::size_t factors_tested = 0;
};

//! Fold every factor of length <= n_max with two or more occurrences in the
//! N-prefix into the linear-recurrence estimates.
inline RecurrenceEstimate recurrence_constants(SubstitutionSystem const& sys,
                                               std::size_t n_max,
                                               std::size_t N) {
  RecurrenceEstimate est;
  est.max_len    = n_max;
  est.prefix_len = N;
  Word x = image_prefix(sys, N);
  for (std::size_t n = 1; n <= n_max && n <= x.size(); ++n) {
    std::unordered_map<std::string_view, std::vector<std::size_t>> occ;
    for (std::size_t i = 0; i + n <= x.size(); ++i) {
      occ[detail::view_of(x, i, n)].push_back(i);
    }
    for (auto& [sv, positions] : occ) {
      if (positions.size() < 2) {
        continue;
      }
      ++est.factors_tested;
      std::set<std::string_view> distinct;
      for (std::size_t i = 0; i + 1 < positions.size(); ++i) {
        std::size_t gap = positions[i + 1] - positions[i];
        Ratio r{gap, n};
        if (est.L.less_than(r)) {
          est.L = r;
        }
        distinct.insert(detail::view_of(x, positions[i], gap));
      }
      est.K = std::max(est.K, distinct.size());
    }
  }
  return est;
}

//! Both linear-recurrence bounds: |u|/L <= |w| <= L|u| for every return
//! word, and #R_x(u) <= K. False is a result, not an error.
inline bool check_lr_bounds(ReturnWordIndex const& idx, Ratio const& L,
                            std::size_t K) {
  if (idx.return_words.size() > K) {
    return false;
  }
  for (auto const& w : idx.return_words) {
    // |u| / L <= |w|  <=>  |u| * den <= |w| * num
    if (idx.u.size() * L.den > w.size() * L.num) {
      return false;
    }
    // |w| <= L |u|  <=>  |w| * den <= num * |u|
    if (w.size() * L.den > L.num * idx.u.size()) {
      return false;
    }
  }
  return true;
}

struct ConcatenationBound {
  std::size_t count = 0;       // distinct factors in R_x(u)* up to length l
  double      log_bound = 0;   // log of (1 + K)^(l L / |u|)
  bool        ok = false;      // count <= bound
  bool        truncated = false;
};

//! Count the distinct words of length <= l that are both concatenations of
//! return words to u and factors of the prefix; compare with the
//! concatenation bound (1 + K)^(l L / |u|).
inline ConcatenationBound check_concatenation_bound(
    SubstitutionSystem const& sys, Word const& u, std::size_t l,
    Ratio const& L, std::size_t K, std::size_t N = 10000,
    std::size_t cap = 200000) {
  Word x = image_prefix(sys, N);
  ConcatenationBound out;
  double exponent = (double(l) * double(L.num)) / (double(u.size()) * double(L.den));
  out.log_bound   = exponent * std::log1p(double(K));

  auto idx = return_words(x, u);
  std::set<Word> seen;
  std::vector<Word> frontier{Word{}};
  seen.insert(Word{});
  while (!frontier.empty()) {
    Word w = std::move(frontier.back());
    frontier.pop_back();
    for (auto const& r : idx.return_words) {
      if (w.size() + r.size() > l) {
        continue;
      }
      Word next = w;
      next.insert(next.end(), r.begin(), r.end());
      if (seen.count(next) || !contains_factor(x, next)) {
        continue;
      }
      if (seen.size() >= cap) {
        out.truncated = true;
        break;
      }
      seen.insert(next);
      frontier.push_back(std::move(next));
    }
    if (out.truncated) {
      break;
    }
  }
  out.count = seen.size();
  out.ok    = std::log(double(out.count)) <= out.log_bound + 1e-12;
  return out;
}

//! Length-n factors occurring in the tail of the N-prefix: the desk-scale
//! proxy for the recurrent language (default tail is the second half).
inline std::vector<Word> recurrent_factors(SubstitutionSystem const& sys,
                                           std::size_t n, std::size_t N,
                                           double tail_fraction = 0.5) {
  if (n == 0 || N < n) {
    throw validation_error("recurrent factors need n >= 1 and N >= n");
  }
  Word x = image_prefix(sys, N);
  std::size_t start = static_cast<std::size_t>(double(N) * (1.0 - tail_fraction));
  std::set<Word> seen;
  for (std::size_t i = start; i + n <= x.size(); ++i) {
    seen.insert(Word(x.begin() + i, x.begin() + i + n));
  }
  return std::vector<Word>(seen.begin(), seen.end());
}

//! All length-n factors of the full prefix.
inline std::vector<Word> factors_of_prefix(Word const& x, std::size_t n) {
  std::set<Word> seen;
  for (std::size_t i = 0; i + n <= x.size(); ++i) {
    seen.insert(Word(x.begin() + i, x.begin() + i + n));
  }
  return std::vector<Word>(seen.begin(), seen.end());
}

}  // namespace subst

#endif  // SUBSTLIB_LANGUAGE_HPP_
