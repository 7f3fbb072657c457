#ifndef SUBSTLIB_STRUCTURE_HPP_
#define SUBSTLIB_STRUCTURE_HPP_

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "algebraic.hpp"
#include "graph.hpp"
#include "matrix.hpp"
#include "morphism.hpp"
#include "normalize.hpp"
#include "system.hpp"
#include "word.hpp"

namespace subst {

//! Restriction of sigma to a subalphabet B with sigma(B) contained in B*.
struct SubSubstitution {
  std::vector<Letter> letters;      // ids in the parent alphabet, ascending
  Morphism            restriction;  // endomorphism on the subalphabet
  bool                primitive = false;
  PerronValue         eigenvalue;
};

//! All closed subalphabets arising as reachability closures of single
//! letters, plus the full alphabet. Every closed set is a union of these
//! closures, and every minimal one appears here.
inline std::vector<std::vector<Letter>> invariant_subalphabets(
    Morphism const& sigma) {
  if (!sigma.is_endomorphism()) {
    throw validation_error("invariant subalphabets require an endomorphism");
  }
  detail::LetterGraph g(sigma);
  std::set<std::vector<Letter>> seen;
  for (std::size_t a = 0; a < sigma.domain().size(); ++a) {
    seen.insert(g.closure(static_cast<Letter>(a)));
  }
  std::vector<Letter> full;
  for (std::size_t a = 0; a < sigma.domain().size(); ++a) {
    full.push_back(static_cast<Letter>(a));
  }
  seen.insert(full);
  std::vector<std::vector<Letter>> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end(),
            [](std::vector<Letter> const& x, std::vector<Letter> const& y) {
              if (x.size() != y.size()) {
                return x.size() < y.size();
              }
              return x < y;
            });
  return out;
}

//! Restriction of sigma to a closed subset (caller guarantees closure).
inline Morphism restrict_to(Morphism const& sigma,
                            std::vector<Letter> const& letters) {
  std::vector<std::size_t> remap(sigma.domain().size(), SIZE_MAX);
  std::vector<std::string> tokens;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    remap[letters[i]] = i;
    tokens.push_back(sigma.domain().token(letters[i]));
  }
  Alphabet alpha(tokens);
  std::vector<Word> images;
  for (Letter b : letters) {
    Word im;
    for (Letter c : sigma.image(b)) {
      if (remap[c] == SIZE_MAX) {
        throw validation_error("subset is not closed under sigma");
      }
      im.push_back(static_cast<Letter>(remap[c]));
    }
    images.push_back(std::move(im));
  }
  return Morphism(alpha, alpha, std::move(images));
}

//! Closed subalphabets whose restricted incidence matrix is primitive; a
//! 1x1 restriction counts as primitive exactly when its self-loop count is
//! positive.
inline std::vector<SubSubstitution> primitive_sub_substitutions(
    Morphism const& sigma) {
  std::vector<SubSubstitution> out;
  for (auto const& letters : invariant_subalphabets(sigma)) {
    Morphism r = restrict_to(sigma, letters);
    IntMatrix m = incidence_matrix(r);
    if (m.is_zero() || !is_primitive(m)) {
      continue;
    }
    SubSubstitution s;
    s.letters     = letters;
    s.restriction = std::move(r);
    s.primitive   = true;
    s.eigenvalue  = dominant_eigenvalue(m);
    out.push_back(std::move(s));
  }
  return out;
}

struct GoodnessVerdict {
  bool                           good = false;
  std::optional<SubSubstitution> witness;  // matching sub when good
  std::string                    reason;   // failing condition otherwise
};

//! Good = growing with a primitive sub-substitution whose dominating
//! eigenvalue equals (charpoly-exactly) the eigenvalue of sigma itself.
inline GoodnessVerdict is_good(Morphism const& sigma) {
  GoodnessVerdict v;
  auto growing = growing_letters(sigma);
  for (std::size_t a = 0; a < growing.size(); ++a) {
    if (!growing[a]) {
      v.reason = "not growing: letter \""
                 + sigma.domain().token(static_cast<Letter>(a))
                 + "\" stays bounded";
      return v;
    }
  }
  PerronValue alpha = dominant_eigenvalue(incidence_matrix(sigma));
  auto subs = primitive_sub_substitutions(sigma);
  for (auto& s : subs) {
    if (equals(s.eigenvalue, alpha)) {
      v.good    = true;
      v.witness = std::move(s);
      return v;
    }
  }
  v.reason = subs.empty()
                 ? "no primitive sub-substitution"
                 : "no primitive sub-substitution attains the dominating "
                   "eigenvalue";
  return v;
}

struct ReduceResult {
  SubstitutionSystem       system;  // sigma^k after erasure elimination
  unsigned long            k = 1;
  bool                     growing_or_flanked = false;
  bool                     has_primitive_sub  = false;
  std::vector<std::string> notes;
};

//! Primitive sub-substitutions of sigma^k, computed structurally: closures
//! in the k-step letter graph and submatrices of the k-th matrix power, so
//! the (possibly enormous) images of sigma^k are never materialized. For
//! k = 1 the restriction morphisms are included.
inline std::vector<SubSubstitution> primitive_sub_substitutions_of_power(
    Morphism const& sigma, unsigned long k) {
  if (k == 1) {
    return primitive_sub_substitutions(sigma);
  }
  std::size_t const n = sigma.domain().size();
  // boolean k-step adjacency
  using BoolMat = std::vector<std::vector<bool>>;
  auto mul = [n](BoolMat const& x, BoolMat const& y) {
    BoolMat z(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t t = 0; t < n; ++t) {
        if (x[i][t]) {
          for (std::size_t j = 0; j < n; ++j) {
            if (y[t][j]) {
              z[i][j] = true;
            }
          }
        }
      }
    }
    return z;
  };
  BoolMat base(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a) {
    for (Letter b : sigma.image(static_cast<Letter>(a))) {
      base[a][b] = true;
    }
  }
  BoolMat stepk(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    stepk[i][i] = true;
  }
  {
    unsigned long e = k;
    BoolMat sq = base;
    while (e > 0) {
      if (e & 1) {
        stepk = mul(stepk, sq);
      }
      e >>= 1;
      if (e > 0) {
        sq = mul(sq, sq);
      }
    }
  }
  // closures of single letters under the k-step edges
  std::set<std::vector<Letter>> seen;
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<bool> mask(n, false);
    std::vector<Letter> stack{static_cast<Letter>(a)};
    mask[a] = true;
    while (!stack.empty()) {
      Letter u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        if (stepk[u][v] && !mask[v]) {
          mask[v] = true;
          stack.push_back(static_cast<Letter>(v));
        }
      }
    }
    std::vector<Letter> cl;
    for (std::size_t b = 0; b < n; ++b) {
      if (mask[b]) {
        cl.push_back(static_cast<Letter>(b));
      }
    }
    seen.insert(std::move(cl));
  }
  std::vector<Letter> full;
  for (std::size_t a = 0; a < n; ++a) {
    full.push_back(static_cast<Letter>(a));
  }
  seen.insert(full);

  IntMatrix mk = incidence_matrix(sigma).pow(k);
  std::vector<SubSubstitution> out;
  for (auto const& letters : seen) {
    std::vector<std::size_t> keep(letters.begin(), letters.end());
    IntMatrix sub = mk.submatrix(keep);
    if (sub.is_zero() || !is_primitive(sub)) {
      continue;
    }
    SubSubstitution s;
    s.letters    = letters;
    s.primitive  = true;
    s.eigenvalue = dominant_eigenvalue(sub);
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(),
            [](SubSubstitution const& x, SubSubstitution const& y) {
              if (x.letters.size() != y.letters.size()) {
                return x.letters.size() < y.letters.size();
              }
              return x.letters < y.letters;
            });
  return out;
}

namespace detail {

//! First (or last) growing letter of sigma^k(a) and whether anything
//! precedes (follows) it, computed recursively: growing letters descend
//! only from growing letters, so the boundary structure of sigma^k(a) is
//! determined by the boundary growing letters of the images.
struct BoundaryInfo {
  bool   has_growing = false;
  Letter first = 0, last = 0;
  bool   before_first = false;  // non-empty prefix before the first
  bool   after_last   = false;  // non-empty suffix after the last
};

inline BoundaryInfo boundary_info(Morphism const& sigma,
                                  std::vector<bool> const& growing,
                                  unsigned long k, Letter a,
                                  std::map<std::pair<unsigned long, Letter>,
                                           BoundaryInfo>& memo) {
  if (k == 0) {
    BoundaryInfo b;
    b.has_growing = growing[a];
    b.first = b.last = a;
    return b;
  }
  auto key = std::make_pair(k, a);
  auto it  = memo.find(key);
  if (it != memo.end()) {
    return it->second;
  }
  BoundaryInfo out;
  Word const& w = sigma.image(a);
  std::size_t fg = w.size(), lg = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (growing[w[i]]) {
      fg = std::min(fg, i);
      lg = i;
    }
  }
  if (fg == w.size()) {
    out.has_growing = false;
  } else {
    out.has_growing = true;
    BoundaryInfo bf = boundary_info(sigma, growing, k - 1, w[fg], memo);
    BoundaryInfo bl = boundary_info(sigma, growing, k - 1, w[lg], memo);
    out.first        = bf.first;
    out.before_first = bf.before_first || fg > 0;
    out.last         = bl.last;
    out.after_last   = bl.after_last || lg + 1 < w.size();
  }
  memo.emplace(key, out);
  return out;
}

//! Whether sigma^k is growing, or some growing letter a
//! has an occurrence of a in sigma^k(a) flanked on one side by a non-empty
//! word over non-growing letters only. Equivalently the first (or last)
//! growing letter of sigma^k(a) is a itself with a non-empty flank, since
//! everything outside the growing span is non-growing.
inline bool has_growing_or_flanked_letter(Morphism const& sigma,
                                      unsigned long k = 1) {
  auto growing = growing_letters(sigma);
  bool all = true;
  for (bool g : growing) {
    all = all && g;
  }
  if (all) {
    return true;
  }
  std::map<std::pair<unsigned long, Letter>, BoundaryInfo> memo;
  for (std::size_t a = 0; a < growing.size(); ++a) {
    if (!growing[a]) {
      continue;
    }
    auto b = boundary_info(sigma, growing, k, static_cast<Letter>(a), memo);
    if (!b.has_growing) {
      continue;
    }
    if ((b.first == a && b.before_first) || (b.last == a && b.after_last)) {
      return true;
    }
  }
  return false;
}

}  // namespace detail

//! Power-and-normalize reduction: returns sigma^k (erasure-eliminated
//! first when needed) aiming for the standard preconditions: non-erasing,
//! growing-or-flanked growing letter, and a primitive sub-substitution.
//! The smallest k achieving whatever is achievable within the cap is
//! chosen; each condition is reported.
inline ReduceResult reduce(SubstitutionSystem const& sys,
                           unsigned long k_cap = 64) {
  ReduceResult res;
  SubstitutionSystem base = sys;
  if (sys.sigma_erasing() || !sys.phi_coding()) {
    NormalizedSystem norm = eliminate_erasure(sys);
    base = norm.normalized;
    res.notes.push_back("erasure eliminated before powering (pipeline power "
                        + std::to_string(norm.k) + ")");
  }

  std::optional<unsigned long> best_partial;
  for (unsigned long k = 1; k <= k_cap; ++k) {
    bool has_sub = !primitive_sub_substitutions_of_power(base.sigma(), k).empty();
    bool flanked = detail::has_growing_or_flanked_letter(base.sigma(), k);
    if (has_sub && flanked) {
      res.k = k;
      res.growing_or_flanked = true;
      res.has_primitive_sub  = true;
      break;
    }
    if (has_sub && !best_partial) {
      best_partial = k;
    }
  }
  if (!res.has_primitive_sub) {
    if (!best_partial) {
      throw validation_error("no power up to " + std::to_string(k_cap)
                             + " has a primitive sub-substitution");
    }
    res.k = *best_partial;
    res.has_primitive_sub = true;
    res.growing_or_flanked =
        detail::has_growing_or_flanked_letter(base.sigma(), res.k);
    res.notes.push_back(
        "no power up to " + std::to_string(k_cap)
        + " has a growing-or-flanked letter; returning the smallest power "
          "with a primitive sub-substitution");
  }
  Morphism sk = res.k == 1 ? base.sigma()
                           : detail::power_with_budget(base.sigma(), res.k);
  res.system = SubstitutionSystem(sk, base.start(), base.phi());
  return res;
}

}  // namespace subst

#endif  // SUBSTLIB_STRUCTURE_HPP_
